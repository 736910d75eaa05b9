#pragma once

#include <complex>
#include <utility>

#include "tripod/errors.hpp"

namespace tripod::polariton {

using cd = std::complex<double>;

/// theta sets the photonic-vs-atomic character (tan theta = gN/|Omega|),
/// phi the split between the two spinwaves (tan phi = Omega_c1/Omega_c2).
struct MixingAngles {
    double theta = 0.0; // [0, pi/2]
    double phi = 0.0;   // [0, pi/2]
};

MixingAngles mixing_angles(double omega_c1, double omega_c2, double gn);

struct PolaritonState {
    cd psi;       // dark polariton
    cd psi_perp;  // orthogonal spin-only polariton
    MixingAngles angles;
    double phase_c1 = 0.0; // control static phases entering the basis
    double phase_c2 = 0.0;
};

/// Projects (E_s, sigma_bc1, sigma_bc2) onto the dark/orthogonal basis:
///   psi      = cos(th) E - sin(th)(sin(ph) e^{-i p1} s1 + cos(ph) e^{-i p2} s2)
///   psi_perp =            sin(ph) e^{-i p2} s2 - cos(ph) e^{-i p1} s1
/// The phase placement keeps the two spin vectors orthonormal for arbitrary
/// control phases, and the signs are chosen so the (psi, psi_perp)
/// coordinates evolve consistently under `evolve` below.
std::pair<cd, cd> compose_dark(cd signal, cd sigma_bc1, cd sigma_bc2,
                               const MixingAngles& angles,
                               double phase_c1, double phase_c2);

/// Unitary evolution of (psi, psi_perp) in the stationary-spinwave regime
/// with opposite control detunings +-delta_c. Generator:
///   H = [[ds - dc cos 2phi, dc sin 2phi], [dc sin 2phi, ds + dc cos 2phi]]
/// applied as exp(+i H t).
PolaritonState evolve(const PolaritonState& state, double delta_s,
                      double delta_c, double duration_us);

/// Time-bin superposition produced by sequential retrieval at t1 and t2.
struct TimeBinState {
    cd amp_t1;        // sin(phi)
    cd amp_t2;        // cos(phi) e^{i delta_phase}
    double t1_us = 0.0;
    double t2_us = 0.0;
    double delta_phase = 0.0; // control-field phase ledger
};

TimeBinState time_bin_state(double phi, double delta_phase,
                            double t1_us, double t2_us);

/// In-phase fraction of a stored dark state after free evolution for
/// storage time T, projected onto the retrieval dark mode whose c2 phase
/// is shifted by `phase_offset`. For phi = pi/4, ds = 0 this reduces to
/// cos^2(dc*T - phase_offset/2).
double retrieval_fraction(double storage_us, double delta_c, double delta_s,
                          double phi, double phase_offset);

} // namespace tripod::polariton
