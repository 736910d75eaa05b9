#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "tripod/core.hpp"
#include "tripod/protocol.hpp"

namespace tripod {

/// Solver output: exit envelope vs time, sampled spinwave profiles and
/// photon-flux bookkeeping (fractions of the injected flux).
struct FieldRecord {
    std::vector<double> times;                        // one per step, size n_steps+1
    std::vector<std::complex<double>> exit_envelope;  // E_s at z = 1

    std::vector<double> snapshot_times;
    std::vector<std::vector<std::complex<double>>> sigma1_snapshots;
    std::vector<std::vector<std::complex<double>>> sigma2_snapshots;

    double input_flux = 0.0;        // integral |E_in|^2 dt on the grid
    double transmitted_fraction = 0.0;
    double stored_fraction = 0.0;   // spinwave + optical-coherence norm at t_end
    double scattered_fraction = 0.0;

    SimulationGrid grid;
    bool weak_probe_warning = false;
    std::vector<std::string> warnings;
};

/// Integrates the weak-probe tripod Maxwell-Bloch equations in the
/// co-moving frame (z normalized to [0,1], first-order upwind in z,
/// classical RK4 in t). Deterministic: identical inputs give
/// bit-identical output.
FieldRecord simulate(const TripodMedium& medium, const PulseSequence& sequence,
                     const SimulationGrid& grid);

/// Steady-state exit/input amplitude ratio for a monochromatic probe
/// under constant control fields (closed-form susceptibility of the same
/// equations).
std::complex<double> steady_transmission(const TripodMedium& medium,
                                         double omega_c1, double omega_c2,
                                         double delta_s,
                                         double delta_c1, double delta_c2);

/// Delay of the transmitted pulse peak relative to vacuum transit, from a
/// slow-light run with a long pulse and a constant control of magnitude
/// |Omega|. Scales as optical_depth * Gamma / |Omega|^2.
double group_delay(const TripodMedium& medium, double omega_abs);

/// Windowed exit intensity divided by the injected flux.
double storage_efficiency(const FieldRecord& record,
                          std::pair<double, double> retrieval_window_us);

} // namespace tripod
