#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tripod/errors.hpp"
#include "tripod/units.hpp"

namespace tripod {

/// Atomic/optical parameters of the effective tripod medium. The medium
/// length is normalized to 1; only optical-depth-scaled quantities are
/// observable. Immutable after construction.
struct TripodMedium {
    double optical_depth = 0.0;      // dimensionless, >= 0
    double excited_decay = 0.0;      // Gamma, rad/us, > 0
    double spin_dephasing = 0.0;     // gamma_s, rad/us, >= 0
    double collective_coupling = 0.0; // gN, rad/us (kappa == gN by convention)
};

/// Builds a medium whose control-free resonant intensity transmission is
/// exp(-optical_depth). With the symmetric convention kappa == gN the
/// steady-state amplitude transmission is exp(-2 gN^2 / Gamma), so
/// gN = sqrt(optical_depth * Gamma) / 2.
TripodMedium build_medium(double optical_depth, double gamma, double gamma_s);

/// Re-derives the optical depth of a medium from its coupling constant
/// (the calibration round trip used by the constructor check).
double medium_optical_depth(const TripodMedium& m);

/// One scheduled power change of a control arm. The power fraction ramps
/// from its previous value to `level` over `ramp_us` with a raised-cosine
/// profile starting at `t_us`. `extra_phase_rad` is added to the arm's
/// static phase from `t_us` on (models instrumentation phase steps).
struct SwitchEvent {
    double t_us = 0.0;
    double level = 0.0;       // target power fraction in [0, 1]
    double ramp_us = 0.0;
    double extra_phase_rad = 0.0;
};

enum class ControlArm { c1, c2 };

/// One control arm: power/Rabi envelope over time, detuning, static phase
/// and the switch schedule. Rabi frequency scales as sqrt(power).
struct ControlField {
    ControlArm arm = ControlArm::c1;
    double power_uw = 0.0;    // nominal laser power at level 1
    double peak_rabi = 0.0;   // rad/us at level 1 (full Rabi frequency)
    double detuning = 0.0;    // rad/us
    double phase0 = 0.0;      // static phase, rad
    double initial_level = 1.0; // power fraction before the first event
    std::vector<SwitchEvent> events; // strictly increasing in t_us

    double level_at(double t_us) const;
    double rabi_at(double t_us) const;   // peak_rabi * sqrt(level)
    double phase_at(double t_us) const;  // phase0 + accumulated event phases

    /// Time at which the arm first reaches level 0, or a negative value
    /// if it never switches off.
    double first_off_time() const;

    void validate(const char* name) const;
};

/// Normalized signal pulse: Gaussian envelope with unit integrated
/// intensity, so photon counts are mean_photons * |E|^2 * dt.
struct SignalPulse {
    double center_us = 0.0;
    double width_us = 0.3;      // intensity FWHM
    double mean_photons = 0.8;  // in (0, 1]
    double detuning = 0.0;      // delta_s, rad/us
    // Extra complex factor on the envelope; not part of the config schema,
    // used to probe linearity of the solver.
    std::complex<double> amplitude_scale{1.0, 0.0};

    std::complex<double> amplitude_at(double t_us) const;
    void validate() const;
};

/// Uniform time grid and spatial slicing for the solver.
struct SimulationGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    double dt = 0.0;     // us
    std::size_t n_z = 64;

    std::size_t n_steps() const;
};

/// Accepts iff dt * max_rate < 0.2, n_z >= 2 and the span is an integer
/// number of steps. `max_rate` is the fastest angular rate in the
/// sequence (max of Gamma, |Omega|, |delta|).
void validate_grid(const SimulationGrid& grid, double max_rate);

} // namespace tripod
