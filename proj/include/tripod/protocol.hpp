#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tripod/core.hpp"

namespace tripod {

struct TimelineEntry {
    double t_us;
    std::string what;
};

/// Full experiment timeline: signal pulse, both control arms and the
/// derived storage/retrieval structure.
struct PulseSequence {
    SignalPulse signal;
    ControlField c1;
    ControlField c2;

    // Derived by finalize():
    double switch_off_us = -1.0;      // latest of the two arms' first off
    double storage_time_us = 0.0;     // switch-off to first retrieval on
    std::vector<TimelineEntry> events; // merged, sorted timeline

    /// Recomputes the derived fields and checks the semantic invariants
    /// (signal precedes switch-off, retrieval after switch-off, ...).
    void finalize();

    /// Fastest angular rate in the sequence, for grid validation.
    double max_rate(const TripodMedium& m) const;
};

/// Everything a run needs; what the config file describes.
struct RunConfig {
    int schema_version = 1;
    TripodMedium medium;
    PulseSequence sequence;
    SimulationGrid grid;
    double rabi_mhz_at_100uw = 4.0; // power-to-Rabi calibration constant
    // Raw cyclic-MHz medium inputs, kept for faithful serialization.
    double medium_od = 1.3;
    double medium_gamma_mhz = 5.75;
    double medium_gamma_s_mhz = 0.01;
};

/// Rabi frequency (rad/us) for a laser power, under the calibration
/// "100 uW maps to rabi_mhz_at_100uw cyclic MHz".
double power_to_rabi(double power_uw, double rabi_mhz_at_100uw);

enum class RetrievalOrder { c1_first, c2_first };

/// Time-bin splitting sequence (simultaneous switch-off, sequential
/// retrieval). t1/t2 are storage times of the two retrieval windows.
PulseSequence splitting_experiment(double t1_us, double t2_us,
                                   double p_c1_uw, double p_c2_uw,
                                   RetrievalOrder order,
                                   double rabi_mhz_at_100uw = 4.0);

/// Opposite-detuning interference sequence: both arms on during storage
/// and retrieval at equal power, detunings +-delta_c, storage time T.
/// `phase_offset` is the instrumentation phase step applied to c2 at
/// retrieval onset.
PulseSequence detuning_experiment(double delta_c_mhz, double storage_us,
                                  double phase_offset_rad = 0.0,
                                  double power_uw = 100.0,
                                  double rabi_mhz_at_100uw = 4.0);

/// Grid sized for a sequence: dt resolving the fastest rate, horizon
/// `t_end_us`, default 64 slices.
SimulationGrid grid_for(const TripodMedium& m, const PulseSequence& seq,
                        double t_end_us, std::size_t n_z = 64);

/// A horizon that covers the last event plus retrieval tail.
double suggested_t_end(const PulseSequence& seq);

enum class SweepParameter { detuning_mhz, power_ratio, storage_us };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::detuning_mhz;
    std::vector<double> values;
    RunConfig base;
};

/// The base config with one sweep value applied.
RunConfig apply_sweep_value(const RunConfig& base, SweepParameter p, double value);

SweepParameter sweep_parameter_from_string(const std::string& s);
std::string to_string(SweepParameter p);

} // namespace tripod
