#pragma once

#include <utility>
#include <vector>

#include "tripod/maxwell_bloch.hpp"

namespace tripod::analysis {

/// Expected photon counts per uniform time bin (2 ns default).
struct Waveform {
    double t0_us = 0.0;
    double bin_us = 0.002;
    std::vector<double> counts;

    double t_end() const { return t0_us + bin_us * static_cast<double>(counts.size()); }
};

Waveform make_waveform(const FieldRecord& record, double mean_photons,
                       double bin_us = 0.002);

/// Sum of bin counts whose bin start lies in [t0, t1). Additive over
/// adjacent windows by construction.
double window_counts(const Waveform& w, double t0_us, double t1_us);

struct SplitResult {
    double n_c1 = 0.0;
    double n_c2 = 0.0;
    double eta = 0.0; // n_c2 / n_c1
    std::pair<double, double> window1, window2;
};

SplitResult splitting_ratio(const Waveform& w,
                            std::pair<double, double> window1_us,
                            std::pair<double, double> window2_us);

struct BeatingEstimate {
    double period_us = 0.0;
    int n_maxima = 0;
};

/// Mean spacing of local maxima (5%-of-peak prominence threshold,
/// quadratic interpolation of peak positions) after retrieval_start.
BeatingEstimate beating_period(const Waveform& w, double retrieval_start_us,
                               double prominence_fraction = 0.05);

/// Applies a fixed count window to every record, preserving order.
std::vector<std::pair<double, double>>
sweep_curve(const std::vector<std::pair<double, FieldRecord>>& results,
            double window_t0_us, double window_t1_us, double mean_photons);

} // namespace tripod::analysis
