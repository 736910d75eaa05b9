#include "tripod/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tripod/errors.hpp"

namespace tripod::analysis {

Waveform make_waveform(const FieldRecord& record, double mean_photons,
                       double bin_us) {
    if (!(bin_us > 0.0))
        throw AnalysisError("make_waveform: bin width must be > 0");
    Waveform w;
    w.t0_us = record.grid.t_start;
    w.bin_us = bin_us;
    double span = record.grid.t_end - record.grid.t_start;
    auto n_bins = static_cast<std::size_t>(std::ceil(span / bin_us - 1e-9));
    w.counts.assign(n_bins, 0.0);
    // Each sample represents the interval [t_k, t_k + dt); spread its counts
    // over the bins it overlaps so that bin occupancy is independent of the
    // dt/bin phase relationship.
    const double dt = record.grid.dt;
    for (std::size_t k = 0; k < record.times.size(); ++k) {
        double counts = mean_photons * std::norm(record.exit_envelope[k]) * dt;
        double lo = record.times[k] - w.t0_us;
        double hi = lo + dt;
        auto idx = static_cast<std::size_t>(std::max(0.0, std::floor(lo / bin_us)));
        for (; idx < n_bins; ++idx) {
            double b0 = bin_us * static_cast<double>(idx);
            double b1 = b0 + bin_us;
            if (b0 >= hi)
                break;
            double overlap = std::min(hi, b1) - std::max(lo, b0);
            if (overlap > 0.0)
                w.counts[idx] += counts * (overlap / dt);
        }
    }
    return w;
}

double window_counts(const Waveform& w, double t0_us, double t1_us) {
    const double eps = 1e-9 * w.bin_us;
    if (t0_us > t1_us)
        throw AnalysisError("window_counts: window start after end");
    if (t0_us < w.t0_us - eps || t1_us > w.t_end() + eps)
        throw AnalysisError("window_counts: window outside waveform span");
    double sum = 0.0;
    for (std::size_t i = 0; i < w.counts.size(); ++i) {
        double bin_start = w.t0_us + w.bin_us * static_cast<double>(i);
        if (bin_start >= t0_us - eps && bin_start < t1_us - eps)
            sum += w.counts[i];
    }
    return sum;
}

SplitResult splitting_ratio(const Waveform& w,
                            std::pair<double, double> window1_us,
                            std::pair<double, double> window2_us) {
    bool disjoint = window1_us.second <= window2_us.first + 1e-12 ||
                    window2_us.second <= window1_us.first + 1e-12;
    if (!disjoint)
        throw AnalysisError("splitting_ratio: windows overlap");
    SplitResult r;
    r.window1 = window1_us;
    r.window2 = window2_us;
    r.n_c1 = window_counts(w, window1_us.first, window1_us.second);
    r.n_c2 = window_counts(w, window2_us.first, window2_us.second);
    if (r.n_c1 <= 0.0)
        throw AnalysisError("splitting_ratio: zero counts in the c1 window");
    r.eta = r.n_c2 / r.n_c1;
    return r;
}

namespace {

// Prominence of a local maximum: height above the higher of the two
// valley floors reached before meeting a strictly taller sample.
double prominence(const std::vector<double>& v, std::size_t i) {
    double left_min = v[i];
    for (std::size_t j = i; j-- > 0;) {
        left_min = std::min(left_min, v[j]);
        if (v[j] > v[i])
            break;
    }
    double right_min = v[i];
    for (std::size_t j = i + 1; j < v.size(); ++j) {
        right_min = std::min(right_min, v[j]);
        if (v[j] > v[i])
            break;
    }
    return v[i] - std::max(left_min, right_min);
}

} // namespace

BeatingEstimate beating_period(const Waveform& w, double retrieval_start_us,
                               double prominence_fraction) {
    auto first = static_cast<std::size_t>(
        std::max(0.0, std::ceil((retrieval_start_us - w.t0_us) / w.bin_us)));
    if (first + 2 >= w.counts.size())
        throw AnalysisError("beating_period: waveform too short after retrieval start");
    std::vector<double> v(w.counts.begin() + static_cast<long>(first), w.counts.end());

    double peak = *std::max_element(v.begin(), v.end());
    if (!(peak > 0.0))
        throw AnalysisError("beating_period: empty waveform");
    double threshold = prominence_fraction * peak;

    std::vector<double> positions;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1]))
            continue;
        if (prominence(v, i) < threshold)
            continue;
        double refine = 0.0;
        double den = v[i - 1] - 2.0 * v[i] + v[i + 1];
        if (den < 0.0)
            refine = 0.5 * (v[i - 1] - v[i + 1]) / den;
        positions.push_back((static_cast<double>(first + i) + refine) * w.bin_us);
    }
    if (positions.size() < 2)
        throw AnalysisError("beating_period: fewer than 2 qualifying maxima");

    double spacing = (positions.back() - positions.front()) /
                     static_cast<double>(positions.size() - 1);
    return {spacing, static_cast<int>(positions.size())};
}

std::vector<std::pair<double, double>>
sweep_curve(const std::vector<std::pair<double, FieldRecord>>& results,
            double window_t0_us, double window_t1_us, double mean_photons) {
    if (results.empty())
        throw AnalysisError("sweep_curve: no results");
    std::vector<std::pair<double, double>> curve;
    curve.reserve(results.size());
    for (const auto& [value, record] : results) {
        Waveform w = make_waveform(record, mean_photons);
        curve.emplace_back(value, window_counts(w, window_t0_us, window_t1_us));
    }
    return curve;
}

} // namespace tripod::analysis
