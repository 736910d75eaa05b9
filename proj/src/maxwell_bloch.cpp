#include "tripod/maxwell_bloch.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "tripod/kernels.hpp"

namespace tripod {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

kernels::BlochCoeffs coeffs_at(const TripodMedium& m, const PulseSequence& seq,
                               double t) {
    const double o1 = seq.c1.rabi_at(t);
    const double o2 = seq.c2.rabi_at(t);
    const double p1 = seq.c1.phase_at(t);
    const double p2 = seq.c2.phase_at(t);
    const double ds = seq.signal.detuning;

    kernels::BlochCoeffs c;
    c.c_ba = -cd{0.5 * m.excited_decay, ds};
    c.c_field = kI * m.collective_coupling;
    c.c1_fwd = kI * (0.5 * o1) * std::exp(kI * p1);
    c.c2_fwd = kI * (0.5 * o2) * std::exp(kI * p2);
    c.c_s1 = -cd{m.spin_dephasing, ds - seq.c1.detuning};
    c.c1_bwd = kI * (0.5 * o1) * std::exp(-kI * p1);
    c.c_s2 = -cd{m.spin_dephasing, ds - seq.c2.detuning};
    c.c2_bwd = kI * (0.5 * o2) * std::exp(-kI * p2);
    return c;
}

// Marches E along z (first-order upwind) from the input boundary value,
// then evaluates the atomic derivatives. E_re/E_im get the slice values;
// returns the exit amplitude E(z=1).
cd eval_derivs(const kernels::Kernels& K, std::size_t n, double dz, double kappa,
               const double* state, cd e_in, const kernels::BlochCoeffs& c,
               std::vector<double>& e_re, std::vector<double>& e_im,
               double* deriv) {
    const double* ba_re = state;
    const double* ba_im = state + n;
    double er = e_in.real(), ei = e_in.imag();
    for (std::size_t j = 0; j < n; ++j) {
        e_re[j] = er;
        e_im[j] = ei;
        // E_{j+1} = E_j + dz * i * kappa * sigma_ba_j
        er -= dz * kappa * ba_im[j];
        ei += dz * kappa * ba_re[j];
    }
    K.bloch_derivs(n, state, e_re.data(), e_im.data(), c, deriv);
    return {er, ei};
}

double max_coherence_sq(std::size_t n, const double* s) {
    double worst = 0.0;
    for (std::size_t group = 0; group < 3; ++group) {
        const double* re = s + 2 * group * n;
        const double* im = re + n;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, re[i] * re[i] + im[i] * im[i]);
    }
    return worst;
}

} // namespace

FieldRecord simulate(const TripodMedium& medium, const PulseSequence& sequence,
                     const SimulationGrid& grid) {
    validate_grid(grid, sequence.max_rate(medium));

    const auto& K = kernels::active();
    const std::size_t n = grid.n_z;
    const std::size_t m6 = 6 * n;
    const double dz = 1.0 / static_cast<double>(n);
    const double dt = grid.dt;
    const double kappa = medium.collective_coupling;
    const std::size_t n_steps = grid.n_steps();

    std::vector<double> y(m6, 0.0), tmp(m6);
    std::vector<double> k1(m6), k2(m6), k3(m6), k4(m6);
    std::vector<double> e_re(n), e_im(n);

    FieldRecord rec;
    rec.grid = grid;
    rec.times.reserve(n_steps + 1);
    rec.exit_envelope.reserve(n_steps + 1);

    const std::size_t snap_stride = std::max<std::size_t>(1, n_steps / 200);
    auto take_snapshot = [&](double t) {
        rec.snapshot_times.push_back(t);
        std::vector<cd> s1(n), s2(n);
        for (std::size_t i = 0; i < n; ++i) {
            s1[i] = {y[2 * n + i], y[3 * n + i]};
            s2[i] = {y[4 * n + i], y[5 * n + i]};
        }
        rec.sigma1_snapshots.push_back(std::move(s1));
        rec.sigma2_snapshots.push_back(std::move(s2));
    };

    double scattered = 0.0;
    double transmitted = 0.0;
    double input = 0.0;
    double max_sigma_sq = 0.0;

    auto input_amp = [&](double t) { return sequence.signal.amplitude_at(t); };

    // Initial sample (empty medium).
    {
        double t0 = grid.t_start;
        auto c = coeffs_at(medium, sequence, t0);
        cd exit = eval_derivs(K, n, dz, kappa, y.data(), input_amp(t0), c,
                              e_re, e_im, k1.data());
        rec.times.push_back(t0);
        rec.exit_envelope.push_back(exit);
        take_snapshot(t0);
        input += 0.5 * std::norm(input_amp(t0)) * dt;
        transmitted += 0.5 * std::norm(exit) * dt;
    }

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = grid.t_start + static_cast<double>(step) * dt;
        const double th = t + 0.5 * dt;
        const double t1 = t + dt;
        const auto ca = coeffs_at(medium, sequence, t);
        const auto cb = coeffs_at(medium, sequence, th);
        const auto cc = coeffs_at(medium, sequence, t1);

        eval_derivs(K, n, dz, kappa, y.data(), input_amp(t), ca, e_re, e_im, k1.data());
        K.axpy(m6, 0.5 * dt, k1.data(), y.data(), tmp.data());
        eval_derivs(K, n, dz, kappa, tmp.data(), input_amp(th), cb, e_re, e_im, k2.data());
        K.axpy(m6, 0.5 * dt, k2.data(), y.data(), tmp.data());
        eval_derivs(K, n, dz, kappa, tmp.data(), input_amp(th), cb, e_re, e_im, k3.data());
        K.axpy(m6, dt, k3.data(), y.data(), tmp.data());
        eval_derivs(K, n, dz, kappa, tmp.data(), input_amp(t1), cc, e_re, e_im, k4.data());
        K.rk4_combine(m6, dt, k1.data(), k2.data(), k3.data(), k4.data(), y.data());

        // Sample the exit field from the updated state.
        cd exit = eval_derivs(K, n, dz, kappa, y.data(), input_amp(t1), cc,
                              e_re, e_im, tmp.data());
        rec.times.push_back(t1);
        rec.exit_envelope.push_back(exit);

        const bool last = (step + 1 == n_steps);
        double w = last ? 0.5 : 1.0;
        input += w * std::norm(input_amp(t1)) * dt;
        transmitted += w * std::norm(exit) * dt;

        double ba_norm = K.sum_sq(2 * n, y.data());
        double spin_norm = K.sum_sq(4 * n, y.data() + 2 * n);
        scattered += dt * dz * (medium.excited_decay * ba_norm +
                                2.0 * medium.spin_dephasing * spin_norm);

        if (step % 16 == 0 || last) {
            double worst = max_coherence_sq(n, y.data());
            max_sigma_sq = std::max(max_sigma_sq, worst);
            if (!std::isfinite(worst) || worst > 1.0e6) {
                std::ostringstream err;
                err << "solver unstable at t = " << t1
                    << " us (coherence magnitude " << std::sqrt(worst) << ")";
                throw SimulationError(err.str());
            }
        }
        if ((step + 1) % snap_stride == 0)
            take_snapshot(t1);
    }

    double stored = dz * K.sum_sq(m6, y.data());
    rec.input_flux = input;
    if (input > 0.0) {
        rec.transmitted_fraction = transmitted / input;
        rec.stored_fraction = stored / input;
        rec.scattered_fraction = scattered / input;
    }
    if (std::sqrt(max_sigma_sq * sequence.signal.mean_photons) > 0.3) {
        rec.weak_probe_warning = true;
        rec.warnings.push_back("weak-probe approximation strained: coherence amplitude exceeded 0.3");
    }
    if (grid.dt > 0.002)
        rec.warnings.push_back("exit envelope sampled coarser than 2 ns");
    return rec;
}

std::complex<double> steady_transmission(const TripodMedium& medium,
                                         double omega_c1, double omega_c2,
                                         double delta_s,
                                         double delta_c1, double delta_c2) {
    cd total{0.5 * medium.excited_decay, delta_s};
    const double omegas[2] = {omega_c1, omega_c2};
    const double detunings[2] = {delta_c1, delta_c2};
    for (int j = 0; j < 2; ++j) {
        if (omegas[j] == 0.0)
            continue;
        cd den{medium.spin_dephasing, delta_s - detunings[j]};
        if (den == cd{0.0, 0.0})
            return {1.0, 0.0}; // dark-state pole: perfect transparency
        total += (0.25 * omegas[j] * omegas[j]) / den;
    }
    const double g = medium.collective_coupling;
    return std::exp(-(g * g) / total);
}

double group_delay(const TripodMedium& medium, double omega_abs) {
    if (!(omega_abs > 0.0))
        throw ValidationError("group_delay: |Omega| must be > 0");

    const double delay_est =
        medium.optical_depth * medium.excited_decay / (omega_abs * omega_abs);

    PulseSequence seq;
    seq.signal.width_us = 1.0;
    seq.signal.center_us = 3.0;
    seq.signal.mean_photons = 1.0;
    seq.c1.arm = ControlArm::c1;
    seq.c1.power_uw = 100.0;
    seq.c1.peak_rabi = omega_abs;
    seq.c2.arm = ControlArm::c2;
    seq.c2.power_uw = 0.0;
    seq.c2.peak_rabi = 0.0;
    seq.c2.initial_level = 0.0;
    seq.finalize();

    SimulationGrid grid;
    grid.t_start = 0.0;
    grid.t_end = seq.signal.center_us + 2.0 + 4.0 * delay_est;
    double dt_raw = std::min(0.001, 0.15 / seq.max_rate(medium));
    auto steps = static_cast<std::size_t>(std::ceil((grid.t_end - grid.t_start) / dt_raw));
    grid.dt = (grid.t_end - grid.t_start) / static_cast<double>(steps);
    grid.n_z = 64;

    FieldRecord rec = simulate(medium, seq, grid);

    std::size_t peak = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < rec.exit_envelope.size(); ++k) {
        double v = std::norm(rec.exit_envelope[k]);
        if (v > best) {
            best = v;
            peak = k;
        }
    }
    double t_peak = rec.times[peak];
    if (peak > 0 && peak + 1 < rec.exit_envelope.size()) {
        double ym = std::norm(rec.exit_envelope[peak - 1]);
        double y0 = best;
        double yp = std::norm(rec.exit_envelope[peak + 1]);
        double den = ym - 2.0 * y0 + yp;
        if (den < 0.0)
            t_peak += 0.5 * grid.dt * (ym - yp) / den;
    }
    return t_peak - seq.signal.center_us;
}

double storage_efficiency(const FieldRecord& record,
                          std::pair<double, double> retrieval_window_us) {
    if (!(retrieval_window_us.second > retrieval_window_us.first))
        throw AnalysisError("storage_efficiency: empty retrieval window");
    if (record.input_flux <= 0.0)
        return 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < record.times.size(); ++k) {
        double t = record.times[k];
        if (t >= retrieval_window_us.first && t < retrieval_window_us.second)
            sum += std::norm(record.exit_envelope[k]) * record.grid.dt;
    }
    return sum / record.input_flux;
}

} // namespace tripod
