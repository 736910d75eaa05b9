#include "tripod/core.hpp"

#include <cmath>
#include <sstream>

namespace tripod {

TripodMedium build_medium(double optical_depth, double gamma, double gamma_s) {
    if (optical_depth < 0.0)
        throw ValidationError("optical_depth must be >= 0");
    if (!(gamma > 0.0))
        throw ValidationError("excited_decay must be > 0");
    if (gamma_s < 0.0)
        throw ValidationError("spin_dephasing must be >= 0");
    TripodMedium m;
    m.optical_depth = optical_depth;
    m.excited_decay = gamma;
    m.spin_dephasing = gamma_s;
    // Beer-Lambert calibration with kappa == gN:
    // |T|^2 = exp(-4 gN^2 / Gamma) == exp(-OD)
    m.collective_coupling = 0.5 * std::sqrt(optical_depth * gamma);
    return m;
}

double medium_optical_depth(const TripodMedium& m) {
    return 4.0 * m.collective_coupling * m.collective_coupling / m.excited_decay;
}

double ControlField::level_at(double t_us) const {
    double level = initial_level;
    for (const auto& ev : events) {
        if (t_us < ev.t_us)
            break;
        if (ev.ramp_us <= 0.0 || t_us >= ev.t_us + ev.ramp_us) {
            level = ev.level;
        } else {
            double x = (t_us - ev.t_us) / ev.ramp_us;
            level = level + (ev.level - level) * 0.5 * (1.0 - std::cos(M_PI * x));
            break; // ramps do not overlap; nothing later has started
        }
    }
    return level;
}

double ControlField::rabi_at(double t_us) const {
    double level = level_at(t_us);
    return level > 0.0 ? peak_rabi * std::sqrt(level) : 0.0;
}

double ControlField::phase_at(double t_us) const {
    double phase = phase0;
    for (const auto& ev : events) {
        if (t_us < ev.t_us)
            break;
        phase += ev.extra_phase_rad;
    }
    return phase;
}

double ControlField::first_off_time() const {
    if (initial_level <= 0.0)
        return -1.0; // never on; treat as off from the start
    for (const auto& ev : events)
        if (ev.level <= 0.0)
            return ev.t_us;
    return -1.0;
}

void ControlField::validate(const char* name) const {
    std::ostringstream err;
    if (power_uw < 0.0) {
        err << name << ": power must be >= 0";
        throw ValidationError(err.str());
    }
    double prev_end = -1e300;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& ev = events[i];
        if (ev.level < 0.0 || ev.ramp_us < 0.0) {
            err << name << ".events[" << i << "]: level and ramp must be >= 0";
            throw ValidationError(err.str());
        }
        if (ev.t_us < prev_end) {
            err << name << ".events[" << i
                << "]: events must be strictly increasing and ramps must not overlap";
            throw ValidationError(err.str());
        }
        prev_end = ev.t_us + ev.ramp_us;
        if (i > 0 && ev.t_us <= events[i - 1].t_us) {
            err << name << ".events[" << i << "]: times must be strictly increasing";
            throw ValidationError(err.str());
        }
    }
}

std::complex<double> SignalPulse::amplitude_at(double t_us) const {
    // |E|^2 is a normalized Gaussian with intensity FWHM == width_us.
    double sigma = width_us / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    double x = (t_us - center_us) / sigma;
    double norm = std::pow(kTwoPi * sigma * sigma, -0.25);
    return amplitude_scale * (norm * std::exp(-0.25 * x * x));
}

void SignalPulse::validate() const {
    if (!(width_us > 0.0))
        throw ValidationError("signal width must be > 0");
    if (!(mean_photons > 0.0) || mean_photons > 1.0)
        throw ValidationError("mean_photons must be in (0, 1]");
}

std::size_t SimulationGrid::n_steps() const {
    return static_cast<std::size_t>(std::llround((t_end - t_start) / dt));
}

void validate_grid(const SimulationGrid& grid, double max_rate) {
    if (!(grid.dt > 0.0))
        throw ValidationError("grid: dt must be > 0");
    if (grid.n_z < 2)
        throw ValidationError("grid: n_z must be >= 2");
    if (!(grid.t_end > grid.t_start))
        throw ValidationError("grid: t_end must exceed t_start");
    double steps = (grid.t_end - grid.t_start) / grid.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6 * steps)
        throw ValidationError("grid: (t_end - t_start)/dt must be an integer step count");
    double product = grid.dt * max_rate;
    if (!(product < 0.2)) {
        std::ostringstream err;
        err << "grid: dt * max_rate = " << product
            << " violates the stability bound 0.2 (max rate " << max_rate
            << " rad/us); reduce dt below " << 0.2 / max_rate;
        throw ValidationError(err.str());
    }
}

} // namespace tripod
