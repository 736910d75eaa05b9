#include "tripod/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "tripod/sweep.hpp"

namespace tripod {

void PulseSequence::finalize() {
    signal.validate();
    c1.validate("control_c1");
    c2.validate("control_c2");

    events.clear();
    events.push_back({signal.center_us, "signal_center"});

    switch_off_us = -1.0;
    storage_time_us = 0.0;
    double first_retrieval = -1.0;

    const ControlField* arms[2] = {&c1, &c2};
    const char* names[2] = {"c1", "c2"};
    for (int a = 0; a < 2; ++a) {
        const ControlField& arm = *arms[a];
        bool off_seen = arm.initial_level <= 0.0;
        for (const auto& ev : arm.events) {
            std::ostringstream what;
            what << names[a] << (ev.level > 0.0 ? " on" : " off");
            events.push_back({ev.t_us, what.str()});
            if (ev.level > 0.0 && !off_seen)
                throw ConfigError(std::string("control_") + names[a] + ".events",
                                  "retrieval precedes switch-off");
            if (ev.level <= 0.0 && !off_seen) {
                off_seen = true;
                switch_off_us = std::max(switch_off_us, ev.t_us);
            } else if (ev.level > 0.0) {
                if (first_retrieval < 0.0 || ev.t_us < first_retrieval)
                    first_retrieval = ev.t_us;
            }
        }
    }
    std::sort(events.begin(), events.end(),
              [](const TimelineEntry& a, const TimelineEntry& b) { return a.t_us < b.t_us; });

    if (switch_off_us >= 0.0) {
        if (!(signal.center_us < switch_off_us))
            throw ConfigError("signal.center_us",
                              "signal pulse center must precede the control switch-off");
        if (first_retrieval >= 0.0) {
            if (first_retrieval <= switch_off_us)
                throw ConfigError("sequence", "retrieval precedes switch-off");
            storage_time_us = first_retrieval - switch_off_us;
        }
    }
}

double PulseSequence::max_rate(const TripodMedium& m) const {
    double rate = m.excited_decay;
    rate = std::max(rate, m.collective_coupling);
    // Events may raise a control above its nominal peak (level is a power
    // fraction), so the stability bound must follow the largest level.
    auto arm_rate = [](const ControlField& arm) {
        double level = 1.0;
        for (const auto& ev : arm.events)
            level = std::max(level, ev.level);
        return arm.peak_rabi * std::sqrt(level);
    };
    rate = std::max(rate, arm_rate(c1));
    rate = std::max(rate, arm_rate(c2));
    rate = std::max(rate, std::abs(signal.detuning));
    rate = std::max(rate, std::abs(c1.detuning));
    rate = std::max(rate, std::abs(c2.detuning));
    return rate;
}

double power_to_rabi(double power_uw, double rabi_mhz_at_100uw) {
    return mhz_to_rad(rabi_mhz_at_100uw) * std::sqrt(power_uw / 100.0);
}

namespace {

ControlField make_arm(ControlArm which, double power_uw, double detuning_rad,
                      double rabi_mhz_at_100uw) {
    ControlField f;
    f.arm = which;
    f.power_uw = power_uw;
    f.peak_rabi = power_to_rabi(power_uw, rabi_mhz_at_100uw);
    f.detuning = detuning_rad;
    f.initial_level = power_uw > 0.0 ? 1.0 : 0.0;
    return f;
}

constexpr double kSwitchOff = 1.0;  // us; input/storage phase ends here
constexpr double kRamp = 0.05;      // us, raised-cosine
constexpr double kRetrievalLen = 1.0;

} // namespace

PulseSequence splitting_experiment(double t1_us, double t2_us,
                                   double p_c1_uw, double p_c2_uw,
                                   RetrievalOrder order,
                                   double rabi_mhz_at_100uw) {
    if (!(t1_us < t2_us))
        throw ValidationError("splitting_experiment: t1 must precede t2");
    if (!(p_c1_uw > 0.0) || p_c2_uw < 0.0)
        throw ValidationError("splitting_experiment: control powers must be positive");

    PulseSequence seq;
    seq.signal.center_us = 0.7;
    seq.signal.width_us = 0.3;
    seq.c1 = make_arm(ControlArm::c1, p_c1_uw, 0.0, rabi_mhz_at_100uw);
    seq.c2 = make_arm(ControlArm::c2, p_c2_uw, 0.0, rabi_mhz_at_100uw);

    double t_first = kSwitchOff + t1_us;
    double t_second = kSwitchOff + t2_us;
    ControlField& first = order == RetrievalOrder::c1_first ? seq.c1 : seq.c2;
    ControlField& second = order == RetrievalOrder::c1_first ? seq.c2 : seq.c1;
    first.events = {{kSwitchOff, 0.0, kRamp},
                    {t_first, 1.0, kRamp},
                    {t_first + kRetrievalLen, 0.0, kRamp}};
    if (second.initial_level > 0.0) {
        second.events = {{kSwitchOff, 0.0, kRamp},
                         {t_second, 1.0, kRamp},
                         {t_second + kRetrievalLen, 0.0, kRamp}};
    }
    seq.finalize();
    return seq;
}

PulseSequence detuning_experiment(double delta_c_mhz, double storage_us,
                                  double phase_offset_rad, double power_uw,
                                  double rabi_mhz_at_100uw) {
    if (!(storage_us > 0.0))
        throw ValidationError("detuning_experiment: storage time must be > 0");

    PulseSequence seq;
    seq.signal.center_us = 0.7;
    seq.signal.width_us = 0.3;
    seq.c1 = make_arm(ControlArm::c1, power_uw, mhz_to_rad(delta_c_mhz), rabi_mhz_at_100uw);
    seq.c2 = make_arm(ControlArm::c2, power_uw, -mhz_to_rad(delta_c_mhz), rabi_mhz_at_100uw);

    double t_on = kSwitchOff + storage_us;
    seq.c1.events = {{kSwitchOff, 0.0, kRamp}, {t_on, 1.0, kRamp}};
    seq.c2.events = {{kSwitchOff, 0.0, kRamp}, {t_on, 1.0, kRamp, phase_offset_rad}};
    seq.finalize();
    return seq;
}

double suggested_t_end(const PulseSequence& seq) {
    double last = seq.signal.center_us + 2.0 * seq.signal.width_us;
    auto scan = [&](const ControlField& f) {
        for (const auto& ev : f.events)
            last = std::max(last, ev.t_us + ev.ramp_us);
    };
    scan(seq.c1);
    scan(seq.c2);
    return last + 1.2;
}

SimulationGrid grid_for(const TripodMedium& m, const PulseSequence& seq,
                        double t_end_us, std::size_t n_z) {
    SimulationGrid g;
    g.t_start = 0.0;
    g.t_end = t_end_us;
    double dt_raw = std::min(0.001, 0.15 / seq.max_rate(m));
    auto steps = static_cast<std::size_t>(std::ceil(t_end_us / dt_raw));
    g.dt = t_end_us / static_cast<double>(steps);
    g.n_z = n_z;
    return g;
}

RunConfig apply_sweep_value(const RunConfig& base, SweepParameter p, double value) {
    RunConfig cfg = base;
    switch (p) {
    case SweepParameter::detuning_mhz:
        cfg.sequence.c1.detuning = mhz_to_rad(value);
        cfg.sequence.c2.detuning = -mhz_to_rad(value);
        break;
    case SweepParameter::power_ratio: {
        if (value < 0.0)
            throw ValidationError("power_ratio sweep values must be >= 0");
        cfg.sequence.c2.power_uw = value * cfg.sequence.c1.power_uw;
        cfg.sequence.c2.peak_rabi =
            power_to_rabi(cfg.sequence.c2.power_uw, cfg.rabi_mhz_at_100uw);
        break;
    }
    case SweepParameter::storage_us: {
        if (!(value > 0.0))
            throw ValidationError("storage_us sweep values must be > 0");
        double t_first = cfg.sequence.switch_off_us + cfg.sequence.storage_time_us;
        double delta = value - cfg.sequence.storage_time_us;
        auto shift = [&](ControlField& f) {
            for (auto& ev : f.events)
                if (ev.t_us >= t_first - 1e-9)
                    ev.t_us += delta;
        };
        shift(cfg.sequence.c1);
        shift(cfg.sequence.c2);
        cfg.grid.t_end += delta;
        break;
    }
    }
    cfg.sequence.finalize();
    return cfg;
}

SweepParameter sweep_parameter_from_string(const std::string& s) {
    if (s == "detuning_mhz")
        return SweepParameter::detuning_mhz;
    if (s == "power_ratio")
        return SweepParameter::power_ratio;
    if (s == "storage_us")
        return SweepParameter::storage_us;
    throw ValidationError("unknown sweep parameter: " + s);
}

std::string to_string(SweepParameter p) {
    switch (p) {
    case SweepParameter::detuning_mhz: return "detuning_mhz";
    case SweepParameter::power_ratio: return "power_ratio";
    case SweepParameter::storage_us: return "storage_us";
    }
    return "?";
}

std::vector<std::pair<double, FieldRecord>>
run_sweep(const SweepSpec& spec, unsigned max_threads) {
    if (spec.values.empty())
        throw ValidationError("run_sweep: values list is empty");
    for (double v : spec.values)
        if (!std::isfinite(v))
            throw ValidationError("run_sweep: values must be finite");

    unsigned cap = max_threads;
    if (cap == 0) {
        if (const char* env = std::getenv("TRIPOD_SIM_THREADS"))
            cap = static_cast<unsigned>(std::max(1L, std::strtol(env, nullptr, 10)));
        else
            cap = std::max(1u, std::thread::hardware_concurrency());
    }
    cap = std::min<unsigned>(cap, static_cast<unsigned>(spec.values.size()));

    std::vector<std::pair<double, FieldRecord>> results(spec.values.size());
    std::vector<std::string> failures(spec.values.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= spec.values.size())
                return;
            double v = spec.values[i];
            try {
                RunConfig cfg = apply_sweep_value(spec.base, spec.parameter, v);
                results[i] = {v, simulate(cfg.medium, cfg.sequence, cfg.grid)};
            } catch (const std::exception& e) {
                std::ostringstream msg;
                msg << to_string(spec.parameter) << " = " << v << ": " << e.what();
                failures[i] = msg.str();
            }
        }
    };

    if (cap <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(cap);
        for (unsigned i = 0; i < cap; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    for (const auto& f : failures)
        if (!f.empty())
            throw SimulationError("sweep failed at " + f);
    return results;
}

} // namespace tripod
