#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tripod/config.hpp"
#include "tripod/protocol.hpp"
#include "tripod/sweep.hpp"
#include "tripod/units.hpp"

using namespace tripod;

namespace {

std::string minimal_config() {
    return R"({
  "schema_version": 1,
  "medium": {"od": 1.3, "gamma_mhz": 5.75, "gamma_s_mhz": 0.01},
  "signal": {"width_us": 0.3, "center_us": 0.7, "mean_photons": 0.8, "detuning_mhz": 0},
  "control_c1": {"power_uw": 100, "detuning_mhz": 0, "phase_rad": 0,
    "events": [{"t_us": 1.0, "level": 0, "ramp_us": 0.05},
               {"t_us": 1.5, "level": 1, "ramp_us": 0.05}]},
  "control_c2": {"power_uw": 100, "detuning_mhz": 0, "phase_rad": 0,
    "events": [{"t_us": 1.0, "level": 0, "ramp_us": 0.05},
               {"t_us": 2.5, "level": 1, "ramp_us": 0.05}]},
  "grid": {"dt_us": 0.001, "t_end_us": 4.0, "n_z": 64}
})";
}

RunConfig random_config(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RunConfig cfg;
    cfg.medium_od = 0.5 + 2.0 * u(rng);
    cfg.medium_gamma_mhz = 4.0 + 2.0 * u(rng);
    cfg.medium_gamma_s_mhz = 0.02 * u(rng);
    cfg.rabi_mhz_at_100uw = 3.0 + 2.0 * u(rng);
    cfg.medium = build_medium(cfg.medium_od, mhz_to_rad(cfg.medium_gamma_mhz),
                              mhz_to_rad(cfg.medium_gamma_s_mhz));
    double t1 = 0.2 + u(rng);
    double t2 = t1 + 0.3 + u(rng);
    cfg.sequence = splitting_experiment(t1, t2, 50.0 + 100.0 * u(rng),
                                        50.0 + 100.0 * u(rng),
                                        u(rng) < 0.5 ? RetrievalOrder::c1_first
                                                     : RetrievalOrder::c2_first,
                                        cfg.rabi_mhz_at_100uw);
    cfg.sequence.c1.detuning = mhz_to_rad(u(rng) - 0.5);
    cfg.sequence.c2.detuning = mhz_to_rad(u(rng) - 0.5);
    cfg.sequence.c2.phase0 = u(rng);
    cfg.grid = grid_for(cfg.medium, cfg.sequence, suggested_t_end(cfg.sequence));
    return cfg;
}

} // namespace

TEST_CASE("parse_sequence: minimal valid document") {
    auto cfg = parse_config(minimal_config());
    CHECK(cfg.sequence.switch_off_us == doctest::Approx(1.0));
    CHECK(cfg.sequence.storage_time_us == doctest::Approx(0.5));
    CHECK(cfg.sequence.c1.peak_rabi == doctest::Approx(mhz_to_rad(4.0)));
    // timeline sorted
    for (std::size_t i = 1; i < cfg.sequence.events.size(); ++i)
        CHECK(cfg.sequence.events[i - 1].t_us <= cfg.sequence.events[i].t_us);
}

TEST_CASE("parse_sequence: unknown keys are rejected with a path") {
    auto text = minimal_config();
    text.insert(text.rfind('}'), R"(, "extra": 1)");
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("extra") != std::string::npos);
    }

    std::string bad_nested = minimal_config();
    bad_nested.replace(bad_nested.find("\"ramp_us\": 0.05}"), 16,
                       "\"ramp_us\": 0.05, \"foo\": 1}");
    try {
        parse_config(bad_nested);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.path()).find("events[0].foo") != std::string::npos);
    }
}

TEST_CASE("parse_sequence: retrieval before switch-off is a semantic error") {
    std::string text = R"({
  "schema_version": 1,
  "medium": {"od": 1.3, "gamma_mhz": 5.75, "gamma_s_mhz": 0.01},
  "signal": {"width_us": 0.1, "center_us": 0.2, "mean_photons": 0.8, "detuning_mhz": 0},
  "control_c1": {"power_uw": 100, "detuning_mhz": 0, "phase_rad": 0,
    "events": [{"t_us": 0.3, "level": 1, "ramp_us": 0.05},
               {"t_us": 0.5, "level": 0, "ramp_us": 0.05}]},
  "control_c2": {"power_uw": 100, "detuning_mhz": 0, "phase_rad": 0,
    "events": [{"t_us": 0.5, "level": 0, "ramp_us": 0.05}]},
  "grid": {"dt_us": 0.001, "t_end_us": 2.0, "n_z": 64}
})";
    CHECK_THROWS_WITH_AS(parse_config(text),
                         doctest::Contains("retrieval precedes switch-off"),
                         ConfigError);
}

TEST_CASE("parse/serialize round-trip over generated documents") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 100; ++i) {
        RunConfig cfg = random_config(rng);
        std::string text = serialize_config(cfg);
        RunConfig once = parse_config(text);
        std::string text2 = serialize_config(once);
        CHECK(text == text2);
        RunConfig twice = parse_config(text2);
        CHECK(once.sequence.c1.peak_rabi == twice.sequence.c1.peak_rabi);
        CHECK(once.sequence.storage_time_us == twice.sequence.storage_time_us);
        CHECK(once.grid.dt == twice.grid.dt);
        CHECK(once.medium.collective_coupling == twice.medium.collective_coupling);
    }
}

TEST_CASE("splitting_experiment builder") {
    auto seq = splitting_experiment(0.5, 1.5, 100.0, 100.0, RetrievalOrder::c1_first);
    CHECK(seq.switch_off_us == doctest::Approx(1.0));
    CHECK(seq.storage_time_us == doctest::Approx(0.5));
    CHECK(seq.c1.events.size() == 3);
    CHECK(seq.c1.events[1].t_us == doctest::Approx(1.5));
    CHECK(seq.c2.events[1].t_us == doctest::Approx(2.5));

    SUBCASE("single-control memory when P_c2 = 0") {
        auto single = splitting_experiment(0.5, 1.5, 100.0, 0.0, RetrievalOrder::c1_first);
        CHECK(single.c2.peak_rabi == 0.0);
        CHECK(single.c2.events.empty());
    }
    SUBCASE("power ratio sets the predicted eta through the mixing angle") {
        auto s = splitting_experiment(0.5, 1.5, 100.0, 200.0, RetrievalOrder::c1_first);
        double ratio = (s.c2.peak_rabi * s.c2.peak_rabi) /
                       (s.c1.peak_rabi * s.c1.peak_rabi);
        CHECK(ratio == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("invalid ordering") {
        CHECK_THROWS_AS(splitting_experiment(1.5, 0.5, 100.0, 100.0,
                                             RetrievalOrder::c1_first),
                        ValidationError);
    }
}

TEST_CASE("detuning_experiment builder") {
    auto seq = detuning_experiment(2.0, 0.4, 0.78 * M_PI);
    CHECK(seq.c1.detuning == doctest::Approx(mhz_to_rad(2.0)));
    CHECK(seq.c2.detuning == doctest::Approx(-mhz_to_rad(2.0)));
    CHECK(seq.storage_time_us == doctest::Approx(0.4));
    CHECK(seq.c2.events[1].extra_phase_rad == doctest::Approx(0.78 * M_PI));
    // phase steps in only at retrieval
    CHECK(seq.c2.phase_at(0.5) == doctest::Approx(0.0));
    CHECK(seq.c2.phase_at(1.5) == doctest::Approx(0.78 * M_PI));
}

TEST_CASE("builders always produce sequences that reparse cleanly") {
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        RunConfig cfg = random_config(rng);
        CHECK_NOTHROW(parse_config(serialize_config(cfg)));
    }
}

TEST_CASE("run_sweep") {
    RunConfig base;
    base.medium = build_medium(1.3, mhz_to_rad(5.75), 0.0);
    base.medium_od = 1.3;
    base.medium_gamma_s_mhz = 0.0;
    base.sequence = detuning_experiment(0.5, 0.5);
    base.grid = grid_for(base.medium, base.sequence, suggested_t_end(base.sequence));

    SUBCASE("empty values is an error") {
        SweepSpec spec{SweepParameter::detuning_mhz, {}, base};
        CHECK_THROWS_AS(run_sweep(spec), ValidationError);
    }
    SUBCASE("results are a pure function of the SweepSpec, order-independent") {
        SweepSpec spec{SweepParameter::detuning_mhz, {0.0, 0.4, 0.8}, base};
        auto serial = run_sweep(spec, 1);
        auto parallel = run_sweep(spec, 3);
        REQUIRE(serial.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(serial[i].first == parallel[i].first);
            CHECK(serial[i].second.transmitted_fraction ==
                  parallel[i].second.transmitted_fraction);
        }

        SweepSpec permuted{SweepParameter::detuning_mhz, {0.8, 0.0, 0.4}, base};
        auto p = run_sweep(permuted, 2);
        CHECK(p[1].second.transmitted_fraction == serial[0].second.transmitted_fraction);
        CHECK(p[0].second.transmitted_fraction == serial[2].second.transmitted_fraction);
    }
    SUBCASE("per-run failures carry the parameter value") {
        SweepSpec spec{SweepParameter::storage_us, {0.5, -1.0}, base};
        CHECK_THROWS_WITH_AS(run_sweep(spec, 1), doctest::Contains("-1"),
                             SimulationError);
    }
    SUBCASE("storage sweep shifts the retrieval events") {
        auto shifted = apply_sweep_value(base, SweepParameter::storage_us, 1.25);
        CHECK(shifted.sequence.storage_time_us == doctest::Approx(1.25));
        CHECK(shifted.grid.t_end == doctest::Approx(base.grid.t_end + 0.75));
    }
}
