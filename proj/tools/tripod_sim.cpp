#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tripod/analysis.hpp"
#include "tripod/config.hpp"
#include "tripod/kernels.hpp"
#include "tripod/maxwell_bloch.hpp"
#include "tripod/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitConfig = 1;
constexpr int kExitInstability = 2;
constexpr int kExitIo = 3;

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    out.flush();
    if (!out)
        throw std::ios_base::failure("cannot write " + path.string());
}

void write_waveform(const fs::path& dir, const std::string& stem,
                    const tripod::analysis::Waveform& w, const std::string& format) {
    if (format == "csv") {
        std::string text = "t_us,counts\n";
        for (std::size_t i = 0; i < w.counts.size(); ++i) {
            double t = w.t0_us + w.bin_us * static_cast<double>(i);
            text += fmt9(t) + "," + fmt9(w.counts[i]) + "\n";
        }
        write_text(dir / (stem + ".csv"), text);
    } else {
        ordered_json doc;
        doc["t0_us"] = w.t0_us;
        doc["bin_us"] = w.bin_us;
        doc["counts"] = w.counts;
        write_text(dir / (stem + ".json"), doc.dump(2) + "\n");
    }
}

void maybe_sample_poisson(tripod::analysis::Waveform& w,
                          std::optional<std::uint64_t> seed) {
    if (!seed)
        return;
    std::mt19937_64 rng(*seed);
    for (auto& c : w.counts) {
        std::poisson_distribution<long> dist(c);
        c = static_cast<double>(dist(rng));
    }
}

void write_metadata(const fs::path& dir, const tripod::RunConfig& cfg) {
    ordered_json meta;
    meta["schema_version"] = cfg.schema_version;
    meta["tool_version"] = kToolVersion;
    meta["kernel"] = tripod::kernels::active().name;
    meta["config"] = ordered_json::parse(tripod::serialize_config(cfg));
    write_text(dir / "metadata.json", meta.dump(2) + "\n");
}

void write_summary(const fs::path& dir, const tripod::FieldRecord& rec,
                   const tripod::analysis::Waveform& w) {
    double total = 0.0;
    for (double c : w.counts)
        total += c;
    ordered_json doc;
    doc["transmitted_fraction"] = rec.transmitted_fraction;
    doc["stored_fraction"] = rec.stored_fraction;
    doc["scattered_fraction"] = rec.scattered_fraction;
    doc["flux_closure"] =
        rec.transmitted_fraction + rec.stored_fraction + rec.scattered_fraction;
    doc["total_counts"] = total;
    doc["weak_probe_warning"] = rec.weak_probe_warning;
    doc["warnings"] = rec.warnings;
    write_text(dir / "summary.json", doc.dump(2) + "\n");
}

/// Retrieval on-time of an arm (first level>0 event after its off), or
/// a negative value.
double retrieval_time(const tripod::ControlField& arm) {
    bool off_seen = arm.initial_level <= 0.0;
    for (const auto& ev : arm.events) {
        if (ev.level <= 0.0)
            off_seen = true;
        else if (off_seen)
            return ev.t_us;
    }
    return -1.0;
}

std::vector<double> parse_range(const std::string& text) {
    double lo, hi, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
        throw tripod::ConfigError("--range", "expected lo:hi:step with step > 0");
    std::vector<double> values;
    for (int i = 0;; ++i) {
        double v = lo + step * i;
        if (v > hi + 1e-12 * std::max(1.0, std::abs(hi)))
            break;
        values.push_back(v);
    }
    if (values.empty())
        throw tripod::ConfigError("--range", "empty range");
    return values;
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::string& format, std::optional<std::uint64_t> seed) {
    tripod::RunConfig cfg = tripod::load_config_file(config_path);
    tripod::FieldRecord rec = tripod::simulate(cfg.medium, cfg.sequence, cfg.grid);
    auto w = tripod::analysis::make_waveform(rec, cfg.sequence.signal.mean_photons);
    maybe_sample_poisson(w, seed);

    fs::path dir(out_dir);
    fs::create_directories(dir);
    write_waveform(dir, "waveform", w, format);
    write_summary(dir, rec, w);
    write_metadata(dir, cfg);
    return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& param,
                  const std::vector<double>& values, const std::string& out_dir,
                  const std::string& format, bool keep_waveforms,
                  std::optional<std::uint64_t> seed,
                  std::optional<double> storage_override) {
    tripod::RunConfig base = tripod::load_config_file(config_path);
    tripod::SweepParameter p = tripod::sweep_parameter_from_string(param);
    if (storage_override)
        base = tripod::apply_sweep_value(base, tripod::SweepParameter::storage_us,
                                         *storage_override);

    tripod::SweepSpec spec{p, values, base};
    auto results = tripod::run_sweep(spec);

    fs::path dir(out_dir);
    fs::create_directories(dir);

    std::string csv = "param_value,metric\n";
    ordered_json points = ordered_json::array();
    const double mu = base.sequence.signal.mean_photons;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& [value, rec] = results[i];
        tripod::RunConfig variant = tripod::apply_sweep_value(base, p, value);
        auto w = tripod::analysis::make_waveform(rec, mu);
        if (seed)
            maybe_sample_poisson(w, *seed + i);

        double metric = 0.0;
        if (p == tripod::SweepParameter::power_ratio) {
            double t1 = retrieval_time(variant.sequence.c1);
            double t2 = retrieval_time(variant.sequence.c2);
            auto win = [&](double t) { return std::pair<double, double>{t, t + 1.0}; };
            if (t1 < 0.0 || t2 < 0.0)
                throw tripod::ConfigError("sequence",
                                          "power_ratio sweep needs retrieval events on both arms");
            auto split = tripod::analysis::splitting_ratio(w, win(t1), win(t2));
            metric = split.eta;
        } else {
            double start = variant.sequence.switch_off_us + variant.sequence.storage_time_us;
            metric = tripod::analysis::window_counts(w, start, start + 0.2);
        }
        csv += fmt9(value) + "," + fmt9(metric) + "\n";
        points.push_back({{"param_value", value}, {"metric", metric}});
        if (keep_waveforms)
            write_waveform(dir, "waveform_" + std::to_string(i), w, format);
    }
    if (format == "csv")
        write_text(dir / "sweep.csv", csv);
    else
        write_text(dir / "sweep.json", points.dump(2) + "\n");
    write_metadata(dir, base);
    return 0;
}

int run_validate(const std::string& config_path) {
    tripod::RunConfig cfg = tripod::load_config_file(config_path);
    double max_rate = cfg.sequence.max_rate(cfg.medium);
    tripod::validate_grid(cfg.grid, max_rate);
    std::cout << "config ok\n"
              << "  optical_depth        = " << cfg.medium.optical_depth << "\n"
              << "  Gamma                = " << cfg.medium.excited_decay << " rad/us\n"
              << "  gamma_s              = " << cfg.medium.spin_dephasing << " rad/us\n"
              << "  gN                   = " << cfg.medium.collective_coupling << " rad/us\n"
              << "  Omega_c1 (peak)      = " << cfg.sequence.c1.peak_rabi << " rad/us\n"
              << "  Omega_c2 (peak)      = " << cfg.sequence.c2.peak_rabi << " rad/us\n"
              << "  delta_c1             = " << cfg.sequence.c1.detuning << " rad/us\n"
              << "  delta_c2             = " << cfg.sequence.c2.detuning << " rad/us\n"
              << "  delta_s              = " << cfg.sequence.signal.detuning << " rad/us\n"
              << "  switch_off           = " << cfg.sequence.switch_off_us << " us\n"
              << "  storage_time         = " << cfg.sequence.storage_time_us << " us\n"
              << "  dt * max_rate        = " << cfg.grid.dt * max_rate << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tripod-EIT single-photon pulse storage and splitting simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", format = "csv", param, values_text, range_text;
    bool keep_waveforms = false;
    std::optional<std::uint64_t> poisson_seed;
    std::optional<double> storage_us;

    auto* sim = app.add_subcommand("simulate", "Run one sequence and emit waveform data");
    sim->add_option("--config", config_path)->required();
    sim->add_option("--out", out_dir);
    sim->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sim->add_option("--poisson-seed", poisson_seed);

    auto* swp = app.add_subcommand("sweep", "Run a parameter sweep");
    swp->add_option("--config", config_path)->required();
    swp->add_option("--param", param)->required()
        ->check(CLI::IsMember({"detuning_mhz", "power_ratio", "storage_us"}));
    swp->add_option("--values", values_text);
    swp->add_option("--range", range_text);
    swp->add_option("--storage-us", storage_us);
    swp->add_option("--out", out_dir);
    swp->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    swp->add_flag("--keep-waveforms", keep_waveforms);
    swp->add_option("--poisson-seed", poisson_seed);

    auto* val = app.add_subcommand("validate", "Parse and validate a config");
    val->add_option("--config", config_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return run_simulate(config_path, out_dir, format, poisson_seed);
        if (swp->parsed()) {
            std::vector<double> values;
            if (!values_text.empty()) {
                std::stringstream ss(values_text);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    values.push_back(std::stod(tok));
            } else if (!range_text.empty()) {
                values = parse_range(range_text);
            } else {
                std::cerr << "sweep: one of --values or --range is required\n";
                return kExitConfig;
            }
            return run_sweep_cmd(config_path, param, values, out_dir, format,
                                 keep_waveforms, poisson_seed, storage_us);
        }
        if (val->parsed())
            return run_validate(config_path);
    } catch (const tripod::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tripod::AnalysisError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tripod::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tripod::SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitInstability;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
