#include "tripod/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tripod {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& required,
                const std::set<std::string>& optional = {}) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!required.count(it.key()) && !optional.count(it.key()))
            throw ConfigError(path.empty() ? it.key() : path + "." + it.key(),
                              "unknown key");
    }
    for (const auto& key : required) {
        if (!obj.contains(key))
            throw ConfigError(path.empty() ? key : path + "." + key,
                              "missing required key");
    }
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(path + "." + key, "expected a number");
    return v.get<double>();
}

ControlField parse_control(const json& obj, const std::string& path,
                           ControlArm arm, double rabi_mhz_at_100uw) {
    if (!obj.is_object())
        throw ConfigError(path, "expected an object");
    check_keys(obj, path, {"power_uw", "detuning_mhz", "phase_rad", "events"});

    ControlField f;
    f.arm = arm;
    f.power_uw = get_number(obj, path, "power_uw");
    if (f.power_uw < 0.0)
        throw ConfigError(path + ".power_uw", "must be >= 0");
    f.peak_rabi = power_to_rabi(f.power_uw, rabi_mhz_at_100uw);
    f.detuning = mhz_to_rad(get_number(obj, path, "detuning_mhz"));
    f.phase0 = get_number(obj, path, "phase_rad");
    f.initial_level = f.power_uw > 0.0 ? 1.0 : 0.0;

    const auto& events = obj.at("events");
    if (!events.is_array())
        throw ConfigError(path + ".events", "expected an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
        std::ostringstream ep;
        ep << path << ".events[" << i << "]";
        const auto& ev = events[i];
        if (!ev.is_object())
            throw ConfigError(ep.str(), "expected an object");
        check_keys(ev, ep.str(), {"t_us", "level", "ramp_us"}, {"phase_rad"});
        SwitchEvent se;
        se.t_us = get_number(ev, ep.str(), "t_us");
        se.level = get_number(ev, ep.str(), "level");
        se.ramp_us = get_number(ev, ep.str(), "ramp_us");
        if (ev.contains("phase_rad"))
            se.extra_phase_rad = get_number(ev, ep.str(), "phase_rad");
        f.events.push_back(se);
    }
    try {
        f.validate(path.c_str());
    } catch (const ValidationError& e) {
        throw ConfigError(path, e.what());
    }
    return f;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("", "document root must be an object");
    check_keys(doc, "",
               {"schema_version", "medium", "signal", "control_c1", "control_c2", "grid"},
               {"calibration"});

    RunConfig cfg;
    if (!doc.at("schema_version").is_number_integer())
        throw ConfigError("schema_version", "expected an integer");
    cfg.schema_version = doc.at("schema_version").get<int>();
    if (cfg.schema_version != 1)
        throw ConfigError("schema_version", "unsupported schema version");

    if (doc.contains("calibration")) {
        const auto& cal = doc.at("calibration");
        check_keys(cal, "calibration", {"rabi_mhz_at_100uw"});
        cfg.rabi_mhz_at_100uw = get_number(cal, "calibration", "rabi_mhz_at_100uw");
        if (!(cfg.rabi_mhz_at_100uw > 0.0))
            throw ConfigError("calibration.rabi_mhz_at_100uw", "must be > 0");
    }

    const auto& med = doc.at("medium");
    check_keys(med, "medium", {"od", "gamma_mhz", "gamma_s_mhz"});
    cfg.medium_od = get_number(med, "medium", "od");
    cfg.medium_gamma_mhz = get_number(med, "medium", "gamma_mhz");
    cfg.medium_gamma_s_mhz = get_number(med, "medium", "gamma_s_mhz");
    try {
        cfg.medium = build_medium(cfg.medium_od, mhz_to_rad(cfg.medium_gamma_mhz),
                                  mhz_to_rad(cfg.medium_gamma_s_mhz));
    } catch (const ValidationError& e) {
        throw ConfigError("medium", e.what());
    }

    const auto& sig = doc.at("signal");
    check_keys(sig, "signal", {"width_us", "center_us", "mean_photons", "detuning_mhz"});
    cfg.sequence.signal.width_us = get_number(sig, "signal", "width_us");
    cfg.sequence.signal.center_us = get_number(sig, "signal", "center_us");
    cfg.sequence.signal.mean_photons = get_number(sig, "signal", "mean_photons");
    cfg.sequence.signal.detuning = mhz_to_rad(get_number(sig, "signal", "detuning_mhz"));

    cfg.sequence.c1 = parse_control(doc.at("control_c1"), "control_c1",
                                    ControlArm::c1, cfg.rabi_mhz_at_100uw);
    cfg.sequence.c2 = parse_control(doc.at("control_c2"), "control_c2",
                                    ControlArm::c2, cfg.rabi_mhz_at_100uw);

    const auto& grid = doc.at("grid");
    check_keys(grid, "grid", {"dt_us", "t_end_us", "n_z"});
    cfg.grid.t_start = 0.0;
    cfg.grid.dt = get_number(grid, "grid", "dt_us");
    cfg.grid.t_end = get_number(grid, "grid", "t_end_us");
    if (!grid.at("n_z").is_number_integer())
        throw ConfigError("grid.n_z", "expected an integer");
    auto n_z = grid.at("n_z").get<long long>();
    if (n_z < 2)
        throw ConfigError("grid.n_z", "must be >= 2");
    cfg.grid.n_z = static_cast<std::size_t>(n_z);

    try {
        cfg.sequence.finalize();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError("sequence", e.what());
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json doc;
    doc["schema_version"] = cfg.schema_version;
    doc["medium"] = {{"od", cfg.medium_od},
                     {"gamma_mhz", cfg.medium_gamma_mhz},
                     {"gamma_s_mhz", cfg.medium_gamma_s_mhz}};
    doc["signal"] = {{"width_us", cfg.sequence.signal.width_us},
                     {"center_us", cfg.sequence.signal.center_us},
                     {"mean_photons", cfg.sequence.signal.mean_photons},
                     {"detuning_mhz", rad_to_mhz(cfg.sequence.signal.detuning)}};
    auto dump_control = [](const ControlField& f) {
        json out = {{"power_uw", f.power_uw},
                    {"detuning_mhz", rad_to_mhz(f.detuning)},
                    {"phase_rad", f.phase0}};
        json events = json::array();
        for (const auto& ev : f.events) {
            json e = {{"t_us", ev.t_us}, {"level", ev.level}, {"ramp_us", ev.ramp_us}};
            if (ev.extra_phase_rad != 0.0)
                e["phase_rad"] = ev.extra_phase_rad;
            events.push_back(e);
        }
        out["events"] = events;
        return out;
    };
    doc["control_c1"] = dump_control(cfg.sequence.c1);
    doc["control_c2"] = dump_control(cfg.sequence.c2);
    doc["grid"] = {{"dt_us", cfg.grid.dt},
                   {"t_end_us", cfg.grid.t_end},
                   {"n_z", static_cast<long long>(cfg.grid.n_z)}};
    doc["calibration"] = {{"rabi_mhz_at_100uw", cfg.rabi_mhz_at_100uw}};
    return doc.dump(2) + "\n";
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace tripod
