#pragma once

#include <stdexcept>
#include <string>

namespace tripod {

// Invalid physical parameters or grids.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or semantically inconsistent sequence configuration.
// `path()` points at the offending key ("control_c1.events[2].t_us").
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& msg)
        : std::runtime_error(path.empty() ? msg : path + ": " + msg), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Numerical blow-up or other mid-run failure of the solver.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad window, insufficient oscillation, and other analysis failures.
class AnalysisError : public std::runtime_error {
public:
    explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tripod
