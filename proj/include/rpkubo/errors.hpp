// Error categories used across the engine. The CLI maps them onto exit codes:
// ConfigError -> 1, SimulationError -> 2, IoError -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace rpkubo {

// Invalid physical or numerical configuration (bad key, violated invariant).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A run that started from a valid configuration failed while executing
// (sampler tuning failure, integrator stability guard, grid leakage).
struct SimulationError : std::runtime_error {
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rpkubo
