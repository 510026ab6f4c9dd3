// Config-driven front end: strict JSON parsing of a run description,
// method dispatch, and canonical metadata for reproducible outputs.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "rpkubo/estimators.hpp"
#include "rpkubo/model.hpp"
#include "rpkubo/oracles.hpp"

namespace rpkubo {

inline constexpr char kArtifactVersion[] = "0.1.0";

enum class RunMethod { Rpmd, NmCcd, AnalyticKubo, AnalyticRpmd, AnalyticNm, Dvr };

std::string to_string(RunMethod m);

struct RunConfig {
    SystemSpec system;
    RunMethod method = RunMethod::Rpmd;
    MassScheme mass_scheme = MassScheme::physical();
    Observable observable_a = Observable::q();
    Observable observable_b = Observable::q();
    SamplerConfig sampling;
    IntegratorConfig integration;
    double t_max = 0.0;
    double dt_out = 0.0;
    double time_origin_window = 0.0;
    long n_trajectories = 0;
    GridSpec grid;
    KineticScheme grid_kinetic = KineticScheme::SincDvr;
    std::string output_path;
    std::uint64_t seed = 0;
    bool seed_was_given = false;
    int workers = 0;  // 0: hardware concurrency
};

// Strict parse: unknown keys are rejected with a message naming the key, all
// physical parameters must be present, numerical knobs have explicit
// defaults. Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);

// Fully resolved configuration (defaults filled in, seed resolved) plus the
// artifact version; embedded in every output so a run can be reproduced
// exactly from its own file.
nlohmann::json canonical_json(const RunConfig& cfg);

struct RunResult {
    CorrelationSeries series;
    std::vector<std::string> warnings;
};

// Execute one run. The seed must already be resolved.
RunResult execute_run(const RunConfig& cfg);

}  // namespace rpkubo
