// Orchestration for the command-line tool: preset/bundle resolution, output
// writing (CSV with embedded canonical metadata, sweep manifests).
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpkubo/run_config.hpp"

namespace rpkubo {

nlohmann::json load_json_file(const std::filesystem::path& path);

// overlay wins; objects merge recursively, everything else is replaced.
nlohmann::json deep_merge(const nlohmann::json& base, const nlohmann::json& overlay);

// Preset lookup order: $RPKUBO_PRESET_DIR, ./presets, then presets/ next to
// (and up to two levels above) the executable.
std::filesystem::path find_preset(const std::string& name);

struct CliOverrides {
    std::optional<int> workers;
    std::optional<std::string> output_dir;
};

// `run`: execute every run in the effective bundle, write one CSV each.
// Returns the written paths.
std::vector<std::filesystem::path> run_command(const std::optional<std::string>& config_path,
                                               const std::optional<std::string>& preset_name,
                                               const CliOverrides& overrides);

// `sweep`: re-run a single-run configuration along one axis (P, beta or
// n_trajectories), one CSV per point plus a manifest.json.
std::vector<std::filesystem::path> sweep_command(const std::string& config_path,
                                                 const std::optional<std::string>& preset_name,
                                                 const std::string& axis,
                                                 const std::vector<double>& values,
                                                 const CliOverrides& overrides);

void write_series_csv(const std::filesystem::path& path, const CorrelationSeries& series,
                      const nlohmann::json& meta);

// Shortest round-trip decimal formatting (deterministic output files).
std::string format_double(double v);

}  // namespace rpkubo
