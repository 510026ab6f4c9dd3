#include "rpkubo/driver.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "rpkubo/errors.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace rpkubo {

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return j;
}

json deep_merge(const json& base, const json& overlay) {
    if (!base.is_object() || !overlay.is_object()) return overlay;
    json out = base;
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (out.contains(it.key()))
            out[it.key()] = deep_merge(out[it.key()], it.value());
        else
            out[it.key()] = it.value();
    }
    return out;
}

namespace {

fs::path executable_dir() {
    std::error_code ec;
    fs::path p = fs::read_symlink("/proc/self/exe", ec);
    if (ec) return fs::current_path();
    return p.parent_path();
}

}  // namespace

fs::path find_preset(const std::string& name) {
    std::vector<fs::path> dirs;
    if (const char* env = std::getenv("RPKUBO_PRESET_DIR")) dirs.emplace_back(env);
    dirs.emplace_back("presets");
    const fs::path exe = executable_dir();
    dirs.push_back(exe / "presets");
    dirs.push_back(exe / ".." / "presets");
    dirs.push_back(exe / ".." / ".." / "presets");

    for (const auto& d : dirs) {
        const fs::path candidate = d / (name + ".json");
        std::error_code ec;
        if (fs::exists(candidate, ec)) return candidate;
    }
    throw ConfigError("preset \"" + name + "\" not found (searched RPKUBO_PRESET_DIR, ./presets and "
                      "presets/ next to the executable)");
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_series_csv(const fs::path& path, const CorrelationSeries& series, const json& meta) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file for writing: " + path.string());
    out << "# meta: " << meta.dump() << "\n";
    out << "t,value,std_error\n";
    for (std::size_t k = 0; k < series.times.size(); ++k)
        out << format_double(series.times[k]) << ',' << format_double(series.values[k]) << ','
            << format_double(series.std_errors[k]) << "\n";
    if (!out) throw IoError("failed while writing output file: " + path.string());
}

namespace {

struct Bundle {
    json shared;
    std::vector<json> runs;  // each entry merged over shared
};

Bundle load_bundle(const std::optional<std::string>& config_path,
                   const std::optional<std::string>& preset_name) {
    if (!config_path && !preset_name)
        throw ConfigError("either a config file or --preset is required");

    Bundle bundle;
    json overlay;

    if (preset_name) {
        const json preset = load_json_file(find_preset(*preset_name));
        if (!preset.is_object()) throw ConfigError("preset file must be a JSON object");
        for (auto it = preset.begin(); it != preset.end(); ++it)
            if (it.key() != "name" && it.key() != "version" && it.key() != "shared" &&
                it.key() != "runs")
                throw ConfigError("config key \"" + it.key() + "\" is not a recognized preset key");
        bundle.shared = preset.value("shared", json::object());
        if (preset.contains("runs")) {
            for (const auto& r : preset["runs"]) bundle.runs.push_back(r);
        } else {
            bundle.runs.push_back(json::object());
        }
        if (config_path) {
            overlay = load_json_file(fs::path(*config_path));
            if (overlay.contains("runs"))
                throw ConfigError("a config file with its own \"runs\" cannot be combined with --preset");
        }
    } else {
        const json user = load_json_file(fs::path(*config_path));
        if (!user.is_object()) throw ConfigError("config file must be a JSON object");
        if (user.contains("runs")) {
            for (auto it = user.begin(); it != user.end(); ++it)
                if (it.key() != "name" && it.key() != "version" && it.key() != "shared" &&
                    it.key() != "runs")
                    throw ConfigError("config key \"" + it.key() + "\" is not a recognized bundle key");
            bundle.shared = user.value("shared", json::object());
            for (const auto& r : user["runs"]) bundle.runs.push_back(r);
        } else {
            bundle.runs.push_back(user);
        }
    }

    if (bundle.runs.empty()) throw ConfigError("bundle contains no runs");
    for (auto& r : bundle.runs) {
        r = deep_merge(bundle.shared, r);
        if (!overlay.is_null()) r = deep_merge(r, overlay);
    }
    return bundle;
}

std::uint64_t resolve_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int env_workers() {
    if (const char* env = std::getenv("RPKUBO_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 0;
}

fs::path resolve_output(const std::string& output_path, const std::optional<std::string>& dir) {
    if (output_path.empty()) throw ConfigError("config key \"output_path\" is required");
    fs::path p(output_path);
    if (dir && p.is_relative()) p = fs::path(*dir) / p;
    return p;
}

RunConfig finalize(const json& merged, const CliOverrides& overrides) {
    RunConfig cfg = parse_run_config(merged);
    if (!cfg.seed_was_given) {
        cfg.seed = resolve_seed();
        cfg.seed_was_given = true;
    }
    if (overrides.workers)
        cfg.workers = *overrides.workers;
    else if (cfg.workers == 0)
        cfg.workers = env_workers();
    return cfg;
}

}  // namespace

std::vector<fs::path> run_command(const std::optional<std::string>& config_path,
                                  const std::optional<std::string>& preset_name,
                                  const CliOverrides& overrides) {
    const Bundle bundle = load_bundle(config_path, preset_name);
    std::vector<fs::path> written;
    for (const auto& merged : bundle.runs) {
        const RunConfig cfg = finalize(merged, overrides);
        const fs::path out_path = resolve_output(cfg.output_path, overrides.output_dir);
        const RunResult result = execute_run(cfg);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        write_series_csv(out_path, result.series, canonical_json(cfg));
        std::cout << "wrote " << out_path.string() << " (" << result.series.times.size()
                  << " rows, method " << to_string(cfg.method) << ")\n";
        written.push_back(out_path);
    }
    return written;
}

std::vector<fs::path> sweep_command(const std::string& config_path,
                                    const std::optional<std::string>& preset_name,
                                    const std::string& axis, const std::vector<double>& values,
                                    const CliOverrides& overrides) {
    if (axis != "P" && axis != "beta" && axis != "n_trajectories")
        throw ConfigError("sweep axis must be one of P, beta, n_trajectories");
    if (values.empty()) throw ConfigError("sweep requires at least one value");

    Bundle bundle = load_bundle(config_path, preset_name);
    if (bundle.runs.size() != 1)
        throw ConfigError("sweep requires a single-run configuration");
    json base = bundle.runs.front();

    const std::string out_dir = overrides.output_dir.value_or("sweep");
    std::vector<fs::path> written;
    json manifest_points = json::array();

    for (double v : values) {
        json point = base;
        if (axis == "beta") {
            point["system"]["beta"] = v;
        } else {
            const long iv = std::lround(v);
            if (std::abs(v - iv) > 1e-9)
                throw ConfigError("sweep axis " + axis + " requires integer values");
            if (axis == "P")
                point["system"]["n_beads"] = iv;
            else
                point["n_trajectories"] = iv;
        }
        const std::string label = axis + "_" + format_double(v) + ".csv";
        point["output_path"] = label;

        CliOverrides point_overrides = overrides;
        point_overrides.output_dir = out_dir;
        const RunConfig cfg = finalize(point, point_overrides);
        const fs::path out_path = resolve_output(cfg.output_path, point_overrides.output_dir);
        const RunResult result = execute_run(cfg);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        write_series_csv(out_path, result.series, canonical_json(cfg));
        std::cout << "wrote " << out_path.string() << "\n";
        written.push_back(out_path);
        manifest_points.push_back({{"value", v}, {"file", label}});
    }

    json manifest{{"artifact_version", kArtifactVersion},
                  {"axis", axis},
                  {"points", manifest_points}};
    const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw IoError("cannot write manifest: " + manifest_path.string());
    mf << manifest.dump(2) << "\n";
    written.push_back(manifest_path);
    std::cout << "wrote " << manifest_path.string() << "\n";
    return written;
}

}  // namespace rpkubo
