// rpkubo: Kubo-transformed correlation functions of 1-D quantum systems via
// ring-polymer dynamics, with analytic and grid-diagonalization references.
//
//   rpkubo run [config.json] [--preset NAME] [--workers N] [--output DIR]
//   rpkubo sweep config.json --axis <P|beta|n_trajectories> --values v1,v2,...
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 I/O error.
#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rpkubo/driver.hpp"
#include "rpkubo/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ring-polymer Kubo correlation engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    int workers = -1;
    std::string output_dir;

    auto* run = app.add_subcommand("run", "execute a run configuration (or preset bundle)");
    run->add_option("config", config_path, "JSON run configuration");
    run->add_option("--preset", preset_name, "named preset bundle shipped in presets/");
    run->add_option("--workers", workers, "worker thread count (default: all cores)");
    run->add_option("--output", output_dir, "directory for relative output paths");

    std::string axis;
    std::string values_arg;
    auto* sweep = app.add_subcommand("sweep", "re-run one configuration along a parameter axis");
    sweep->add_option("config", config_path, "JSON run configuration")->required();
    sweep->add_option("--axis", axis, "P | beta | n_trajectories")->required();
    sweep->add_option("--values", values_arg, "comma-separated axis values")->required();
    sweep->add_option("--preset", preset_name, "named preset to merge under the config");
    sweep->add_option("--workers", workers, "worker thread count");
    sweep->add_option("--output", output_dir, "output directory (default: sweep/)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    rpkubo::CliOverrides overrides;
    if (workers >= 0) overrides.workers = workers;
    if (!output_dir.empty()) overrides.output_dir = output_dir;

    const auto opt = [](const std::string& s) {
        return s.empty() ? std::nullopt : std::optional<std::string>(s);
    };

    try {
        if (run->parsed()) {
            rpkubo::run_command(opt(config_path), opt(preset_name), overrides);
        } else {
            std::vector<double> values;
            std::size_t pos = 0;
            while (pos < values_arg.size()) {
                const std::size_t comma = values_arg.find(',', pos);
                const std::string tok = values_arg.substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos);
                try {
                    values.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw rpkubo::ConfigError("sweep value \"" + tok + "\" is not a number");
                }
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            rpkubo::sweep_command(config_path, opt(preset_name), axis, values, overrides);
        }
    } catch (const rpkubo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const rpkubo::SimulationError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    } catch (const rpkubo::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
