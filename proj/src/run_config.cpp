#include "rpkubo/run_config.hpp"

#include <json.hpp>
#include <set>
#include <sstream>

#include "rpkubo/errors.hpp"
#include "rpkubo/potentials.hpp"

using nlohmann::json;

namespace rpkubo {

std::string to_string(RunMethod m) {
    switch (m) {
        case RunMethod::Rpmd: return "rpmd";
        case RunMethod::NmCcd: return "nm_ccd";
        case RunMethod::AnalyticKubo: return "analytic_kubo";
        case RunMethod::AnalyticRpmd: return "analytic_rpmd";
        case RunMethod::AnalyticNm: return "analytic_nm";
        case RunMethod::Dvr: return "dvr";
    }
    return "?";
}

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw ConfigError("config key \"" + key + "\" " + why);
}

void check_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) bad_key(ctx, "must be an object");
}

void check_known_keys(const json& obj, const std::set<std::string>& allowed, const std::string& ctx) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            bad_key(ctx.empty() ? it.key() : ctx + "." + it.key(), "is not a recognized key");
}

const json& require(const json& obj, const std::string& key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) bad_key(ctx.empty() ? key : ctx + "." + key, "is required");
    return *it;
}

double as_number(const json& v, const std::string& ctx) {
    if (!v.is_number()) bad_key(ctx, "must be a number");
    return v.get<double>();
}

long as_integer(const json& v, const std::string& ctx) {
    if (!v.is_number_integer()) bad_key(ctx, "must be an integer");
    return v.get<long>();
}

std::string as_string(const json& v, const std::string& ctx) {
    if (!v.is_string()) bad_key(ctx, "must be a string");
    return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& ctx) {
    if (!v.is_array()) bad_key(ctx, "must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) bad_key(ctx, "must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

PotentialSpec parse_potential(const json& j) {
    check_object(j, "system.potential");
    const std::string kind = as_string(require(j, "kind", "system.potential"), "system.potential.kind");
    if (kind == "harmonic") {
        check_known_keys(j, {"kind", "omega"}, "system.potential");
        return PotentialSpec::harmonic(as_number(require(j, "omega", "system.potential"), "system.potential.omega"));
    }
    if (kind == "quartic") {
        check_known_keys(j, {"kind", "a"}, "system.potential");
        return PotentialSpec::quartic(as_number(require(j, "a", "system.potential"), "system.potential.a"));
    }
    if (kind == "double_well") {
        check_known_keys(j, {"kind", "a", "b"}, "system.potential");
        return PotentialSpec::double_well(
            as_number(require(j, "a", "system.potential"), "system.potential.a"),
            as_number(require(j, "b", "system.potential"), "system.potential.b"));
    }
    if (kind == "polynomial") {
        check_known_keys(j, {"kind", "coefficients"}, "system.potential");
        return PotentialSpec::polynomial(as_number_list(require(j, "coefficients", "system.potential"),
                                                        "system.potential.coefficients"));
    }
    bad_key("system.potential.kind", "must be harmonic, quartic, double_well or polynomial");
}

Observable parse_observable(const json& j, const std::string& ctx) {
    check_object(j, ctx);
    const std::string kind = as_string(require(j, "kind", ctx), ctx + ".kind");
    if (kind == "q") {
        check_known_keys(j, {"kind"}, ctx);
        return Observable::q();
    }
    if (kind == "p") {
        check_known_keys(j, {"kind"}, ctx);
        return Observable::p();
    }
    if (kind == "q_squared") {
        check_known_keys(j, {"kind"}, ctx);
        return Observable::q_squared();
    }
    if (kind == "position_poly" || kind == "momentum_poly") {
        check_known_keys(j, {"kind", "coefficients"}, ctx);
        auto coeffs = as_number_list(require(j, "coefficients", ctx), ctx + ".coefficients");
        return kind == "position_poly" ? Observable::position_poly(std::move(coeffs))
                                       : Observable::momentum_poly(std::move(coeffs));
    }
    bad_key(ctx + ".kind", "must be q, p, q_squared, position_poly or momentum_poly");
}

MassScheme parse_mass_scheme(const json& j) {
    check_object(j, "mass_scheme");
    const std::string kind = as_string(require(j, "kind", "mass_scheme"), "mass_scheme.kind");
    if (kind == "physical") {
        check_known_keys(j, {"kind"}, "mass_scheme");
        return MassScheme::physical();
    }
    if (kind == "matched_frequency") {
        check_known_keys(j, {"kind", "omega"}, "mass_scheme");
        return MassScheme::matched_frequency(
            as_number(require(j, "omega", "mass_scheme"), "mass_scheme.omega"));
    }
    if (kind == "custom") {
        check_known_keys(j, {"kind", "masses"}, "mass_scheme");
        return MassScheme::custom(as_number_list(require(j, "masses", "mass_scheme"), "mass_scheme.masses"));
    }
    bad_key("mass_scheme.kind", "must be physical, matched_frequency or custom");
}

RunMethod parse_method(const std::string& s) {
    if (s == "rpmd") return RunMethod::Rpmd;
    if (s == "nm_ccd") return RunMethod::NmCcd;
    if (s == "analytic_kubo") return RunMethod::AnalyticKubo;
    if (s == "analytic_rpmd") return RunMethod::AnalyticRpmd;
    if (s == "analytic_nm") return RunMethod::AnalyticNm;
    if (s == "dvr") return RunMethod::Dvr;
    bad_key("method", "must be one of rpmd, nm_ccd, analytic_kubo, analytic_rpmd, analytic_nm, dvr");
}

bool is_ensemble(RunMethod m) { return m == RunMethod::Rpmd || m == RunMethod::NmCcd; }

json observable_json(const Observable& o) {
    if (o.is_position()) {
        if (o.coefficients == std::vector<double>{0.0, 1.0}) return json{{"kind", "q"}};
        if (o.coefficients == std::vector<double>{0.0, 0.0, 1.0}) return json{{"kind", "q_squared"}};
        return json{{"kind", "position_poly"}, {"coefficients", o.coefficients}};
    }
    if (o.coefficients == std::vector<double>{0.0, 1.0}) return json{{"kind", "p"}};
    return json{{"kind", "momentum_poly"}, {"coefficients", o.coefficients}};
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    check_object(j, "config");
    check_known_keys(j,
                     {"system", "method", "mass_scheme", "observables", "sampling", "integration",
                      "t_max", "dt_out", "time_origin_window", "n_trajectories", "grid",
                      "output_path", "seed", "workers"},
                     "");

    RunConfig cfg;
    cfg.method = parse_method(as_string(require(j, "method", ""), "method"));

    const json& sys = require(j, "system", "");
    check_object(sys, "system");
    check_known_keys(sys, {"mass", "beta", "hbar", "n_beads", "potential"}, "system");
    cfg.system.mass = as_number(require(sys, "mass", "system"), "system.mass");
    cfg.system.beta = as_number(require(sys, "beta", "system"), "system.beta");
    cfg.system.hbar = sys.contains("hbar") ? as_number(sys["hbar"], "system.hbar") : 1.0;
    cfg.system.n_beads = static_cast<int>(as_integer(require(sys, "n_beads", "system"), "system.n_beads"));
    cfg.system.potential = parse_potential(require(sys, "potential", "system"));
    validate_system(cfg.system);

    const bool needs_scheme = cfg.method == RunMethod::NmCcd || cfg.method == RunMethod::AnalyticNm;
    if (j.contains("mass_scheme"))
        cfg.mass_scheme = parse_mass_scheme(j["mass_scheme"]);
    else if (needs_scheme)
        bad_key("mass_scheme", "is required for method " + to_string(cfg.method));

    if (j.contains("observables")) {
        const json& obs = j["observables"];
        check_object(obs, "observables");
        check_known_keys(obs, {"A", "B"}, "observables");
        cfg.observable_a = parse_observable(require(obs, "A", "observables"), "observables.A");
        cfg.observable_b = parse_observable(require(obs, "B", "observables"), "observables.B");
    } else if (is_ensemble(cfg.method) || cfg.method == RunMethod::Dvr) {
        bad_key("observables", "is required for method " + to_string(cfg.method));
    } else {
        cfg.observable_a = Observable::q_squared();
        cfg.observable_b = Observable::q_squared();
    }
    if (!is_ensemble(cfg.method) && cfg.method != RunMethod::Dvr) {
        const auto q2 = Observable::q_squared();
        if (cfg.observable_a.coefficients != q2.coefficients || !cfg.observable_a.is_position() ||
            cfg.observable_b.coefficients != q2.coefficients || !cfg.observable_b.is_position())
            bad_key("observables", "analytic methods support only A = B = q_squared");
    }

    cfg.t_max = as_number(require(j, "t_max", ""), "t_max");
    cfg.dt_out = as_number(require(j, "dt_out", ""), "dt_out");
    if (!(cfg.dt_out > 0.0)) bad_key("dt_out", "must be > 0");
    if (cfg.t_max < 0.0) bad_key("t_max", "must be >= 0");

    if (j.contains("output_path")) cfg.output_path = as_string(j["output_path"], "output_path");

    if (j.contains("seed")) {
        const long s = as_integer(j["seed"], "seed");
        if (s < 0) bad_key("seed", "must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
        cfg.seed_was_given = true;
    }
    if (j.contains("workers")) {
        cfg.workers = static_cast<int>(as_integer(j["workers"], "workers"));
        if (cfg.workers < 0) bad_key("workers", "must be >= 0");
    }

    // Ensemble-only knobs.
    if (is_ensemble(cfg.method)) {
        cfg.n_trajectories = as_integer(require(j, "n_trajectories", ""), "n_trajectories");
        if (j.contains("time_origin_window")) {
            cfg.time_origin_window = as_number(j["time_origin_window"], "time_origin_window");
            if (cfg.time_origin_window < 0.0) bad_key("time_origin_window", "must be >= 0");
        }
        if (j.contains("sampling")) {
            const json& s = j["sampling"];
            check_object(s, "sampling");
            check_known_keys(s, {"burn_in_sweeps", "decorrelation_sweeps", "step_scale"}, "sampling");
            if (s.contains("burn_in_sweeps"))
                cfg.sampling.burn_in_sweeps = as_integer(s["burn_in_sweeps"], "sampling.burn_in_sweeps");
            if (s.contains("decorrelation_sweeps"))
                cfg.sampling.decorrelation_sweeps =
                    as_integer(s["decorrelation_sweeps"], "sampling.decorrelation_sweeps");
            if (s.contains("step_scale"))
                cfg.sampling.step_scale = as_number(s["step_scale"], "sampling.step_scale");
        }
        if (j.contains("integration")) {
            const json& s = j["integration"];
            check_object(s, "integration");
            check_known_keys(s, {"dt", "scheme", "omega_local"}, "integration");
            if (s.contains("dt")) cfg.integration.dt = as_number(s["dt"], "integration.dt");
            else cfg.integration.dt = 0.0;  // filled from defaults below
            if (s.contains("scheme")) {
                const std::string sch = as_string(s["scheme"], "integration.scheme");
                if (sch == "velocity_verlet") cfg.integration.scheme = IntegratorScheme::VelocityVerlet;
                else if (sch == "mode_split") cfg.integration.scheme = IntegratorScheme::ModeSplit;
                else bad_key("integration.scheme", "must be velocity_verlet or mode_split");
            }
            if (s.contains("omega_local"))
                cfg.integration.omega_local = as_number(s["omega_local"], "integration.omega_local");
        } else {
            cfg.integration.dt = 0.0;
        }
        if (cfg.integration.dt == 0.0) {
            // Default step: 0.02 per harmonic period unit, 0.01 otherwise.
            cfg.integration.dt = cfg.system.potential.kind == PotentialKind::Harmonic
                                     ? 0.02 / cfg.system.potential.omega
                                     : 0.01;
        }
        if (!(cfg.integration.dt > 0.0)) bad_key("integration.dt", "must be > 0");
    } else {
        for (const char* key : {"n_trajectories", "sampling", "integration", "time_origin_window"})
            if (j.contains(key)) bad_key(key, "is not used by method " + to_string(cfg.method));
    }

    if (cfg.method == RunMethod::Dvr) {
        const json& g = require(j, "grid", "");
        check_object(g, "grid");
        check_known_keys(g, {"q_min", "q_max", "n_points", "kinetic"}, "grid");
        cfg.grid.q_min = as_number(require(g, "q_min", "grid"), "grid.q_min");
        cfg.grid.q_max = as_number(require(g, "q_max", "grid"), "grid.q_max");
        cfg.grid.n_points = static_cast<int>(as_integer(require(g, "n_points", "grid"), "grid.n_points"));
        if (g.contains("kinetic")) {
            const std::string k = as_string(g["kinetic"], "grid.kinetic");
            if (k == "sinc_dvr") cfg.grid_kinetic = KineticScheme::SincDvr;
            else if (k == "fd3") cfg.grid_kinetic = KineticScheme::FiniteDifference3;
            else bad_key("grid.kinetic", "must be sinc_dvr or fd3");
        }
        if (!(cfg.grid.q_min < cfg.grid.q_max)) bad_key("grid", "requires q_min < q_max");
        if (cfg.grid.n_points < 16) bad_key("grid.n_points", "must be >= 16");
    } else if (j.contains("grid")) {
        bad_key("grid", "is not used by method " + to_string(cfg.method));
    }

    if (cfg.method == RunMethod::Rpmd && !cfg.mass_scheme.is_physical())
        bad_key("mass_scheme", "must be physical for method rpmd");

    return cfg;
}

json canonical_json(const RunConfig& cfg) {
    json sys{{"mass", cfg.system.mass},
             {"beta", cfg.system.beta},
             {"hbar", cfg.system.hbar},
             {"n_beads", cfg.system.n_beads}};
    switch (cfg.system.potential.kind) {
        case PotentialKind::Harmonic:
            sys["potential"] = {{"kind", "harmonic"}, {"omega", cfg.system.potential.omega}};
            break;
        case PotentialKind::Quartic:
            sys["potential"] = {{"kind", "quartic"}, {"a", cfg.system.potential.a}};
            break;
        case PotentialKind::DoubleWell:
            sys["potential"] = {{"kind", "double_well"}, {"a", cfg.system.potential.a},
                                {"b", cfg.system.potential.b}};
            break;
        case PotentialKind::Polynomial:
            sys["potential"] = {{"kind", "polynomial"},
                                {"coefficients", cfg.system.potential.coefficients}};
            break;
    }

    json scheme;
    switch (cfg.mass_scheme.kind) {
        case MassSchemeKind::Physical: scheme = {{"kind", "physical"}}; break;
        case MassSchemeKind::MatchedFrequency:
            scheme = {{"kind", "matched_frequency"}, {"omega", cfg.mass_scheme.omega_ref}};
            break;
        case MassSchemeKind::Custom:
            scheme = {{"kind", "custom"}, {"masses", cfg.mass_scheme.masses}};
            break;
    }

    json out{{"artifact_version", kArtifactVersion},
             {"method", to_string(cfg.method)},
             {"system", sys},
             {"mass_scheme", scheme},
             {"observables", {{"A", observable_json(cfg.observable_a)},
                              {"B", observable_json(cfg.observable_b)}}},
             {"t_max", cfg.t_max},
             {"dt_out", cfg.dt_out},
             {"output_path", cfg.output_path},
             {"seed", cfg.seed}};

    if (cfg.method == RunMethod::Rpmd || cfg.method == RunMethod::NmCcd) {
        out["n_trajectories"] = cfg.n_trajectories;
        out["time_origin_window"] = cfg.time_origin_window;
        out["sampling"] = {{"burn_in_sweeps", cfg.sampling.burn_in_sweeps},
                           {"decorrelation_sweeps", cfg.sampling.decorrelation_sweeps},
                           {"step_scale", cfg.sampling.step_scale}};
        json integ{{"dt", cfg.integration.dt},
                   {"scheme", cfg.integration.scheme == IntegratorScheme::ModeSplit
                                  ? "mode_split"
                                  : "velocity_verlet"}};
        if (cfg.integration.omega_local) integ["omega_local"] = *cfg.integration.omega_local;
        out["integration"] = integ;
        out["workers"] = cfg.workers;
    }
    if (cfg.method == RunMethod::Dvr) {
        out["grid"] = {{"q_min", cfg.grid.q_min},
                       {"q_max", cfg.grid.q_max},
                       {"n_points", cfg.grid.n_points},
                       {"kinetic", cfg.grid_kinetic == KineticScheme::SincDvr ? "sinc_dvr" : "fd3"}};
    }
    return out;
}

RunResult execute_run(const RunConfig& cfg) {
    validate_system(cfg.system);
    RunResult result;
    const auto times = time_grid(cfg.t_max, cfg.dt_out);

    switch (cfg.method) {
        case RunMethod::AnalyticKubo:
            result.series = analytic_kubo_q2(cfg.system, times);
            break;
        case RunMethod::AnalyticRpmd:
            result.series = analytic_rpmd_q2(cfg.system, times);
            break;
        case RunMethod::AnalyticNm:
            result.series = analytic_nm_ccd_q2(cfg.system, cfg.mass_scheme, times);
            break;
        case RunMethod::Dvr: {
            const EigenSolution sol = solve_schrodinger(cfg.system, cfg.grid, cfg.grid_kinetic);
            result.series = kubo_correlation(sol, cfg.observable_a, cfg.observable_b,
                                             cfg.system.beta, times);
            result.series.meta.system = cfg.system;
            break;
        }
        case RunMethod::Rpmd:
        case RunMethod::NmCcd: {
            EnsembleOptions opts;
            opts.n_trajectories = cfg.n_trajectories;
            opts.t_max = cfg.t_max;
            opts.dt_out = cfg.dt_out;
            opts.time_origin_window = cfg.time_origin_window;
            opts.workers = cfg.workers;
            opts.seed = cfg.seed;
            SamplerConfig sampling = cfg.sampling;
            sampling.seed = cfg.seed;
            result.series = correlation_ensemble(
                cfg.system, cfg.mass_scheme,
                cfg.method == RunMethod::Rpmd ? EnsembleMethod::Rpmd : EnsembleMethod::NmCcd,
                cfg.observable_a, cfg.observable_b, sampling, cfg.integration, opts);
            if (result.series.meta.momentum_uncontrolled)
                result.warnings.push_back(
                    "momentum observables evolved with non-physical fictitious masses; "
                    "the series is tagged uncontrolled");
            break;
        }
    }
    result.series.meta.seed = cfg.seed;
    return result;
}

}  // namespace rpkubo
