// Centroid estimators, correlation-function accumulation over trajectory
// ensembles, and effective classical densities by histogram. The ensemble
// average is a fixed-order pairwise reduction over per-trajectory results, so
// the outcome is bitwise independent of the worker count.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpkubo/dynamics.hpp"
#include "rpkubo/model.hpp"
#include "rpkubo/sampler.hpp"

namespace rpkubo {

struct SeriesMeta {
    std::string method;  // rpmd | nm_ccd | analytic_kubo | analytic_rpmd | analytic_nm | dvr_oracle
    Observable observable_a = Observable::q();
    Observable observable_b = Observable::q();
    SystemSpec system;
    long n_trajectories = 0;
    std::uint64_t seed = 0;
    double mean_a = 0.0;  // ensemble centroid means (MD methods only)
    double mean_b = 0.0;
    // Momentum observables evolved with masses that do not tie the fictitious
    // momenta to the physical ones; the result has no static guarantee.
    bool momentum_uncontrolled = false;
};

struct CorrelationSeries {
    std::vector<double> times;       // uniform grid from 0
    std::vector<double> values;
    std::vector<double> std_errors;  // zero for analytic series
    SeriesMeta meta;
};

struct DensityHistogram {
    Observable observable = Observable::q();
    std::vector<double> bin_edges;
    std::vector<double> density;  // normalized: sum_i density_i * width_i = 1
    long n_samples = 0;
};

// (1/P) sum_j O(q_j) for position observables, (1/P) sum_j O(p_j) for
// momentum observables. Requires a bead-representation state.
double centroid(const Observable& o, const RingPolymerState& state);

enum class EnsembleMethod { Rpmd, NmCcd };

struct EnsembleOptions {
    long n_trajectories = 0;
    double t_max = 0.0;
    double dt_out = 0.0;
    // Extra trajectory length appended for time-origin averaging; origins are
    // placed every dt_out over [0, time_origin_window].
    double time_origin_window = 0.0;
    int workers = 0;  // 0: hardware concurrency
    std::uint64_t seed = 0;
    int origin_offset = 0;  // start origins this many output steps late (stationarity checks)
};

// Equilibrium initial conditions for an ensemble: positions from the exact
// harmonic sampler (harmonic potentials) or a shared Metropolis chain, and
// fictitious momenta drawn per trajectory. Rpmd states are returned in bead
// representation, NmCcd states in normal-mode representation.
std::vector<RingPolymerState> draw_initial_states(const SystemSpec& spec, const MassScheme& scheme,
                                                  EnsembleMethod method, const NormalModeBasis& basis,
                                                  const SamplerConfig& sampler_cfg, long n_trajectories,
                                                  std::uint64_t seed,
                                                  MetropolisDiagnostics* diagnostics = nullptr);

// Correlate B(0) with A(t) along trajectories started from the given states.
CorrelationSeries correlate_trajectories(const SystemSpec& spec, const MassScheme& scheme,
                                         EnsembleMethod method, const Observable& a,
                                         const Observable& b, const NormalModeBasis& basis,
                                         std::vector<RingPolymerState> initial_states,
                                         const IntegratorConfig& integrator_cfg,
                                         const EnsembleOptions& opts);

// draw_initial_states + correlate_trajectories. Errors: n_trajectories < 64
// is rejected; rpmd requires the physical mass scheme; sampler and integrator
// failures propagate.
CorrelationSeries correlation_ensemble(const SystemSpec& spec, const MassScheme& scheme,
                                       EnsembleMethod method, const Observable& a,
                                       const Observable& b, const SamplerConfig& sampler_cfg,
                                       const IntegratorConfig& integrator_cfg,
                                       const EnsembleOptions& opts,
                                       MetropolisDiagnostics* diagnostics = nullptr);

// Normalized density of the observable's centroid over equilibrium samples.
DensityHistogram density_histogram(const SystemSpec& spec, const Observable& o,
                                   const std::vector<RingPolymerState>& samples,
                                   const std::vector<double>& bin_edges);

// Fixed-order pairwise sum (deterministic reduction primitive).
double pairwise_sum(const double* data, std::size_t n);

}  // namespace rpkubo
