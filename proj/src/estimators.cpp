#include "rpkubo/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rpkubo/errors.hpp"

namespace rpkubo {

double centroid(const Observable& o, const RingPolymerState& state) {
    if (state.representation != Representation::Bead)
        throw ConfigError("centroid requires a bead-representation state");
    const auto& src = o.is_position() ? state.positions : state.momenta;
    double acc = 0.0;
    for (double v : src) acc += o.evaluate(v);
    return acc / static_cast<double>(src.size());
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

std::vector<RingPolymerState> draw_initial_states(const SystemSpec& spec, const MassScheme& scheme,
                                                  EnsembleMethod method, const NormalModeBasis& basis,
                                                  const SamplerConfig& sampler_cfg, long n_trajectories,
                                                  std::uint64_t seed,
                                                  MetropolisDiagnostics* diagnostics) {
    if (method == EnsembleMethod::Rpmd && !scheme.is_physical())
        throw ConfigError("rpmd requires the physical mass scheme (use nm_ccd otherwise)");

    // Chain substream is far outside the trajectory index range.
    constexpr std::uint64_t kChainStream = 1ULL << 63;

    std::vector<RingPolymerState> states;
    states.reserve(static_cast<std::size_t>(n_trajectories));

    if (spec.potential.kind == PotentialKind::Harmonic) {
        for (long i = 0; i < n_trajectories; ++i) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
            states.push_back(sample_positions_harmonic(spec, basis, rng));
        }
    } else {
        Rng chain_rng = Rng::substream(seed, kChainStream);
        states = sample_positions_metropolis(spec, basis, sampler_cfg,
                                             static_cast<int>(n_trajectories), chain_rng, diagnostics);
    }

    const Representation rep =
        method == EnsembleMethod::Rpmd ? Representation::Bead : Representation::NormalMode;
    for (long i = 0; i < n_trajectories; ++i) {
        auto& st = states[static_cast<std::size_t>(i)];
        // Momenta continue the per-trajectory stream (harmonic positions used
        // the same stream first; the Metropolis chain used its own).
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
        if (spec.potential.kind == PotentialKind::Harmonic)
            for (int k = 0; k < 2 * spec.n_beads; ++k) (void)rng.gaussian();  // skip position draws
        if (rep == Representation::NormalMode) {
            st = to_modes(basis, st);
            st.momenta = sample_momenta(spec, scheme, Representation::NormalMode, rng);
        } else {
            st.momenta = sample_momenta(spec, scheme, Representation::Bead, rng);
        }
    }
    return states;
}

namespace {

struct BlockStats {
    double mean = 0.0;
    double std_error = 0.0;
};

// Overall mean plus block-averaged standard error over trajectories.
BlockStats block_reduce(const std::vector<double>& per_traj) {
    const std::size_t n = per_traj.size();
    BlockStats out;
    out.mean = pairwise_sum(per_traj.data(), n) / static_cast<double>(n);

    constexpr std::size_t kBlocks = 32;
    double block_means[kBlocks];
    for (std::size_t b = 0; b < kBlocks; ++b) {
        const std::size_t lo = b * n / kBlocks;
        const std::size_t hi = (b + 1) * n / kBlocks;
        block_means[b] = pairwise_sum(per_traj.data() + lo, hi - lo) / static_cast<double>(hi - lo);
    }
    double var = 0.0;
    for (std::size_t b = 0; b < kBlocks; ++b) {
        const double d = block_means[b] - out.mean;
        var += d * d;
    }
    var /= (kBlocks - 1);
    out.std_error = std::sqrt(var / kBlocks);
    return out;
}

}  // namespace

CorrelationSeries correlate_trajectories(const SystemSpec& spec, const MassScheme& scheme,
                                         EnsembleMethod method, const Observable& a,
                                         const Observable& b, const NormalModeBasis& basis,
                                         std::vector<RingPolymerState> initial_states,
                                         const IntegratorConfig& integrator_cfg,
                                         const EnsembleOptions& opts) {
    const long n_traj = static_cast<long>(initial_states.size());
    if (n_traj < 64) throw ConfigError("n_trajectories must be >= 64 for meaningful error bars");
    if (!(opts.dt_out > 0.0)) throw ConfigError("dt_out must be > 0");
    if (opts.t_max < 0.0) throw ConfigError("t_max must be >= 0");
    if (opts.time_origin_window < 0.0) throw ConfigError("time_origin_window must be >= 0");

    const long n_lag = std::lround(opts.t_max / opts.dt_out);
    const long n_origins = std::lround(opts.time_origin_window / opts.dt_out) + 1;
    const long offset = opts.origin_offset;
    const long n_rec = offset + n_origins + n_lag;  // recorded output instants per trajectory

    IntegratorConfig cfg = integrator_cfg;
    const long steps_per_out = std::max<long>(1, std::lround(std::ceil(opts.dt_out / cfg.dt - 1e-9)));
    cfg.dt = opts.dt_out / static_cast<double>(steps_per_out);

    // All methods propagate in normal-mode coordinates: with uniform physical
    // masses this is the bead dynamics seen through the orthogonal transform,
    // and it is the only meaningful picture for mode-indexed masses.
    const bool needs_momenta = !a.is_position() || !b.is_position();
    for (auto& st : initial_states)
        if (st.representation == Representation::Bead) st = to_modes(basis, st);

    const Propagator prop(spec, scheme, basis, cfg, Representation::NormalMode);
    const bool propagate = n_rec > 1;

    const std::size_t n_vals = static_cast<std::size_t>(n_lag) + 1;
    std::vector<double> corr(static_cast<std::size_t>(n_traj) * n_vals);
    std::vector<double> mean_a_traj(static_cast<std::size_t>(n_traj));
    std::vector<double> mean_b_traj(static_cast<std::size_t>(n_traj));

    int workers = opts.workers > 0 ? opts.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(n_traj)));

    std::atomic<long> next{0};
    auto work = [&]() {
        std::vector<double> rec_a(static_cast<std::size_t>(n_rec));
        std::vector<double> rec_b(static_cast<std::size_t>(n_rec));
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n_traj) break;
            RingPolymerState state = initial_states[static_cast<std::size_t>(i)];
            for (long r = 0; r < n_rec; ++r) {
                const RingPolymerState beads = from_modes(basis, state);
                rec_a[static_cast<std::size_t>(r)] = centroid(a, beads);
                rec_b[static_cast<std::size_t>(r)] = centroid(b, beads);
                if (propagate && r + 1 < n_rec) prop.advance(state, steps_per_out);
            }
            double ma = 0.0, mb = 0.0;
            for (long k = 0; k <= n_lag; ++k) {
                double acc = 0.0;
                for (long o = offset; o < offset + n_origins; ++o)
                    acc += rec_b[static_cast<std::size_t>(o)] * rec_a[static_cast<std::size_t>(o + k)];
                corr[static_cast<std::size_t>(i) * n_vals + static_cast<std::size_t>(k)] =
                    acc / static_cast<double>(n_origins);
            }
            for (long o = offset; o < offset + n_origins; ++o) {
                ma += rec_a[static_cast<std::size_t>(o)];
                mb += rec_b[static_cast<std::size_t>(o)];
            }
            mean_a_traj[static_cast<std::size_t>(i)] = ma / static_cast<double>(n_origins);
            mean_b_traj[static_cast<std::size_t>(i)] = mb / static_cast<double>(n_origins);
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    CorrelationSeries out;
    out.times.resize(n_vals);
    out.values.resize(n_vals);
    out.std_errors.resize(n_vals);
    std::vector<double> column(static_cast<std::size_t>(n_traj));
    for (long k = 0; k <= n_lag; ++k) {
        for (long i = 0; i < n_traj; ++i)
            column[static_cast<std::size_t>(i)] =
                corr[static_cast<std::size_t>(i) * n_vals + static_cast<std::size_t>(k)];
        const BlockStats st = block_reduce(column);
        out.times[static_cast<std::size_t>(k)] = k * opts.dt_out;
        out.values[static_cast<std::size_t>(k)] = st.mean;
        out.std_errors[static_cast<std::size_t>(k)] = st.std_error;
    }

    out.meta.method = method == EnsembleMethod::Rpmd ? "rpmd" : "nm_ccd";
    out.meta.observable_a = a;
    out.meta.observable_b = b;
    out.meta.system = spec;
    out.meta.n_trajectories = n_traj;
    out.meta.seed = opts.seed;
    out.meta.mean_a = pairwise_sum(mean_a_traj.data(), mean_a_traj.size()) / n_traj;
    out.meta.mean_b = pairwise_sum(mean_b_traj.data(), mean_b_traj.size()) / n_traj;
    out.meta.momentum_uncontrolled = needs_momenta && !scheme.is_physical();
    return out;
}

CorrelationSeries correlation_ensemble(const SystemSpec& spec, const MassScheme& scheme,
                                       EnsembleMethod method, const Observable& a,
                                       const Observable& b, const SamplerConfig& sampler_cfg,
                                       const IntegratorConfig& integrator_cfg,
                                       const EnsembleOptions& opts,
                                       MetropolisDiagnostics* diagnostics) {
    validate_system(spec);
    if (opts.n_trajectories < 64)
        throw ConfigError("n_trajectories must be >= 64 for meaningful error bars");
    const NormalModeBasis basis = build_basis(spec);
    auto states = draw_initial_states(spec, scheme, method, basis, sampler_cfg,
                                      opts.n_trajectories, opts.seed, diagnostics);
    return correlate_trajectories(spec, scheme, method, a, b, basis, std::move(states),
                                  integrator_cfg, opts);
}

DensityHistogram density_histogram(const SystemSpec& spec, const Observable& o,
                                   const std::vector<RingPolymerState>& samples,
                                   const std::vector<double>& bin_edges) {
    (void)spec;
    if (samples.empty()) throw ConfigError("density_histogram requires at least one sample");
    if (bin_edges.size() < 2) throw ConfigError("density_histogram requires at least one bin");
    for (std::size_t i = 1; i < bin_edges.size(); ++i)
        if (!(bin_edges[i] > bin_edges[i - 1]))
            throw ConfigError("bin_edges must be strictly increasing");

    const std::size_t n_bins = bin_edges.size() - 1;
    std::vector<long> counts(n_bins, 0);
    long in_range = 0;
    for (const auto& s : samples) {
        const double v = centroid(o, s);
        if (v < bin_edges.front() || v >= bin_edges.back()) continue;
        const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), v);
        const std::size_t bin = static_cast<std::size_t>(it - bin_edges.begin()) - 1;
        ++counts[bin];
        ++in_range;
    }
    if (in_range == 0) throw ConfigError("all samples fall outside the histogram range");

    DensityHistogram out;
    out.observable = o;
    out.bin_edges = bin_edges;
    out.n_samples = static_cast<long>(samples.size());
    out.density.resize(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
        const double width = bin_edges[i + 1] - bin_edges[i];
        out.density[i] = static_cast<double>(counts[i]) / (static_cast<double>(in_range) * width);
    }
    return out;
}

}  // namespace rpkubo
