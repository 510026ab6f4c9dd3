#include "rpkubo/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rpkubo/errors.hpp"
#include "rpkubo/potentials.hpp"

namespace rpkubo {

std::vector<double> sample_momenta(const SystemSpec& spec, const MassScheme& scheme,
                                   Representation rep, Rng& rng) {
    const int P = spec.n_beads;
    const double bp = spec.beta_p();
    std::vector<double> out(static_cast<std::size_t>(P));
    if (rep == Representation::Bead) {
        if (!scheme.is_physical())
            throw ConfigError("bead-indexed momenta are only defined for the physical mass scheme");
        const double sigma = std::sqrt(spec.mass / bp);
        for (auto& p : out) p = rng.gaussian(0.0, sigma);
    } else {
        const auto masses = mode_masses(spec, scheme);
        for (int n = 0; n < P; ++n)
            out[static_cast<std::size_t>(n)] =
                rng.gaussian(0.0, std::sqrt(masses[static_cast<std::size_t>(n)] / bp));
    }
    return out;
}

RingPolymerState sample_positions_harmonic(const SystemSpec& spec, const NormalModeBasis& basis,
                                           Rng& rng) {
    if (spec.potential.kind != PotentialKind::Harmonic)
        throw ConfigError("sample_positions_harmonic requires a harmonic potential");
    const int P = spec.n_beads;
    const double bp = spec.beta_p();
    const auto w_n = basis.mode_frequencies_with_harmonic(spec.potential.omega);

    RingPolymerState modes;
    modes.representation = Representation::NormalMode;
    modes.positions.resize(static_cast<std::size_t>(P));
    modes.momenta.assign(static_cast<std::size_t>(P), 0.0);
    for (int n = 0; n < P; ++n) {
        const double var = 1.0 / (bp * spec.mass * w_n[static_cast<std::size_t>(n)] *
                                  w_n[static_cast<std::size_t>(n)]);
        modes.positions[static_cast<std::size_t>(n)] = rng.gaussian(0.0, std::sqrt(var));
    }
    return from_modes(basis, modes);
}

std::vector<RingPolymerState> sample_positions_harmonic(const SystemSpec& spec,
                                                        const NormalModeBasis& basis,
                                                        int n_samples, Rng& rng) {
    std::vector<RingPolymerState> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) out.push_back(sample_positions_harmonic(spec, basis, rng));
    return out;
}

namespace {

// Chain state in mode coordinates with the bead image cached; single-mode
// moves update all beads through one basis row.
struct Chain {
    const SystemSpec& spec;
    const NormalModeBasis& basis;
    std::vector<double> x;       // mode coordinates
    std::vector<double> q;       // bead image, kept in sync
    std::vector<double> sigma;   // per-mode proposal widths at step_scale = 1
    double step_scale;

    long accepted = 0, proposed = 0;
    std::vector<long> mode_accepted, mode_proposed;

    Chain(const SystemSpec& s, const NormalModeBasis& b, double scale)
        : spec(s), basis(b), step_scale(scale) {
        const int P = spec.n_beads;
        x.assign(static_cast<std::size_t>(P), 0.0);
        q.assign(static_cast<std::size_t>(P), 0.0);
        mode_accepted.assign(static_cast<std::size_t>(P), 0);
        mode_proposed.assign(static_cast<std::size_t>(P), 0);

        const double wref = local_harmonic_omega(spec.potential, spec.mass);
        const double bp = spec.beta_p();
        sigma.resize(static_cast<std::size_t>(P));
        for (int n = 0; n < P; ++n)
            sigma[static_cast<std::size_t>(n)] =
                1.0 / std::sqrt(bp * spec.mass *
                                (basis.free_mode_factors[static_cast<std::size_t>(n)] + wref * wref));
    }

    void sweep(Rng& rng, bool count) {
        const int P = spec.n_beads;
        const double bp = spec.beta_p();
        for (int n = 0; n < P; ++n) {
            const double delta = step_scale * sigma[static_cast<std::size_t>(n)] * rng.gaussian();
            const double xn = x[static_cast<std::size_t>(n)];

            // Spring part is diagonal in modes; the external part needs the
            // shifted bead image q_j + U(n,j) delta.
            double de = 0.5 * spec.mass * basis.free_mode_factors[static_cast<std::size_t>(n)] *
                        ((xn + delta) * (xn + delta) - xn * xn);
            for (int j = 0; j < P; ++j) {
                const double qj = q[static_cast<std::size_t>(j)];
                const double shifted = qj + basis.matrix(n, j) * delta;
                de += potential_value(spec.potential, spec.mass, shifted) -
                      potential_value(spec.potential, spec.mass, qj);
            }

            const bool accept = metropolis_accept(bp * de, rng.uniform01());
            if (count) {
                ++proposed;
                ++mode_proposed[static_cast<std::size_t>(n)];
            }
            if (accept) {
                x[static_cast<std::size_t>(n)] += delta;
                for (int j = 0; j < P; ++j) q[static_cast<std::size_t>(j)] += basis.matrix(n, j) * delta;
                if (count) {
                    ++accepted;
                    ++mode_accepted[static_cast<std::size_t>(n)];
                }
            }
        }
    }
};

}  // namespace

std::vector<RingPolymerState> sample_positions_metropolis(const SystemSpec& spec,
                                                          const NormalModeBasis& basis,
                                                          const SamplerConfig& config,
                                                          int n_samples, Rng& rng,
                                                          MetropolisDiagnostics* diagnostics) {
    if (n_samples <= 0) throw ConfigError("metropolis sampler requires n_samples > 0");
    if (config.decorrelation_sweeps < 1)
        throw ConfigError("decorrelation_sweeps must be >= 1");
    if (config.burn_in_sweeps < 0) throw ConfigError("burn_in_sweeps must be >= 0");
    if (!(config.step_scale > 0.0)) throw ConfigError("step_scale must be > 0");

    const int P = spec.n_beads;
    Chain chain(spec, basis, config.step_scale);

    // Auto-tune during burn-in: measure acceptance over a block of sweeps and
    // rescale until it lands in [0.2, 0.8].
    const long tune_block = std::max<long>(config.burn_in_sweeps / 10, 20);
    int rounds = 0;
    double acc = 0.0;
    for (; rounds < 10; ++rounds) {
        chain.accepted = chain.proposed = 0;
        for (long s = 0; s < tune_block; ++s) chain.sweep(rng, true);
        acc = double(chain.accepted) / double(chain.proposed);
        if (acc >= 0.2 && acc <= 0.8) break;
        chain.step_scale *= (acc < 0.2) ? (1.0 / 1.3) : 1.3;
    }
    if (acc < 0.2 || acc > 0.8) {
        std::ostringstream os;
        os << "metropolis step auto-tuning failed: acceptance " << acc << " after " << rounds
           << " rounds (step_scale " << chain.step_scale << ")";
        throw SimulationError(os.str());
    }

    for (long s = 0; s < config.burn_in_sweeps; ++s) chain.sweep(rng, false);

    chain.accepted = chain.proposed = 0;
    std::fill(chain.mode_accepted.begin(), chain.mode_accepted.end(), 0L);
    std::fill(chain.mode_proposed.begin(), chain.mode_proposed.end(), 0L);

    std::vector<RingPolymerState> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        for (long s = 0; s < config.decorrelation_sweeps; ++s) chain.sweep(rng, true);
        RingPolymerState st;
        st.representation = Representation::Bead;
        st.positions = chain.q;
        st.momenta.assign(static_cast<std::size_t>(P), 0.0);
        out.push_back(std::move(st));
    }

    const double production_acc = double(chain.accepted) / double(chain.proposed);
    if (diagnostics) {
        diagnostics->overall_acceptance = production_acc;
        diagnostics->tuned_step_scale = chain.step_scale;
        diagnostics->tuning_rounds = rounds;
        diagnostics->mode_acceptance.resize(static_cast<std::size_t>(P));
        for (int n = 0; n < P; ++n)
            diagnostics->mode_acceptance[static_cast<std::size_t>(n)] =
                chain.mode_proposed[static_cast<std::size_t>(n)] > 0
                    ? double(chain.mode_accepted[static_cast<std::size_t>(n)]) /
                          double(chain.mode_proposed[static_cast<std::size_t>(n)])
                    : 0.0;
    }
    if (production_acc < 0.2 || production_acc > 0.8) {
        std::ostringstream os;
        os << "metropolis production acceptance " << production_acc
           << " drifted outside [0.2, 0.8] (step_scale " << chain.step_scale << ")";
        throw SimulationError(os.str());
    }
    return out;
}

}  // namespace rpkubo
