// Thermal sampling of ring-polymer configurations and fictitious momenta from
// the Boltzmann weight exp(-beta_p H_p): exact Gaussian draws for harmonic
// potentials, Metropolis in normal-mode coordinates for everything else.
#pragma once

#include <cstdint>
#include <vector>

#include "rpkubo/model.hpp"
#include "rpkubo/normal_modes.hpp"
#include "rpkubo/rng.hpp"

namespace rpkubo {

struct SamplerConfig {
    long burn_in_sweeps = 1000;
    long decorrelation_sweeps = 10;
    double step_scale = 1.0;
    std::uint64_t seed = 0;
};

struct MetropolisDiagnostics {
    std::vector<double> mode_acceptance;  // production acceptance per mode
    double overall_acceptance = 0.0;
    double tuned_step_scale = 0.0;
    int tuning_rounds = 0;
};

// Metropolis acceptance rule for an energy change of beta_p * dE, shared with
// the small-instance detailed-balance checks.
inline bool metropolis_accept(double beta_delta_e, double u01) {
    if (beta_delta_e <= 0.0) return true;
    return u01 < std::exp(-beta_delta_e);
}

// Independent Gaussian fictitious momenta with variance mass/beta_p per index
// (bead indexing: physical scheme only; mode indexing: any scheme).
std::vector<double> sample_momenta(const SystemSpec& spec, const MassScheme& scheme,
                                   Representation rep, Rng& rng);

// Exact equilibrium draw for harmonic potentials: mode n is Gaussian with
// variance 1/(beta_p m omega_n^2). Positions returned in bead representation
// (momenta zero-filled).
RingPolymerState sample_positions_harmonic(const SystemSpec& spec, const NormalModeBasis& basis,
                                           Rng& rng);
std::vector<RingPolymerState> sample_positions_harmonic(const SystemSpec& spec,
                                                        const NormalModeBasis& basis,
                                                        int n_samples, Rng& rng);

// Single Markov chain in normal-mode coordinates with per-mode Gaussian
// proposals of width step_scale / sqrt(beta_p m (f_n + omega_ref^2)). The
// step scale is auto-tuned (x1.3 / /1.3 per round) until the overall
// acceptance lands in [0.2, 0.8]; SimulationError with diagnostics after 10
// failed rounds. Retains every decorrelation_sweeps-th state after burn-in,
// in bead representation.
std::vector<RingPolymerState> sample_positions_metropolis(const SystemSpec& spec,
                                                          const NormalModeBasis& basis,
                                                          const SamplerConfig& config,
                                                          int n_samples, Rng& rng,
                                                          MetropolisDiagnostics* diagnostics = nullptr);

}  // namespace rpkubo
