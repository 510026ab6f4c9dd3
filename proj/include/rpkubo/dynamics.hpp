// Classical time evolution of ring-polymer states under the bead Hamiltonian
// H = sum_j p_j^2/(2 m_j) + sum_j [ (k_P/2)(q_j - q_{j-1})^2 + V(q_j) ]
// (cyclic, q_0 = q_P) or its normal-mode form. Two symplectic integrators:
//
//   velocity_verlet: the reference scheme, all forces kicked together.
//   mode_split:      exact per-mode rotation of the quadratic part between
//                    half-kicks of the remaining potential gradient. For
//                    harmonic potentials the external frequency is folded
//                    into the rotation, so the composition is exact and the
//                    energy is conserved to roundoff.
#pragma once

#include <optional>

#include "rpkubo/model.hpp"
#include "rpkubo/normal_modes.hpp"

namespace rpkubo {

enum class IntegratorScheme { VelocityVerlet, ModeSplit };

struct IntegratorConfig {
    double dt = 0.01;
    IntegratorScheme scheme = IntegratorScheme::ModeSplit;
    long n_steps = 0;
    // Local harmonic frequency estimate for the stability guard (and the
    // mode_split rotation reference). Defaults to omega for harmonic
    // potentials and 0 otherwise.
    std::optional<double> omega_local;
};

// Integrator bound to one (system, mass scheme, representation). The state
// representation is fixed at construction: Bead states evolve under the bead
// Hamiltonian, NormalMode states under the mode Hamiltonian; with physical
// masses the two are the same dynamics in different coordinates.
class Propagator {
  public:
    Propagator(const SystemSpec& spec, const MassScheme& scheme, const NormalModeBasis& basis,
               const IntegratorConfig& config, Representation rep);

    void step(RingPolymerState& state) const;
    void advance(RingPolymerState& state, long n_steps) const;

    // H evaluated on the state (the conserved quantity of the exact flow).
    double energy(const RingPolymerState& state) const;

    double dt() const { return cfg_.dt; }

  private:
    void step_verlet_bead(RingPolymerState& state) const;
    void step_verlet_mode(RingPolymerState& state) const;
    void step_split_mode(std::vector<double>& x, std::vector<double>& p) const;
    void bead_forces(const std::vector<double>& q, std::vector<double>& f) const;
    void residual_bead_gradient(const std::vector<double>& q, std::vector<double>& g) const;

    SystemSpec spec_;
    NormalModeBasis basis_;
    IntegratorConfig cfg_;
    Representation rep_;
    std::vector<double> masses_;     // per bead or per mode, matching rep_
    std::vector<double> rot_cos_, rot_sin_, rot_msin_;  // mode_split rotation tables
    std::vector<double> mode_omega_;                    // rotation frequency per mode
    double omega_ref_ = 0.0;         // harmonic part folded into the rotation
    bool kick_is_zero_ = false;      // harmonic potential fully inside the rotation
};

// One velocity-Verlet / mode-split step of the bead-representation dynamics.
// Masses must be bead-indexed, i.e. the physical scheme.
RingPolymerState step_ring_polymer(const SystemSpec& spec, const MassScheme& scheme,
                                   const RingPolymerState& state, const IntegratorConfig& config);

// One step of the normal-mode dynamics with mode-indexed masses.
RingPolymerState step_normal_mode(const SystemSpec& spec, const MassScheme& scheme,
                                  const NormalModeBasis& basis, const RingPolymerState& state,
                                  const IntegratorConfig& config);

// Hamiltonian value for a state in either representation.
double conserved_energy(const SystemSpec& spec, const MassScheme& scheme,
                        const NormalModeBasis& basis, const RingPolymerState& state);

}  // namespace rpkubo
