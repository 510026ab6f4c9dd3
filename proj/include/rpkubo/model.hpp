// Core domain types shared by every other module: the physical system, its
// potential, observables, fictitious-mass schemes and the ring-polymer state.
// All of them are immutable value types once constructed and safe to share
// across workers. Units: hbar = k_B = 1 by convention (hbar kept explicit).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rpkubo {

enum class PotentialKind { Harmonic, Quartic, DoubleWell, Polynomial };

// One-dimensional external potential.
//   harmonic:    V(q) = (1/2) m omega^2 q^2   (mass supplied by SystemSpec)
//   quartic:     V(q) = (a/4) q^4
//   double_well: V(q) = (a/4) q^4 - (b/2) q^2
//   polynomial:  V(q) = sum_k c_k q^k
struct PotentialSpec {
    PotentialKind kind = PotentialKind::Harmonic;
    double omega = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> coefficients;

    static PotentialSpec harmonic(double omega);
    static PotentialSpec quartic(double a);
    static PotentialSpec double_well(double a, double b);
    static PotentialSpec polynomial(std::vector<double> coefficients);
};

std::string to_string(const PotentialSpec& p);

// Physical system: a particle of mass m in a 1-D potential at inverse
// temperature beta, discretized into n_beads imaginary-time slices.
struct SystemSpec {
    double mass = 1.0;
    double beta = 1.0;
    double hbar = 1.0;
    int n_beads = 1;
    PotentialSpec potential;

    double beta_p() const { return beta / n_beads; }
    // Spring constant of neighboring beads, m / (beta_p^2 hbar^2).
    double spring_k() const {
        const double bp = beta_p();
        return mass / (bp * bp * hbar * hbar);
    }
};

// Returns the spec unchanged if all invariants hold; throws ConfigError
// naming the first violated invariant otherwise.
SystemSpec validate_system(const SystemSpec& spec);

// True if the polynomial (c_k multiplying q^k) grows to +inf on both sides,
// i.e. thermal states are normalizable.
bool polynomial_is_confining(const std::vector<double>& coefficients);

enum class MassSchemeKind { Physical, MatchedFrequency, Custom };

// Assignment of the fictitious masses. The physical scheme (all masses equal
// to m) is meaningful in both bead and normal-mode indexing; the other two
// are mode-indexed and force normal-mode dynamics.
struct MassScheme {
    MassSchemeKind kind = MassSchemeKind::Physical;
    double omega_ref = 0.0;             // matched_frequency only
    std::vector<double> masses;         // custom only, mode-indexed

    static MassScheme physical();
    static MassScheme matched_frequency(double omega);
    static MassScheme custom(std::vector<double> masses);

    bool is_physical() const { return kind == MassSchemeKind::Physical; }
};

// Mode-indexed fictitious masses (index i holds mode n = i+1; the last entry
// is the centroid mode). matched_frequency uses
//   m_n = m + (4 m / (beta_p^2 hbar^2 omega^2)) sin^2(pi n / P),
// which makes every mode oscillate at the reference frequency.
std::vector<double> mode_masses(const SystemSpec& spec, const MassScheme& scheme);

std::string to_string(const MassScheme& s);

enum class ObservableKind { PositionPoly, MomentumPoly };

// A polynomial in q alone or in p alone. Mixed q.p composites are rejected by
// construction: an observable holds exactly one coefficient list and one kind.
struct Observable {
    ObservableKind kind = ObservableKind::PositionPoly;
    std::vector<double> coefficients;   // c_k multiplying q^k (or p^k)

    static Observable q();
    static Observable p();
    static Observable q_squared();
    static Observable position_poly(std::vector<double> coefficients);
    static Observable momentum_poly(std::vector<double> coefficients);

    bool is_position() const { return kind == ObservableKind::PositionPoly; }
    int degree() const;
    // Horner evaluation of the polynomial at the given coordinate value.
    double evaluate(double v) const;
};

std::string to_string(const Observable& o);

enum class Representation { Bead, NormalMode };

// P positions plus P fictitious momenta, in either bead or normal-mode
// coordinates. Transforms between the two live in normal_modes.
struct RingPolymerState {
    std::vector<double> positions;
    std::vector<double> momenta;
    Representation representation = Representation::Bead;

    int size() const { return static_cast<int>(positions.size()); }
};

RingPolymerState make_state(std::vector<double> positions, std::vector<double> momenta,
                            Representation rep);

}  // namespace rpkubo
