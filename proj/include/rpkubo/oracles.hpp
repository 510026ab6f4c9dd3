// Independent reference results: closed-form harmonic Kubo correlation
// functions (exact, finite-P ring-polymer, and finite-P normal-mode variants)
// and a numerically exact quantum oracle from grid diagonalization of the 1-D
// Hamiltonian.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rpkubo/estimators.hpp"
#include "rpkubo/model.hpp"

namespace rpkubo {

struct GridSpec {
    double q_min = -10.0;
    double q_max = 10.0;
    int n_points = 256;

    double spacing() const { return (q_max - q_min) / (n_points - 1); }
};

enum class KineticScheme {
    SincDvr,            // sinc-basis kinetic matrix, spectrally accurate (default)
    FiniteDifference3,  // three-point finite difference, O(h^2); kept as a cross-check
};

// Thermally relevant grid eigenpairs of H = p^2/2m + V(q). States are
// orthonormal under the grid quadrature sum_k psi_i(k) psi_j(k) h = delta_ij.
struct EigenSolution {
    GridSpec grid;
    std::vector<double> grid_points;
    std::vector<double> potential_values;  // V on the grid (for p^2 = 2m(H - V))
    std::vector<double> energies;          // ascending, kept levels only
    Eigen::MatrixXd states;                // column i = eigenvector of energies[i]
    int n_kept = 0;
    double mass = 0.0;
    double hbar = 1.0;
};

// Exact Kubo-transformed q^2 autocorrelation of the harmonic oscillator:
//   (hbar^2 / 4 m^2 w^2) [ (2/(beta hbar w)) coth(beta hbar w / 2) cos(2wt)
//                          + 2 coth^2(beta hbar w / 2) - 1 ].
// Throws ConfigError for non-harmonic potentials.
CorrelationSeries analytic_kubo_q2(const SystemSpec& spec, const std::vector<double>& times);

// Finite-P ring-polymer q^2 autocorrelation (physical masses):
//   (1/beta^2 m^2) [ sum_n (cos(2 w_n t) + 1)/w_n^4 + (sum_n 1/w_n^2)^2 ],
// with w_n = sqrt(w^2 + 4 k_P sin^2(pi n / P) / m).
CorrelationSeries analytic_rpmd_q2(const SystemSpec& spec, const std::vector<double>& times);

// Same sum with per-mode oscillation frequencies W_n = w_n sqrt(m/m_n) set by
// the fictitious-mass scheme; reduces to analytic_rpmd_q2 for physical masses.
CorrelationSeries analytic_nm_ccd_q2(const SystemSpec& spec, const MassScheme& scheme,
                                     const std::vector<double>& times);

// Diagonalize the grid Hamiltonian and keep levels with Boltzmann weight
// exp(-beta (E_i - E_0)) >= 1e-14. Throws SimulationError if the thermal
// density at the box edges exceeds 1e-12 of its peak (enlarge the box).
EigenSolution solve_schrodinger(const SystemSpec& spec, const GridSpec& grid,
                                KineticScheme kinetic = KineticScheme::SincDvr);

// Exact Kubo-transformed correlation on the truncated spectrum:
//   C(t) = (1/Z) sum_ij w_ij Re(B_ij A_ji) cos((E_i - E_j) t / hbar),
// with w_ij = (e^{-beta E_i} - e^{-beta E_j}) / (beta (E_j - E_i)) and the
// degenerate limit w_ii = e^{-beta E_i}. A and B must both be position
// polynomials or both momentum polynomials (momentum up to degree 2, built
// from the exact operator identities p_ij = (i m / hbar)(E_i - E_j) q_ij and
// p^2 = 2m (H - V)).
CorrelationSeries kubo_correlation(const EigenSolution& sol, const Observable& a,
                                   const Observable& b, double beta,
                                   const std::vector<double>& times);

// Thermal expectation <O> on the truncated spectrum (diagonal Boltzmann
// average); used for static sum-rule checks.
double thermal_expectation(const EigenSolution& sol, const Observable& o, double beta);

// Uniform time grid {0, dt, ..., ~t_max}.
std::vector<double> time_grid(double t_max, double dt);

}  // namespace rpkubo
