#include "rpkubo/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rpkubo/errors.hpp"
#include "rpkubo/potentials.hpp"

namespace rpkubo {

std::vector<double> time_grid(double t_max, double dt) {
    if (!(dt > 0.0)) throw ConfigError("dt_out must be > 0");
    if (t_max < 0.0) throw ConfigError("t_max must be >= 0");
    const long n = std::lround(t_max / dt);
    std::vector<double> times(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) times[static_cast<std::size_t>(k)] = k * dt;
    return times;
}

namespace {

void require_harmonic(const SystemSpec& spec, const char* who) {
    if (spec.potential.kind != PotentialKind::Harmonic) {
        std::ostringstream os;
        os << who << " requires a harmonic potential, got " << to_string(spec.potential);
        throw ConfigError(os.str());
    }
}

CorrelationSeries make_series(const SystemSpec& spec, const std::vector<double>& times,
                              std::vector<double> values, const char* method) {
    CorrelationSeries s;
    s.times = times;
    s.values = std::move(values);
    s.std_errors.assign(s.times.size(), 0.0);
    s.meta.method = method;
    s.meta.observable_a = Observable::q_squared();
    s.meta.observable_b = Observable::q_squared();
    s.meta.system = spec;
    return s;
}

}  // namespace

CorrelationSeries analytic_kubo_q2(const SystemSpec& spec, const std::vector<double>& times) {
    require_harmonic(spec, "analytic_kubo_q2");
    const double w = spec.potential.omega;
    const double bhw = spec.beta * spec.hbar * w;
    const double coth = 1.0 / std::tanh(0.5 * bhw);
    const double pref = spec.hbar * spec.hbar / (4.0 * spec.mass * spec.mass * w * w);
    const double osc = pref * (2.0 / bhw) * coth;
    const double flat = pref * (2.0 * coth * coth - 1.0);

    std::vector<double> values(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        values[k] = osc * std::cos(2.0 * w * times[k]) + flat;
    return make_series(spec, times, std::move(values), "analytic_kubo");
}

namespace {

// Shared form of the finite-P q^2 autocorrelation: thermal mode weights are
// set by w_n, oscillation frequencies by big_omega_n.
std::vector<double> q2_mode_sum(const SystemSpec& spec, const std::vector<double>& w_n,
                                const std::vector<double>& big_omega_n,
                                const std::vector<double>& times) {
    const std::size_t P = w_n.size();
    std::vector<double> inv2(P), inv4(P);
    for (std::size_t n = 0; n < P; ++n) {
        const double w2 = w_n[n] * w_n[n];
        inv2[n] = 1.0 / w2;
        inv4[n] = 1.0 / (w2 * w2);
    }
    double sum2 = 0.0, sum4 = 0.0;
    for (std::size_t n = 0; n < P; ++n) {
        sum2 += inv2[n];
        sum4 += inv4[n];
    }
    const double pref = 1.0 / (spec.beta * spec.beta * spec.mass * spec.mass);
    const double flat = pref * (sum4 + sum2 * sum2);

    std::vector<double> values(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        double osc = 0.0;
        for (std::size_t n = 0; n < P; ++n)
            osc += inv4[n] * std::cos(2.0 * big_omega_n[n] * times[k]);
        values[k] = pref * osc + flat;
    }
    return values;
}

std::vector<double> harmonic_mode_frequencies(const SystemSpec& spec) {
    const int P = spec.n_beads;
    const double w = spec.potential.omega;
    const double kp_over_m = spec.spring_k() / spec.mass;
    std::vector<double> w_n(static_cast<std::size_t>(P));
    for (int n = 1; n <= P; ++n) {
        const double s = std::sin(std::numbers::pi * n / P);
        w_n[static_cast<std::size_t>(n - 1)] = std::sqrt(w * w + 4.0 * kp_over_m * s * s);
    }
    return w_n;
}

}  // namespace

CorrelationSeries analytic_rpmd_q2(const SystemSpec& spec, const std::vector<double>& times) {
    require_harmonic(spec, "analytic_rpmd_q2");
    const auto w_n = harmonic_mode_frequencies(spec);
    return make_series(spec, times, q2_mode_sum(spec, w_n, w_n, times), "analytic_rpmd");
}

CorrelationSeries analytic_nm_ccd_q2(const SystemSpec& spec, const MassScheme& scheme,
                                     const std::vector<double>& times) {
    require_harmonic(spec, "analytic_nm_ccd_q2");
    const auto w_n = harmonic_mode_frequencies(spec);
    const auto masses = mode_masses(spec, scheme);
    std::vector<double> big(w_n.size());
    for (std::size_t n = 0; n < w_n.size(); ++n)
        big[n] = w_n[n] * std::sqrt(spec.mass / masses[n]);
    return make_series(spec, times, q2_mode_sum(spec, w_n, big, times), "analytic_nm");
}

EigenSolution solve_schrodinger(const SystemSpec& spec, const GridSpec& grid,
                                KineticScheme kinetic) {
    validate_system(spec);
    if (!(grid.q_min < grid.q_max)) throw ConfigError("grid requires q_min < q_max");
    if (grid.n_points < 16) throw ConfigError("grid n_points must be >= 16");

    const int N = grid.n_points;
    const double h = grid.spacing();
    const double kin = spec.hbar * spec.hbar / (2.0 * spec.mass * h * h);

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    if (kinetic == KineticScheme::SincDvr) {
        const double pi2_3 = std::numbers::pi * std::numbers::pi / 3.0;
        for (int i = 0; i < N; ++i) {
            H(i, i) = kin * pi2_3;
            for (int j = 0; j < i; ++j) {
                const int d = i - j;
                const double sign = (d % 2 == 0) ? 1.0 : -1.0;
                H(i, j) = H(j, i) = kin * sign * 2.0 / (double(d) * double(d));
            }
        }
    } else {
        for (int i = 0; i < N; ++i) {
            H(i, i) = 2.0 * kin;
            if (i + 1 < N) H(i, i + 1) = H(i + 1, i) = -kin;
        }
    }

    EigenSolution sol;
    sol.grid = grid;
    sol.mass = spec.mass;
    sol.hbar = spec.hbar;
    sol.grid_points.resize(static_cast<std::size_t>(N));
    sol.potential_values.resize(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        const double q = grid.q_min + h * i;
        const double v = potential_value(spec.potential, spec.mass, q);
        sol.grid_points[static_cast<std::size_t>(i)] = q;
        sol.potential_values[static_cast<std::size_t>(i)] = v;
        H(i, i) += v;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw SimulationError("grid diagonalization failed");

    const Eigen::VectorXd& all_e = es.eigenvalues();
    const double e0 = all_e(0);
    int n_kept = 0;
    while (n_kept < N && std::exp(-spec.beta * (all_e(n_kept) - e0)) >= 1e-14) ++n_kept;

    sol.n_kept = n_kept;
    sol.energies.assign(all_e.data(), all_e.data() + n_kept);
    // Quadrature normalization: sum_k psi^2 h = 1.
    sol.states = es.eigenvectors().leftCols(n_kept) / std::sqrt(h);

    // Thermal density must be negligible at the box edges.
    double rho_edge = 0.0, rho_peak = 0.0;
    for (int k = 0; k < N; ++k) {
        double rho = 0.0;
        for (int i = 0; i < n_kept; ++i) {
            const double w = std::exp(-spec.beta * (sol.energies[static_cast<std::size_t>(i)] - e0));
            rho += w * sol.states(k, i) * sol.states(k, i);
        }
        rho_peak = std::max(rho_peak, rho);
        if (k == 0 || k == N - 1) rho_edge = std::max(rho_edge, rho);
    }
    if (rho_edge > 1e-12 * rho_peak) {
        std::ostringstream os;
        os << "thermal density leaks into the grid boundary (edge/peak = "
           << rho_edge / rho_peak << " > 1e-12); enlarge the box";
        throw SimulationError(os.str());
    }
    return sol;
}

namespace {

// Symmetric part S and real antisymmetric factor R of the observable's matrix
// in the kept eigenbasis: O = S + i R. Position polynomials are purely S;
// momentum polynomials use p_ij = (i m / hbar)(E_i - E_j) q_ij and
// p^2 = 2m (H - V), exact identities for the discretized Hamiltonian as well.
void observable_matrices(const EigenSolution& sol, const Observable& o, Eigen::MatrixXd& S,
                         Eigen::MatrixXd& R) {
    const int n = sol.n_kept;
    const int N = static_cast<int>(sol.grid_points.size());
    const double h = sol.grid.spacing();

    S = Eigen::MatrixXd::Zero(n, n);
    R = Eigen::MatrixXd::Zero(n, n);

    if (o.is_position()) {
        Eigen::VectorXd diag(N);
        for (int k = 0; k < N; ++k) diag(k) = o.evaluate(sol.grid_points[static_cast<std::size_t>(k)]);
        S = sol.states.transpose() * diag.asDiagonal() * sol.states * h;
        return;
    }

    if (o.degree() > 2)
        throw ConfigError("momentum polynomials above degree 2 are not supported by the grid oracle");
    const double c0 = o.coefficients.size() > 0 ? o.coefficients[0] : 0.0;
    const double c1 = o.coefficients.size() > 1 ? o.coefficients[1] : 0.0;
    const double c2 = o.coefficients.size() > 2 ? o.coefficients[2] : 0.0;

    if (c1 != 0.0) {
        Eigen::VectorXd q(N);
        for (int k = 0; k < N; ++k) q(k) = sol.grid_points[static_cast<std::size_t>(k)];
        Eigen::MatrixXd qmat = sol.states.transpose() * q.asDiagonal() * sol.states * h;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                R(i, j) = c1 * (sol.mass / sol.hbar) *
                          (sol.energies[static_cast<std::size_t>(i)] -
                           sol.energies[static_cast<std::size_t>(j)]) *
                          qmat(i, j);
    }
    S.diagonal().array() += c0;
    if (c2 != 0.0) {
        Eigen::VectorXd vdiag(N);
        for (int k = 0; k < N; ++k) vdiag(k) = sol.potential_values[static_cast<std::size_t>(k)];
        Eigen::MatrixXd vmat = sol.states.transpose() * vdiag.asDiagonal() * sol.states * h;
        Eigen::MatrixXd p2 = -2.0 * sol.mass * vmat;
        for (int i = 0; i < n; ++i) p2(i, i) += 2.0 * sol.mass * sol.energies[static_cast<std::size_t>(i)];
        S += c2 * p2;
    }
}

double kubo_weight(double ei, double ej, double beta) {
    if (std::abs(ej - ei) < 1e-10 * std::max(1.0, std::abs(ei))) return std::exp(-beta * ei);
    return (std::exp(-beta * ei) - std::exp(-beta * ej)) / (beta * (ej - ei));
}

}  // namespace

CorrelationSeries kubo_correlation(const EigenSolution& sol, const Observable& a,
                                   const Observable& b, double beta,
                                   const std::vector<double>& times) {
    if (a.kind != b.kind)
        throw ConfigError("kubo_correlation supports same-type observable pairs only");

    const int n = sol.n_kept;
    Eigen::MatrixXd Sa, Ra, Sb, Rb;
    observable_matrices(sol, a, Sa, Ra);
    observable_matrices(sol, b, Sb, Rb);

    std::vector<double> es(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        es[static_cast<std::size_t>(i)] = sol.energies[static_cast<std::size_t>(i)] - sol.energies[0];

    double z = 0.0;
    for (int i = 0; i < n; ++i) z += std::exp(-beta * es[static_cast<std::size_t>(i)]);

    // G_ij = w_ij Re(B_ij A_ji) / Z, C(t) = sum_ij G_ij cos((E_i - E_j) t / hbar).
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G(i, j) = kubo_weight(es[static_cast<std::size_t>(i)], es[static_cast<std::size_t>(j)], beta) *
                      (Sb(i, j) * Sa(i, j) + Rb(i, j) * Ra(i, j)) / z;

    CorrelationSeries out;
    out.times = times;
    out.values.resize(times.size());
    out.std_errors.assign(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        double c = 0.0;
        for (int i = 0; i < n; ++i) {
            c += G(i, i);
            for (int j = i + 1; j < n; ++j)
                c += 2.0 * G(i, j) *
                     std::cos((es[static_cast<std::size_t>(i)] - es[static_cast<std::size_t>(j)]) * t /
                              sol.hbar);
        }
        out.values[k] = c;
    }
    out.meta.method = "dvr_oracle";
    out.meta.observable_a = a;
    out.meta.observable_b = b;
    return out;
}

double thermal_expectation(const EigenSolution& sol, const Observable& o, double beta) {
    Eigen::MatrixXd S, R;
    observable_matrices(sol, o, S, R);
    double z = 0.0, acc = 0.0;
    for (int i = 0; i < sol.n_kept; ++i) {
        const double w = std::exp(-beta * (sol.energies[static_cast<std::size_t>(i)] - sol.energies[0]));
        z += w;
        acc += w * S(i, i);
    }
    return acc / z;
}

}  // namespace rpkubo
