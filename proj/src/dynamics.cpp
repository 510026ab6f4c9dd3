#include "rpkubo/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "rpkubo/errors.hpp"
#include "rpkubo/potentials.hpp"

namespace rpkubo {

Propagator::Propagator(const SystemSpec& spec, const MassScheme& scheme,
                       const NormalModeBasis& basis, const IntegratorConfig& config,
                       Representation rep)
    : spec_(spec), basis_(basis), cfg_(config), rep_(rep) {
    if (!(cfg_.dt > 0.0)) throw ConfigError("integrator dt must be > 0");
    const int P = spec_.n_beads;

    if (rep_ == Representation::Bead) {
        if (!scheme.is_physical())
            throw ConfigError("bead-representation dynamics requires the physical mass scheme");
        masses_.assign(static_cast<std::size_t>(P), spec_.mass);
    } else {
        masses_ = mode_masses(spec_, scheme);
    }

    const bool harmonic = spec_.potential.kind == PotentialKind::Harmonic;
    const double omega_loc =
        cfg_.omega_local.value_or(harmonic ? spec_.potential.omega : 0.0);
    omega_ref_ = harmonic ? spec_.potential.omega : 0.0;
    kick_is_zero_ = harmonic;

    // Stability guard. Velocity Verlet must resolve the stiffest mode; the
    // split scheme integrates the quadratic part exactly, so only the
    // residual potential frequency matters (zero for harmonic).
    double guard_omega = 0.0;
    const auto mode_m = (rep_ == Representation::NormalMode)
                            ? masses_
                            : std::vector<double>(static_cast<std::size_t>(P), spec_.mass);
    for (int n = 0; n < P; ++n) {
        const double ratio = spec_.mass / mode_m[static_cast<std::size_t>(n)];
        double w2;
        if (cfg_.scheme == IntegratorScheme::VelocityVerlet) {
            w2 = (basis_.free_mode_factors[static_cast<std::size_t>(n)] + omega_loc * omega_loc) * ratio;
        } else {
            const double resid = std::max(omega_loc * omega_loc - omega_ref_ * omega_ref_, 0.0);
            w2 = resid * ratio;
        }
        guard_omega = std::max(guard_omega, std::sqrt(w2));
    }
    if (cfg_.dt * guard_omega > 0.2 + 1e-12) {
        std::ostringstream os;
        os << "integrator stability guard: dt * omega_max = " << cfg_.dt * guard_omega
           << " exceeds 0.2 (dt " << cfg_.dt << ", omega_max " << guard_omega << ")";
        throw SimulationError(os.str());
    }

    // Exact rotation tables for the quadratic part, per mode.
    rot_cos_.resize(static_cast<std::size_t>(P));
    rot_sin_.resize(static_cast<std::size_t>(P));
    rot_msin_.resize(static_cast<std::size_t>(P));
    mode_omega_.resize(static_cast<std::size_t>(P));
    for (int n = 0; n < P; ++n) {
        const double m_n = masses_[rep_ == Representation::NormalMode ? static_cast<std::size_t>(n) : 0];
        const double w2 = (basis_.free_mode_factors[static_cast<std::size_t>(n)] +
                           omega_ref_ * omega_ref_) *
                          spec_.mass / m_n;
        const double w = std::sqrt(w2);
        mode_omega_[static_cast<std::size_t>(n)] = w;
        if (w * cfg_.dt > 1e-14) {
            rot_cos_[static_cast<std::size_t>(n)] = std::cos(w * cfg_.dt);
            rot_sin_[static_cast<std::size_t>(n)] = std::sin(w * cfg_.dt) / (m_n * w);
            rot_msin_[static_cast<std::size_t>(n)] = -std::sin(w * cfg_.dt) * m_n * w;
        } else {
            rot_cos_[static_cast<std::size_t>(n)] = 1.0;
            rot_sin_[static_cast<std::size_t>(n)] = cfg_.dt / m_n;
            rot_msin_[static_cast<std::size_t>(n)] = 0.0;
        }
    }
}

void Propagator::bead_forces(const std::vector<double>& q, std::vector<double>& f) const {
    const int P = spec_.n_beads;
    const double kp = spec_.spring_k();
    f.resize(static_cast<std::size_t>(P));
    for (int j = 0; j < P; ++j) {
        const int jm = (j + P - 1) % P;
        const int jp = (j + 1) % P;
        const double spring = kp * (2.0 * q[static_cast<std::size_t>(j)] -
                                    q[static_cast<std::size_t>(jp)] - q[static_cast<std::size_t>(jm)]);
        f[static_cast<std::size_t>(j)] =
            -spring - potential_gradient(spec_.potential, spec_.mass, q[static_cast<std::size_t>(j)]);
    }
}

void Propagator::residual_bead_gradient(const std::vector<double>& q, std::vector<double>& g) const {
    const int P = spec_.n_beads;
    const double mw2 = spec_.mass * omega_ref_ * omega_ref_;
    g.resize(static_cast<std::size_t>(P));
    for (int j = 0; j < P; ++j)
        g[static_cast<std::size_t>(j)] =
            potential_gradient(spec_.potential, spec_.mass, q[static_cast<std::size_t>(j)]) -
            mw2 * q[static_cast<std::size_t>(j)];
}

void Propagator::step_verlet_bead(RingPolymerState& state) const {
    const int P = spec_.n_beads;
    const double dt = cfg_.dt;
    std::vector<double> f;
    bead_forces(state.positions, f);
    for (int j = 0; j < P; ++j) state.momenta[static_cast<std::size_t>(j)] += 0.5 * dt * f[static_cast<std::size_t>(j)];
    for (int j = 0; j < P; ++j)
        state.positions[static_cast<std::size_t>(j)] +=
            dt * state.momenta[static_cast<std::size_t>(j)] / masses_[static_cast<std::size_t>(j)];
    bead_forces(state.positions, f);
    for (int j = 0; j < P; ++j) state.momenta[static_cast<std::size_t>(j)] += 0.5 * dt * f[static_cast<std::size_t>(j)];
}

void Propagator::step_verlet_mode(RingPolymerState& state) const {
    const int P = spec_.n_beads;
    const double dt = cfg_.dt;
    auto& x = state.positions;
    auto& p = state.momenta;

    auto mode_forces = [&](const std::vector<double>& xm, std::vector<double>& fm) {
        Eigen::Map<const Eigen::VectorXd> xv(xm.data(), P);
        Eigen::VectorXd q = basis_.matrix.transpose() * xv;
        Eigen::VectorXd dv(P);
        for (int j = 0; j < P; ++j) dv(j) = potential_gradient(spec_.potential, spec_.mass, q(j));
        Eigen::VectorXd g = basis_.matrix * dv;
        fm.resize(static_cast<std::size_t>(P));
        for (int n = 0; n < P; ++n)
            fm[static_cast<std::size_t>(n)] =
                -spec_.mass * basis_.free_mode_factors[static_cast<std::size_t>(n)] *
                    xm[static_cast<std::size_t>(n)] -
                g(n);
    };

    std::vector<double> f;
    mode_forces(x, f);
    for (int n = 0; n < P; ++n) p[static_cast<std::size_t>(n)] += 0.5 * dt * f[static_cast<std::size_t>(n)];
    for (int n = 0; n < P; ++n)
        x[static_cast<std::size_t>(n)] += dt * p[static_cast<std::size_t>(n)] / masses_[static_cast<std::size_t>(n)];
    mode_forces(x, f);
    for (int n = 0; n < P; ++n) p[static_cast<std::size_t>(n)] += 0.5 * dt * f[static_cast<std::size_t>(n)];
}

void Propagator::step_split_mode(std::vector<double>& x, std::vector<double>& p) const {
    const int P = spec_.n_beads;
    const double dt = cfg_.dt;

    auto half_kick = [&]() {
        Eigen::Map<const Eigen::VectorXd> xv(x.data(), P);
        Eigen::VectorXd q = basis_.matrix.transpose() * xv;
        Eigen::VectorXd gq(P);
        const double mw2 = spec_.mass * omega_ref_ * omega_ref_;
        for (int j = 0; j < P; ++j)
            gq(j) = potential_gradient(spec_.potential, spec_.mass, q(j)) - mw2 * q(j);
        Eigen::VectorXd gm = basis_.matrix * gq;
        for (int n = 0; n < P; ++n) p[static_cast<std::size_t>(n)] -= 0.5 * dt * gm(n);
    };

    if (!kick_is_zero_) half_kick();
    for (int n = 0; n < P; ++n) {
        const double xn = x[static_cast<std::size_t>(n)];
        const double pn = p[static_cast<std::size_t>(n)];
        x[static_cast<std::size_t>(n)] = rot_cos_[static_cast<std::size_t>(n)] * xn +
                                         rot_sin_[static_cast<std::size_t>(n)] * pn;
        p[static_cast<std::size_t>(n)] = rot_msin_[static_cast<std::size_t>(n)] * xn +
                                         rot_cos_[static_cast<std::size_t>(n)] * pn;
    }
    if (!kick_is_zero_) half_kick();
}

void Propagator::step(RingPolymerState& state) const {
    if (state.representation != rep_)
        throw ConfigError("state representation does not match the propagator");
    if (state.size() != spec_.n_beads)
        throw ConfigError("state size does not match the system");

    if (rep_ == Representation::Bead) {
        if (cfg_.scheme == IntegratorScheme::VelocityVerlet) {
            step_verlet_bead(state);
        } else {
            RingPolymerState modes = to_modes(basis_, state);
            step_split_mode(modes.positions, modes.momenta);
            state = from_modes(basis_, modes);
        }
    } else {
        if (cfg_.scheme == IntegratorScheme::VelocityVerlet)
            step_verlet_mode(state);
        else
            step_split_mode(state.positions, state.momenta);
    }
}

void Propagator::advance(RingPolymerState& state, long n_steps) const {
    for (long s = 0; s < n_steps; ++s) step(state);
}

double Propagator::energy(const RingPolymerState& state) const {
    const int P = spec_.n_beads;
    double e = 0.0;
    if (rep_ == Representation::Bead) {
        const double kp = spec_.spring_k();
        for (int j = 0; j < P; ++j) {
            const int jm = (j + P - 1) % P;
            const double dq = state.positions[static_cast<std::size_t>(j)] -
                              state.positions[static_cast<std::size_t>(jm)];
            e += 0.5 * kp * dq * dq +
                 potential_value(spec_.potential, spec_.mass, state.positions[static_cast<std::size_t>(j)]) +
                 0.5 * state.momenta[static_cast<std::size_t>(j)] * state.momenta[static_cast<std::size_t>(j)] /
                     masses_[static_cast<std::size_t>(j)];
        }
    } else {
        Eigen::Map<const Eigen::VectorXd> xv(state.positions.data(), P);
        Eigen::VectorXd q = basis_.matrix.transpose() * xv;
        for (int n = 0; n < P; ++n) {
            e += 0.5 * state.momenta[static_cast<std::size_t>(n)] * state.momenta[static_cast<std::size_t>(n)] /
                     masses_[static_cast<std::size_t>(n)] +
                 0.5 * spec_.mass * basis_.free_mode_factors[static_cast<std::size_t>(n)] *
                     state.positions[static_cast<std::size_t>(n)] * state.positions[static_cast<std::size_t>(n)];
            e += potential_value(spec_.potential, spec_.mass, q(n));
        }
    }
    return e;
}

RingPolymerState step_ring_polymer(const SystemSpec& spec, const MassScheme& scheme,
                                   const RingPolymerState& state, const IntegratorConfig& config) {
    if (state.representation != Representation::Bead)
        throw ConfigError("step_ring_polymer requires a bead-representation state");
    Propagator prop(spec, scheme, build_basis(spec), config, Representation::Bead);
    RingPolymerState out = state;
    prop.step(out);
    return out;
}

RingPolymerState step_normal_mode(const SystemSpec& spec, const MassScheme& scheme,
                                  const NormalModeBasis& basis, const RingPolymerState& state,
                                  const IntegratorConfig& config) {
    if (state.representation != Representation::NormalMode)
        throw ConfigError("step_normal_mode requires a normal-mode-representation state");
    Propagator prop(spec, scheme, basis, config, Representation::NormalMode);
    RingPolymerState out = state;
    prop.step(out);
    return out;
}

double conserved_energy(const SystemSpec& spec, const MassScheme& scheme,
                        const NormalModeBasis& basis, const RingPolymerState& state) {
    IntegratorConfig cfg;  // energy evaluation only; dt unused
    cfg.dt = 1e-6;
    Propagator prop(spec, scheme, basis, cfg, state.representation);
    return prop.energy(state);
}

}  // namespace rpkubo
