#include "rpkubo/normal_modes.hpp"

#include <cmath>
#include <numbers>

#include "rpkubo/errors.hpp"

namespace rpkubo {

std::vector<double> NormalModeBasis::mode_frequencies_with_harmonic(double omega) const {
    std::vector<double> out(free_mode_factors.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::sqrt(omega * omega + free_mode_factors[i]);
    return out;
}

NormalModeBasis build_basis(const SystemSpec& spec) {
    const int P = spec.n_beads;
    const double pi = std::numbers::pi;

    NormalModeBasis basis;
    basis.n_beads = P;
    basis.matrix = Eigen::MatrixXd::Zero(P, P);
    basis.free_mode_factors.assign(static_cast<std::size_t>(P), 0.0);

    const double kp_over_m = spec.spring_k() / spec.mass;
    for (int i = 0; i < P; ++i) {
        const int n = i + 1;
        const double s = std::sin(pi * n / P);
        basis.free_mode_factors[static_cast<std::size_t>(i)] = 4.0 * kp_over_m * s * s;
    }
    basis.free_mode_factors[static_cast<std::size_t>(P - 1)] = 0.0;  // centroid, exactly

    for (int j = 0; j < P; ++j) basis.matrix(P - 1, j) = 1.0 / std::sqrt(double(P));
    if (P % 2 == 0 && P >= 2) {
        const int i = P / 2 - 1;  // n = P/2: alternating row
        for (int j = 0; j < P; ++j) basis.matrix(i, j) = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(double(P));
    }
    const double norm = std::sqrt(2.0 / P);
    for (int n = 1; 2 * n < P; ++n) {
        for (int j = 0; j < P; ++j) {
            const double arg = 2.0 * pi * n * j / P;
            basis.matrix(n - 1, j) = norm * std::cos(arg);
            basis.matrix(P - n - 1, j) = norm * std::sin(arg);
        }
    }
    return basis;
}

namespace {

RingPolymerState apply(const NormalModeBasis& basis, const RingPolymerState& state,
                       bool forward) {
    const int P = basis.n_beads;
    if (state.size() != P)
        throw ConfigError("state size does not match basis bead count");

    RingPolymerState out;
    out.positions.resize(static_cast<std::size_t>(P));
    out.momenta.resize(static_cast<std::size_t>(P));
    Eigen::Map<const Eigen::VectorXd> q(state.positions.data(), P);
    Eigen::Map<const Eigen::VectorXd> p(state.momenta.data(), P);
    Eigen::Map<Eigen::VectorXd> qo(out.positions.data(), P);
    Eigen::Map<Eigen::VectorXd> po(out.momenta.data(), P);
    if (forward) {
        qo = basis.matrix * q;
        po = basis.matrix * p;
    } else {
        qo = basis.matrix.transpose() * q;
        po = basis.matrix.transpose() * p;
    }
    out.representation = forward ? Representation::NormalMode : Representation::Bead;
    return out;
}

}  // namespace

RingPolymerState to_modes(const NormalModeBasis& basis, const RingPolymerState& state) {
    if (state.representation != Representation::Bead)
        throw ConfigError("to_modes requires a bead-representation state");
    return apply(basis, state, true);
}

RingPolymerState from_modes(const NormalModeBasis& basis, const RingPolymerState& state) {
    if (state.representation != Representation::NormalMode)
        throw ConfigError("from_modes requires a normal-mode-representation state");
    return apply(basis, state, false);
}

}  // namespace rpkubo
