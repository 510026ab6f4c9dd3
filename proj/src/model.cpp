#include "rpkubo/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rpkubo/errors.hpp"

namespace rpkubo {

PotentialSpec PotentialSpec::harmonic(double omega) {
    PotentialSpec p;
    p.kind = PotentialKind::Harmonic;
    p.omega = omega;
    return p;
}

PotentialSpec PotentialSpec::quartic(double a) {
    PotentialSpec p;
    p.kind = PotentialKind::Quartic;
    p.a = a;
    return p;
}

PotentialSpec PotentialSpec::double_well(double a, double b) {
    PotentialSpec p;
    p.kind = PotentialKind::DoubleWell;
    p.a = a;
    p.b = b;
    return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> coefficients) {
    PotentialSpec p;
    p.kind = PotentialKind::Polynomial;
    p.coefficients = std::move(coefficients);
    return p;
}

std::string to_string(const PotentialSpec& p) {
    std::ostringstream os;
    switch (p.kind) {
        case PotentialKind::Harmonic: os << "harmonic(omega=" << p.omega << ")"; break;
        case PotentialKind::Quartic: os << "quartic(a=" << p.a << ")"; break;
        case PotentialKind::DoubleWell: os << "double_well(a=" << p.a << ",b=" << p.b << ")"; break;
        case PotentialKind::Polynomial: {
            os << "polynomial[";
            for (std::size_t k = 0; k < p.coefficients.size(); ++k)
                os << (k ? "," : "") << p.coefficients[k];
            os << "]";
            break;
        }
    }
    return os.str();
}

bool polynomial_is_confining(const std::vector<double>& coefficients) {
    int degree = -1;
    for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k) {
        if (coefficients[static_cast<std::size_t>(k)] != 0.0) {
            degree = k;
            break;
        }
    }
    if (degree < 2) return false;  // constant or linear: no normalizable thermal state
    if (degree % 2 != 0) return false;
    return coefficients[static_cast<std::size_t>(degree)] > 0.0;
}

SystemSpec validate_system(const SystemSpec& spec) {
    if (!(spec.mass > 0.0)) throw ConfigError("mass must be > 0");
    if (!(spec.beta > 0.0)) throw ConfigError("beta must be > 0");
    if (!(spec.hbar > 0.0)) throw ConfigError("hbar must be > 0");
    if (spec.n_beads < 1) throw ConfigError("n_beads must be >= 1");

    const PotentialSpec& p = spec.potential;
    switch (p.kind) {
        case PotentialKind::Harmonic:
            if (!(p.omega > 0.0)) throw ConfigError("harmonic potential requires omega > 0");
            break;
        case PotentialKind::Quartic:
            if (!(p.a > 0.0)) throw ConfigError("quartic potential requires a > 0");
            break;
        case PotentialKind::DoubleWell:
            if (!(p.a > 0.0)) throw ConfigError("double_well potential requires a > 0");
            if (!(p.b > 0.0)) throw ConfigError("double_well potential requires b > 0");
            break;
        case PotentialKind::Polynomial:
            if (!polynomial_is_confining(p.coefficients))
                throw ConfigError("potential unbounded below or not confining");
            break;
    }

    if (!std::isfinite(spec.beta_p()) || !(spec.beta_p() > 0.0))
        throw ConfigError("derived beta_p is not finite and positive");
    if (!std::isfinite(spec.spring_k()) || !(spec.spring_k() > 0.0))
        throw ConfigError("derived spring constant k_p is not finite and positive");
    return spec;
}

MassScheme MassScheme::physical() { return MassScheme{}; }

MassScheme MassScheme::matched_frequency(double omega) {
    MassScheme s;
    s.kind = MassSchemeKind::MatchedFrequency;
    s.omega_ref = omega;
    return s;
}

MassScheme MassScheme::custom(std::vector<double> masses) {
    MassScheme s;
    s.kind = MassSchemeKind::Custom;
    s.masses = std::move(masses);
    return s;
}

std::vector<double> mode_masses(const SystemSpec& spec, const MassScheme& scheme) {
    const int P = spec.n_beads;
    std::vector<double> out(static_cast<std::size_t>(P), spec.mass);
    switch (scheme.kind) {
        case MassSchemeKind::Physical:
            break;
        case MassSchemeKind::MatchedFrequency: {
            if (!(scheme.omega_ref > 0.0))
                throw ConfigError("matched_frequency mass scheme requires omega > 0");
            const double bp = spec.beta_p();
            const double pref = 4.0 * spec.mass /
                                (bp * bp * spec.hbar * spec.hbar * scheme.omega_ref * scheme.omega_ref);
            for (int i = 0; i < P; ++i) {
                const double s = std::sin(std::numbers::pi * (i + 1) / P);
                out[static_cast<std::size_t>(i)] = spec.mass + pref * s * s;
            }
            break;
        }
        case MassSchemeKind::Custom: {
            if (static_cast<int>(scheme.masses.size()) != P)
                throw ConfigError("custom mass scheme must list exactly n_beads masses");
            for (double m : scheme.masses)
                if (!(m > 0.0)) throw ConfigError("every fictitious mass must be > 0");
            out = scheme.masses;
            break;
        }
    }
    return out;
}

std::string to_string(const MassScheme& s) {
    switch (s.kind) {
        case MassSchemeKind::Physical: return "physical";
        case MassSchemeKind::MatchedFrequency: {
            std::ostringstream os;
            os << "matched_frequency(omega=" << s.omega_ref << ")";
            return os.str();
        }
        case MassSchemeKind::Custom: return "custom";
    }
    return "?";
}

Observable Observable::q() { return position_poly({0.0, 1.0}); }
Observable Observable::p() { return momentum_poly({0.0, 1.0}); }
Observable Observable::q_squared() { return position_poly({0.0, 0.0, 1.0}); }

Observable Observable::position_poly(std::vector<double> coefficients) {
    if (coefficients.empty()) throw ConfigError("observable polynomial must not be empty");
    Observable o;
    o.kind = ObservableKind::PositionPoly;
    o.coefficients = std::move(coefficients);
    return o;
}

Observable Observable::momentum_poly(std::vector<double> coefficients) {
    if (coefficients.empty()) throw ConfigError("observable polynomial must not be empty");
    Observable o;
    o.kind = ObservableKind::MomentumPoly;
    o.coefficients = std::move(coefficients);
    return o;
}

int Observable::degree() const {
    for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k)
        if (coefficients[static_cast<std::size_t>(k)] != 0.0) return k;
    return 0;
}

double Observable::evaluate(double v) const {
    double acc = 0.0;
    for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k)
        acc = acc * v + coefficients[static_cast<std::size_t>(k)];
    return acc;
}

std::string to_string(const Observable& o) {
    if (o.kind == ObservableKind::PositionPoly) {
        if (o.coefficients == std::vector<double>{0.0, 1.0}) return "q";
        if (o.coefficients == std::vector<double>{0.0, 0.0, 1.0}) return "q^2";
    } else {
        if (o.coefficients == std::vector<double>{0.0, 1.0}) return "p";
    }
    std::ostringstream os;
    os << (o.is_position() ? "position_poly[" : "momentum_poly[");
    for (std::size_t k = 0; k < o.coefficients.size(); ++k)
        os << (k ? "," : "") << o.coefficients[k];
    os << "]";
    return os.str();
}

RingPolymerState make_state(std::vector<double> positions, std::vector<double> momenta,
                            Representation rep) {
    if (positions.size() != momenta.size())
        throw ConfigError("state positions and momenta must have the same length");
    RingPolymerState s;
    s.positions = std::move(positions);
    s.momenta = std::move(momenta);
    s.representation = rep;
    return s;
}

}  // namespace rpkubo
