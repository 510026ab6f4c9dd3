#include "rpkubo/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace rpkubo {

double potential_value(const PotentialSpec& p, double mass, double q) {
    switch (p.kind) {
        case PotentialKind::Harmonic:
            return 0.5 * mass * p.omega * p.omega * q * q;
        case PotentialKind::Quartic:
            return 0.25 * p.a * q * q * q * q;
        case PotentialKind::DoubleWell:
            return 0.25 * p.a * q * q * q * q - 0.5 * p.b * q * q;
        case PotentialKind::Polynomial: {
            // Horner
            double acc = 0.0;
            for (int k = static_cast<int>(p.coefficients.size()) - 1; k >= 0; --k)
                acc = acc * q + p.coefficients[static_cast<std::size_t>(k)];
            return acc;
        }
    }
    return 0.0;
}

double potential_gradient(const PotentialSpec& p, double mass, double q) {
    switch (p.kind) {
        case PotentialKind::Harmonic:
            return mass * p.omega * p.omega * q;
        case PotentialKind::Quartic:
            return p.a * q * q * q;
        case PotentialKind::DoubleWell:
            return p.a * q * q * q - p.b * q;
        case PotentialKind::Polynomial: {
            double acc = 0.0;
            for (int k = static_cast<int>(p.coefficients.size()) - 1; k >= 1; --k)
                acc = acc * q + k * p.coefficients[static_cast<std::size_t>(k)];
            return acc;
        }
    }
    return 0.0;
}

double potential_curvature(const PotentialSpec& p, double mass, double q) {
    switch (p.kind) {
        case PotentialKind::Harmonic:
            return mass * p.omega * p.omega;
        case PotentialKind::Quartic:
            return 3.0 * p.a * q * q;
        case PotentialKind::DoubleWell:
            return 3.0 * p.a * q * q - p.b;
        case PotentialKind::Polynomial: {
            double acc = 0.0;
            for (int k = static_cast<int>(p.coefficients.size()) - 1; k >= 2; --k)
                acc = acc * q + k * (k - 1) * p.coefficients[static_cast<std::size_t>(k)];
            return acc;
        }
    }
    return 0.0;
}

namespace {

double golden_section(const PotentialSpec& p, double mass, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = potential_value(p, mass, c);
    double fd = potential_value(p, mass, d);
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = potential_value(p, mass, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = potential_value(p, mass, d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double potential_minimum(const PotentialSpec& p, double mass) {
    switch (p.kind) {
        case PotentialKind::Harmonic:
        case PotentialKind::Quartic:
            return 0.0;
        case PotentialKind::DoubleWell:
            return std::sqrt(p.b / p.a);
        case PotentialKind::Polynomial: {
            double best_q = 0.0;
            double best_v = potential_value(p, mass, 0.0);
            for (int i = 0; i <= 400; ++i) {
                const double q = -10.0 + 0.05 * i;
                const double v = potential_value(p, mass, q);
                if (v < best_v) {
                    best_v = v;
                    best_q = q;
                }
            }
            return golden_section(p, mass, best_q - 0.05, best_q + 0.05);
        }
    }
    return 0.0;
}

double local_harmonic_omega(const PotentialSpec& p, double mass, double floor) {
    const double qmin = potential_minimum(p, mass);
    const double curv = potential_curvature(p, mass, qmin);
    const double omega = std::sqrt(std::max(curv, 0.0) / mass);
    return std::max(omega, floor);
}

}  // namespace rpkubo
