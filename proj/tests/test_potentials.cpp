#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rpkubo/model.hpp"
#include "rpkubo/potentials.hpp"
#include "rpkubo/rng.hpp"

using namespace rpkubo;

TEST_CASE("potential values at pinned points") {
    const double m = 1.0;
    CHECK(potential_value(PotentialSpec::harmonic(1.0), m, 2.0) == doctest::Approx(2.0));
    CHECK(potential_value(PotentialSpec::harmonic(1.0), m, 0.0) == 0.0);
    CHECK(potential_value(PotentialSpec::quartic(1.0), m, 2.0) == doctest::Approx(4.0));
    CHECK(potential_value(PotentialSpec::double_well(1.0, 1.0), m, 1.0) ==
          doctest::Approx(0.25 - 0.5));
    CHECK(potential_value(PotentialSpec::polynomial({1.0, 0.0, 2.0}), m, 3.0) ==
          doctest::Approx(1.0 + 18.0));
}

TEST_CASE("gradients at pinned points") {
    const double m = 1.0;
    CHECK(potential_gradient(PotentialSpec::harmonic(1.0), m, 3.0) == doctest::Approx(3.0));
    CHECK(potential_gradient(PotentialSpec::quartic(1.0), m, 1.0) == doctest::Approx(1.0));
    CHECK(potential_gradient(PotentialSpec::double_well(1.0, 1.0), m, 1.0) ==
          doctest::Approx(0.0));  // well minimum at +sqrt(b/a)
}

TEST_CASE("gradient matches central finite difference on random points") {
    const double m = 1.3;
    const std::vector<PotentialSpec> variants = {
        PotentialSpec::harmonic(1.3),
        PotentialSpec::quartic(0.7),
        PotentialSpec::double_well(1.2, 0.8),
        PotentialSpec::polynomial({0.3, -1.1, 0.4, 0.05, 0.02, 0.0, 0.001}),
    };
    Rng rng(42, 0);
    const double h = 1e-5;
    for (const auto& p : variants) {
        for (int i = 0; i < 100; ++i) {
            const double q = -5.0 + 10.0 * rng.uniform01();
            const double grad = potential_gradient(p, m, q);
            const double fd =
                (potential_value(p, m, q + h) - potential_value(p, m, q - h)) / (2.0 * h);
            CHECK(std::abs(grad - fd) <= 1e-6 * (1.0 + std::abs(grad)));
        }
    }
}

TEST_CASE("curvature matches finite difference of the gradient") {
    const double m = 0.9;
    const std::vector<PotentialSpec> variants = {
        PotentialSpec::harmonic(2.0),
        PotentialSpec::quartic(1.5),
        PotentialSpec::double_well(0.7, 1.1),
        PotentialSpec::polynomial({0.0, 0.5, -0.2, 0.0, 0.1}),
    };
    Rng rng(7, 0);
    const double h = 1e-5;
    for (const auto& p : variants) {
        for (int i = 0; i < 50; ++i) {
            const double q = -4.0 + 8.0 * rng.uniform01();
            const double curv = potential_curvature(p, m, q);
            const double fd =
                (potential_gradient(p, m, q + h) - potential_gradient(p, m, q - h)) / (2.0 * h);
            CHECK(std::abs(curv - fd) <= 1e-5 * (1.0 + std::abs(curv)));
        }
    }
}

TEST_CASE("parity: even variants are exactly symmetric") {
    const double m = 1.0;
    Rng rng(3, 0);
    for (int i = 0; i < 50; ++i) {
        const double q = -5.0 + 10.0 * rng.uniform01();
        CHECK(potential_value(PotentialSpec::harmonic(1.1), m, q) ==
              potential_value(PotentialSpec::harmonic(1.1), m, -q));
        CHECK(potential_value(PotentialSpec::quartic(0.8), m, q) ==
              potential_value(PotentialSpec::quartic(0.8), m, -q));
        CHECK(potential_value(PotentialSpec::double_well(1.0, 0.5), m, q) ==
              potential_value(PotentialSpec::double_well(1.0, 0.5), m, -q));
    }
}

TEST_CASE("minimum location per variant") {
    const double m = 1.0;
    CHECK(potential_minimum(PotentialSpec::harmonic(1.0), m) == 0.0);
    CHECK(potential_minimum(PotentialSpec::quartic(2.0), m) == 0.0);
    CHECK(potential_minimum(PotentialSpec::double_well(1.0, 4.0), m) == doctest::Approx(2.0));
    // (q-2)^2 = 4 - 4q + q^2
    CHECK(potential_minimum(PotentialSpec::polynomial({4.0, -4.0, 1.0}), m) ==
          doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("local harmonic frequency and its floor") {
    CHECK(local_harmonic_omega(PotentialSpec::harmonic(1.7), 1.0) == doctest::Approx(1.7));
    // The harmonic form carries the system mass, so the frequency is omega
    // for any mass.
    CHECK(local_harmonic_omega(PotentialSpec::harmonic(1.0), 4.0) == doctest::Approx(1.0));
    // Quartic minimum is flat to second order: the floor kicks in.
    CHECK(local_harmonic_omega(PotentialSpec::quartic(1.0), 1.0) == doctest::Approx(1e-3));
    // Double well: V'' at the minimum is 2b.
    CHECK(local_harmonic_omega(PotentialSpec::double_well(1.0, 2.0), 1.0) == doctest::Approx(2.0));
}
