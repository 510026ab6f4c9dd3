#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "rpkubo/errors.hpp"
#include "rpkubo/estimators.hpp"
#include "rpkubo/model.hpp"
#include "rpkubo/normal_modes.hpp"
#include "rpkubo/oracles.hpp"
#include "rpkubo/potentials.hpp"
#include "rpkubo/sampler.hpp"
#include "support/test_helpers.hpp"

using namespace rpkubo;

namespace {

SystemSpec make_spec(double beta, int P, PotentialSpec pot) {
    SystemSpec s;
    s.mass = 1.0;
    s.beta = beta;
    s.hbar = 1.0;
    s.n_beads = P;
    s.potential = std::move(pot);
    return s;
}

}  // namespace

TEST_CASE("momentum variance per bead is m/beta_p") {
    const auto s = make_spec(1.0, 4, PotentialSpec::harmonic(1.0));
    Rng rng(101, 0);
    const int n_draws = 100000;
    std::vector<std::vector<double>> per_bead(4);
    for (int i = 0; i < n_draws; ++i) {
        const auto p = sample_momenta(s, MassScheme::physical(), Representation::Bead, rng);
        for (int j = 0; j < 4; ++j) per_bead[static_cast<std::size_t>(j)].push_back(p[static_cast<std::size_t>(j)]);
    }
    // Var of the sample variance of a Gaussian: 2 sigma^4 / (n-1).
    const double sigma2 = 4.0;  // m / beta_p = m P / beta
    const double three_sigma = 3.0 * std::sqrt(2.0 * sigma2 * sigma2 / (n_draws - 1));
    for (const auto& v : per_bead)
        CHECK(std::abs(testutil::variance(v) - sigma2) <= three_sigma);
}

TEST_CASE("matched-frequency momenta: centroid mode variance is physical") {
    const auto s = make_spec(1.0, 8, PotentialSpec::harmonic(1.0));
    const auto scheme = MassScheme::matched_frequency(1.0);
    const auto masses = mode_masses(s, scheme);
    Rng rng(7, 0);
    const int n_draws = 100000;
    std::vector<double> centroid_mode, first_mode;
    for (int i = 0; i < n_draws; ++i) {
        const auto p = sample_momenta(s, scheme, Representation::NormalMode, rng);
        centroid_mode.push_back(p.back());
        first_mode.push_back(p.front());
    }
    const double bp = s.beta_p();
    const double var_centroid = s.mass / bp;  // m_P = m for the centroid mode
    const double var_first = masses.front() / bp;
    CHECK(std::abs(testutil::variance(centroid_mode) - var_centroid) <=
          3.0 * std::sqrt(2.0) * var_centroid / std::sqrt(double(n_draws)));
    CHECK(std::abs(testutil::variance(first_mode) - var_first) <=
          3.0 * std::sqrt(2.0) * var_first / std::sqrt(double(n_draws)));
}

TEST_CASE("momentum draws stay finite at very low temperature") {
    const auto s = make_spec(1e8, 4, PotentialSpec::harmonic(1.0));
    Rng rng(1, 0);
    const auto p = sample_momenta(s, MassScheme::physical(), Representation::Bead, rng);
    for (double v : p) {
        CHECK(std::isfinite(v));
        CHECK(std::abs(v) < 1.0);  // variance m P / beta = 4e-8
    }
}

TEST_CASE("bead-indexed momenta require the physical scheme") {
    const auto s = make_spec(1.0, 4, PotentialSpec::harmonic(1.0));
    Rng rng(1, 0);
    CHECK_THROWS_AS(
        sample_momenta(s, MassScheme::matched_frequency(1.0), Representation::Bead, rng),
        ConfigError);
}

TEST_CASE("harmonic sampler: mode and centroid variances") {
    const auto s = make_spec(1.0, 16, PotentialSpec::harmonic(1.0));
    const auto basis = build_basis(s);
    Rng rng(13, 0);
    const int n = 20000;
    std::vector<std::vector<double>> modes(16);
    std::vector<double> centroid;
    for (int i = 0; i < n; ++i) {
        const auto st = sample_positions_harmonic(s, basis, rng);
        const auto xm = to_modes(basis, st);
        for (int k = 0; k < 16; ++k) modes[static_cast<std::size_t>(k)].push_back(xm.positions[static_cast<std::size_t>(k)]);
        double c = 0.0;
        for (double q : st.positions) c += q;
        centroid.push_back(c / 16.0);
    }
    const auto w = basis.mode_frequencies_with_harmonic(1.0);
    const double bp = s.beta_p();
    for (int k = 0; k < 16; ++k) {
        const double expect = 1.0 / (bp * s.mass * w[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)]);
        CHECK(std::abs(testutil::variance(modes[static_cast<std::size_t>(k)]) - expect) <=
              3.0 * std::sqrt(2.0) * expect / std::sqrt(double(n)));
    }
    // Bead centroid variance is the classical 1/(beta m w^2).
    CHECK(std::abs(testutil::variance(centroid) - 1.0) <= 3.0 * std::sqrt(2.0) / std::sqrt(double(n)));
}

TEST_CASE("harmonic sampler at P=1 reduces to classical Boltzmann sampling") {
    const auto s = make_spec(1.0, 1, PotentialSpec::harmonic(1.0));
    const auto basis = build_basis(s);
    Rng rng(29, 0);
    std::vector<double> q;
    for (int i = 0; i < 50000; ++i) q.push_back(sample_positions_harmonic(s, basis, rng).positions[0]);
    CHECK(std::abs(testutil::variance(q) - 1.0) <= 3.0 * std::sqrt(2.0) / std::sqrt(50000.0));
}

TEST_CASE("harmonic sampler rejects non-harmonic potentials") {
    const auto s = make_spec(1.0, 4, PotentialSpec::quartic(1.0));
    const auto basis = build_basis(s);
    Rng rng(1, 0);
    CHECK_THROWS_AS(sample_positions_harmonic(s, basis, rng), ConfigError);
}

TEST_CASE("metropolis agrees with the exact harmonic sampler mode by mode") {
    const auto s = make_spec(1.0, 16, PotentialSpec::harmonic(1.0));
    const auto basis = build_basis(s);
    SamplerConfig cfg;
    cfg.burn_in_sweeps = 400;
    cfg.decorrelation_sweeps = 5;

    Rng rng_m(31, 0), rng_e(37, 0);
    MetropolisDiagnostics diag;
    const auto met = sample_positions_metropolis(s, basis, cfg, 4000, rng_m, &diag);
    const auto exact = sample_positions_harmonic(s, basis, 4000, rng_e);
    CHECK(diag.overall_acceptance >= 0.2);
    CHECK(diag.overall_acceptance <= 0.8);
    CHECK(diag.mode_acceptance.size() == 16);

    for (int k = 0; k < 16; ++k) {
        std::vector<double> xm, xe;
        for (const auto& st : met) xm.push_back(to_modes(basis, st).positions[static_cast<std::size_t>(k)]);
        for (const auto& st : exact) xe.push_back(to_modes(basis, st).positions[static_cast<std::size_t>(k)]);
        std::vector<double> xm2(xm.size()), xe2(xe.size());
        for (std::size_t i = 0; i < xm.size(); ++i) xm2[i] = xm[i] * xm[i];
        for (std::size_t i = 0; i < xe.size(); ++i) xe2[i] = xe[i] * xe[i];
        const double dm = testutil::mean(xm2), de = testutil::mean(xe2);
        const double sm = testutil::blocked_stderr(xm2), se = testutil::blocked_stderr(xe2);
        CHECK(std::abs(dm - de) <= 3.0 * std::sqrt(sm * sm + se * se));
    }
}

TEST_CASE("metropolis quartic centroid spread matches the exact quantum oracle") {
    const auto s = make_spec(1.0, 32, PotentialSpec::quartic(1.0));
    const auto basis = build_basis(s);
    SamplerConfig cfg;
    cfg.burn_in_sweeps = 500;
    cfg.decorrelation_sweeps = 5;
    Rng rng(41, 0);
    const auto samples = sample_positions_metropolis(s, basis, cfg, 4096, rng);

    // Independent reference: static Kubo value of q(0)q(0) from the grid oracle.
    const auto sol = solve_schrodinger(s, GridSpec{-8.0, 8.0, 256});
    const double ref = kubo_correlation(sol, Observable::q(), Observable::q(), 1.0, {0.0}).values[0];

    std::vector<double> c2;
    for (const auto& st : samples) {
        const double c = centroid(Observable::q(), st);
        c2.push_back(c * c);
    }
    CHECK(std::abs(testutil::mean(c2) - ref) <= 3.0 * testutil::blocked_stderr(c2));
}

TEST_CASE("double well with symmetric start has zero mean centroid") {
    const auto s = make_spec(1.0, 16, PotentialSpec::double_well(1.0, 1.0));
    const auto basis = build_basis(s);
    SamplerConfig cfg;
    cfg.burn_in_sweeps = 500;
    cfg.decorrelation_sweeps = 5;
    Rng rng(43, 0);
    const auto samples = sample_positions_metropolis(s, basis, cfg, 4096, rng);
    std::vector<double> c;
    for (const auto& st : samples) c.push_back(centroid(Observable::q(), st));
    CHECK(std::abs(testutil::mean(c)) <= 3.0 * testutil::blocked_stderr(c));
}

TEST_CASE("identical seed and config give bit-identical sample streams") {
    const auto s = make_spec(2.0, 8, PotentialSpec::quartic(0.5));
    const auto basis = build_basis(s);
    SamplerConfig cfg;
    cfg.burn_in_sweeps = 100;
    cfg.decorrelation_sweeps = 2;
    Rng a(99, 5), b(99, 5);
    const auto run1 = sample_positions_metropolis(s, basis, cfg, 64, a);
    const auto run2 = sample_positions_metropolis(s, basis, cfg, 64, b);
    REQUIRE(run1.size() == run2.size());
    for (std::size_t i = 0; i < run1.size(); ++i)
        CHECK(run1[i].positions == run2[i].positions);
}

TEST_CASE("auto-tuning recovers from a wildly wrong step scale") {
    const auto s = make_spec(1.0, 8, PotentialSpec::quartic(1.0));
    const auto basis = build_basis(s);
    SamplerConfig cfg;
    cfg.burn_in_sweeps = 300;
    cfg.decorrelation_sweeps = 2;
    cfg.step_scale = 40.0;  // absurdly large; acceptance would be ~0
    Rng rng(3, 0);
    MetropolisDiagnostics diag;
    const auto samples = sample_positions_metropolis(s, basis, cfg, 128, rng, &diag);
    CHECK(samples.size() == 128);
    CHECK(diag.tuning_rounds > 0);
    CHECK(diag.overall_acceptance >= 0.2);
    CHECK(diag.overall_acceptance <= 0.8);
    CHECK(diag.tuned_step_scale < cfg.step_scale);
}

TEST_CASE("auto-tuning failure raises a runtime error with diagnostics") {
    const auto s = make_spec(1.0, 4, PotentialSpec::quartic(1.0));
    const auto basis = build_basis(s);
    SamplerConfig cfg;
    cfg.burn_in_sweeps = 100;
    cfg.decorrelation_sweeps = 1;
    cfg.step_scale = 1e12;  // ten /1.3 rounds cannot bring this back
    Rng rng(3, 0);
    CHECK_THROWS_AS(sample_positions_metropolis(s, basis, cfg, 64, rng), SimulationError);
}

// Small-instance detailed balance: the shared acceptance rule on a 3x3
// discretized two-mode state space must satisfy pi_i T_ij = pi_j T_ji, which
// for symmetric proposals means equal forward/backward flow counts.
TEST_CASE("detailed balance holds on a discretized two-bead instance") {
    const auto s = make_spec(1.0, 2, PotentialSpec::double_well(1.0, 1.0));
    const auto basis = build_basis(s);
    const double grid_step = 0.9;

    // State = (i0, i1), each in {-1, 0, 1}: mode coordinates i * grid_step.
    auto energy = [&](int i0, int i1) {
        RingPolymerState modes;
        modes.representation = Representation::NormalMode;
        modes.positions = {i0 * grid_step, i1 * grid_step};
        modes.momenta = {0.0, 0.0};
        const auto beads = from_modes(basis, modes);
        double e = 0.0;
        for (int j = 0; j < 2; ++j) {
            e += 0.5 * s.mass * basis.free_mode_factors[static_cast<std::size_t>(j)] *
                 modes.positions[static_cast<std::size_t>(j)] * modes.positions[static_cast<std::size_t>(j)];
            e += potential_value(s.potential, s.mass, beads.positions[static_cast<std::size_t>(j)]);
        }
        return e;
    };

    Rng rng(57, 0);
    int i0 = 0, i1 = 0;
    std::map<std::pair<int, int>, long> flow;
    const long n_steps = 400000;
    for (long step = 0; step < n_steps; ++step) {
        // Symmetric proposal: pick a mode and a direction uniformly.
        const int mode = rng.uniform01() < 0.5 ? 0 : 1;
        const int dir = rng.uniform01() < 0.5 ? -1 : 1;
        int j0 = i0 + (mode == 0 ? dir : 0);
        int j1 = i1 + (mode == 1 ? dir : 0);
        if (j0 < -1 || j0 > 1 || j1 < -1 || j1 > 1) continue;  // off-grid: stay
        const double de = energy(j0, j1) - energy(i0, i1);
        if (metropolis_accept(s.beta_p() * de, rng.uniform01())) {
            const int from = (i0 + 1) * 3 + (i1 + 1);
            const int to = (j0 + 1) * 3 + (j1 + 1);
            ++flow[{from, to}];
            i0 = j0;
            i1 = j1;
        }
    }
    for (const auto& [key, n_fwd] : flow) {
        if (key.first >= key.second) continue;
        const long n_bwd = flow[{key.second, key.first}];
        const double sigma = std::sqrt(double(n_fwd + n_bwd));
        CHECK(std::abs(double(n_fwd - n_bwd)) <= 3.0 * sigma + 1.0);
    }
}
