// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qrisk/aops.hpp"
#include "qrisk/distributions.hpp"
#include "qrisk/errors.hpp"
#include "qrisk/qae.hpp"
#include "qrisk/simulate.hpp"

using namespace qrisk;
namespace gt = qrisk::gate;

namespace {

constexpr double kPi = std::numbers::pi;

/// Sends |i> through a circuit whose value register starts at qubit 0.
QuantumState run_on_basis(const Circuit& c, std::uint64_t i, std::uint32_t n) {
    QuantumState s(c.layout);
    Circuit prep;
    prep.layout = c.layout;
    for (std::uint32_t q = 0; q < n; ++q)
        if ((i >> q) & 1) prep.append(gt::PauliX{q});
    apply_inplace(s, prep);
    apply_inplace(s, c);
    return s;
}

/// Classical mirror of the scaled payoff angle used by the rvar/cvar builders.
double g_hat(const DiscretizedDistribution& d, std::uint64_t i, double gamma) {
    const double g_tilde =
        2.0 * static_cast<double>(i) / static_cast<double>(d.size() - 1) - 1.0;
    return gamma * g_tilde + kPi / 4.0;
}

/// Classical mirror of the expectile rotation angles.
double expectile_angle(const DiscretizedDistribution& d, const ExpectileParams& p,
                       double gamma, std::uint64_t i) {
    const double span = (1.0 + p.beta_e) * d.b * static_cast<double>(d.size() - 1) -
                        p.beta_e * d.b * static_cast<double>(p.i_star);
    const double g0 = 2.0 * gamma * d.b * static_cast<double>(i) / span +
                      kPi / 4.0 - gamma;
    if (i < p.i_star) return g0;
    const double g1 = 2.0 * gamma * p.beta_e * d.b *
                      (static_cast<double>(i) - static_cast<double>(p.i_star)) / span;
    return g0 + g1;
}

DiscretizedDistribution random_pmf(std::uint32_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> masses(std::uint64_t{1} << n);
    for (auto& m : masses) m = u(rng);
    return from_pmf(masses, -2.0 + u(rng), 0.1 + u(rng));
}

} // namespace

TEST_CASE("comparator exhaustive over all thresholds, n <= 5") {
    for (std::uint32_t n = 1; n <= 5; ++n) {
        const std::uint64_t total = std::uint64_t{1} << n;
        for (std::uint64_t k = 0; k <= total; ++k) {
            for (const auto dir :
                 {ComparatorSpec::Direction::Geq, ComparatorSpec::Direction::Lt}) {
                const Circuit c = comparator(n, {k, dir});
                for (std::uint64_t i = 0; i < total; ++i) {
                    const auto s = run_on_basis(c, i, n);
                    const bool want =
                        dir == ComparatorSpec::Direction::Geq ? i >= k : i < k;
                    CHECK(probability_of(s, n, 1) ==
                          doctest::Approx(want ? 1.0 : 0.0).epsilon(1e-12));
                    for (std::uint32_t a = n + 1; a < 2 * n; ++a)
                        CHECK(probability_of(s, a, 1) < 1e-12); // ancillas clean
                }
            }
        }
    }
}

TEST_CASE("comparator threshold bounds") {
    CHECK_THROWS_AS(comparator(3, {9, ComparatorSpec::Direction::Geq}), ConfigError);
    CHECK_NOTHROW(comparator(3, {8, ComparatorSpec::Direction::Geq}));
}

TEST_CASE("expectile A-operator amplitude identity") {
    SUBCASE("alpha = 1/2 reduces to the unconditional linear payoff") {
        const auto p = *find_preset("gamma-1-1");
        const auto d = discretize(p.spec, p.sim_lo, p.sim_hi, 3);
        const auto params = ExpectileParams::at(0.5, d, 3);
        CHECK(params.beta_e == doctest::Approx(0.0).epsilon(1e-12));
        const double gamma = kPi / 4.0;
        const auto a_op = expectile_a_operator(d, params, gamma);
        double want = 0.0;
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            const double g = 2.0 * gamma * static_cast<double>(i) /
                                 static_cast<double>(d.size() - 1) -
                             gamma + kPi / 4.0;
            want += d.probs[i] * std::sin(g) * std::sin(g);
        }
        CHECK(std::abs(exact_amplitude(a_op) - want) < 1e-9);
    }
    SUBCASE("normal preset, n=3, i*=4, alpha=0.8") {
        const auto p = *find_preset("normal-3-1");
        const auto d = discretize(p.spec, p.sim_lo, p.sim_hi, 3);
        const auto params = ExpectileParams::at(0.8, d, 4);
        CHECK(params.beta_e == doctest::Approx(3.0).epsilon(1e-12));
        const double gamma = kPi / 4.0;
        const auto a_op = expectile_a_operator(d, params, gamma);
        double want = 0.0;
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            const double g = expectile_angle(d, params, gamma, i);
            want += d.probs[i] * std::sin(g) * std::sin(g);
        }
        CHECK(std::abs(exact_amplitude(a_op) - want) < 1e-9);
    }
    SUBCASE("i* = 0 puts every index on the kinked branch") {
        const auto d = from_pmf({0.25, 0.25, 0.25, 0.25}, 0.0, 1.0);
        const auto params = ExpectileParams::at(0.7, d, 0);
        const double gamma = 0.4;
        const auto a_op = expectile_a_operator(d, params, gamma);
        double want = 0.0;
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            const double g = expectile_angle(d, params, gamma, i);
            want += d.probs[i] * std::sin(g) * std::sin(g);
        }
        CHECK(std::abs(exact_amplitude(a_op) - want) < 1e-9);
    }
    SUBCASE("f range matches the payoff extremes") {
        const auto d = from_pmf({0.5, 0.3, 0.1, 0.1}, 1.0, 2.0);
        const auto params = ExpectileParams::at(0.9, d, 2);
        const auto a_op = expectile_a_operator(d, params, 0.3);
        CHECK(a_op.f_min == doctest::Approx(d.a).epsilon(1e-12));
        const double want_max = (1.0 + params.beta_e) * d.grid_max() -
                                params.beta_e * d.grid(2);
        CHECK(a_op.f_max == doctest::Approx(want_max).epsilon(1e-12));
    }
}

TEST_CASE("rvar A-operator amplitude identity") {
    const auto p = *find_preset("gamma-1-1");
    const auto d = discretize(p.spec, p.sim_lo, p.sim_hi, 3);
    const double gamma = kPi / 4.0;
    auto windowed = [&](std::uint64_t k1, std::uint64_t k2) {
        double want = 0.0;
        for (std::uint64_t i = k2; i <= k1; ++i)
            want += d.probs[i] * std::pow(std::sin(g_hat(d, i, gamma)), 2);
        return want;
    };
    SUBCASE("full-support window") {
        const auto a_op = rvar_a_operator(d, 7, 0, gamma);
        CHECK(std::abs(exact_amplitude(a_op) - windowed(7, 0)) < 1e-9);
    }
    SUBCASE("single-point window") {
        const auto a_op = rvar_a_operator(d, 3, 3, gamma);
        CHECK(std::abs(exact_amplitude(a_op) - windowed(3, 3)) < 1e-9);
    }
    SUBCASE("interior window k2=1, k1=4") {
        const auto a_op = rvar_a_operator(d, 4, 1, gamma);
        CHECK(std::abs(exact_amplitude(a_op) - windowed(4, 1)) < 1e-9);
    }
    SUBCASE("ordering enforced") {
        CHECK_THROWS_AS(rvar_a_operator(d, 2, 5, gamma), ConfigError);
    }
}

TEST_CASE("cdf and tail operators are exact partial sums") {
    const auto p = *find_preset("gamma-1-1");
    const auto d = discretize(p.spec, p.sim_lo, p.sim_hi, 4);
    CHECK(exact_amplitude(cdf_a_operator(d, 0)) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(exact_amplitude(cdf_a_operator(d, 16)) ==
          doctest::Approx(1.0).epsilon(1e-10));
    double partial = 0.0;
    for (std::uint64_t i = 0; i < 5; ++i) partial += d.probs[i];
    CHECK(exact_amplitude(cdf_a_operator(d, 5)) ==
          doctest::Approx(partial).epsilon(1e-10));
    CHECK(exact_amplitude(tail_mass_a_operator(d, 5)) ==
          doctest::Approx(1.0 - partial).epsilon(1e-10));
    // identity inversion metadata
    const auto a_op = cdf_a_operator(d, 5);
    CHECK(a_op.invert(0.37) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("window mass operator counts the inclusive window") {
    const auto d = from_pmf({0.1, 0.2, 0.3, 0.15, 0.05, 0.05, 0.05, 0.1}, 0.0, 1.0);
    const auto a_op = window_mass_a_operator(d, 5, 2);
    double want = 0.0;
    for (std::uint64_t i = 2; i <= 5; ++i) want += d.probs[i];
    CHECK(std::abs(exact_amplitude(a_op) - want) < 1e-10);
}

TEST_CASE("cvar A-operator amplitude identity") {
    const auto p = *find_preset("normal-3-1");
    const auto d = discretize(p.spec, p.sim_lo, p.sim_hi, 4);
    const double gamma = kPi / 8.0;
    auto tail = [&](std::uint64_t k) {
        double want = 0.0;
        for (std::uint64_t i = k; i < d.size(); ++i)
            want += d.probs[i] * std::pow(std::sin(g_hat(d, i, gamma)), 2);
        return want;
    };
    CHECK(std::abs(exact_amplitude(cvar_a_operator(d, 0, gamma)) - tail(0)) < 1e-9);
    CHECK(std::abs(exact_amplitude(cvar_a_operator(d, 12, gamma)) - tail(12)) < 1e-9);
    CHECK(std::abs(exact_amplitude(cvar_a_operator(d, 15, gamma)) - tail(15)) < 1e-9);
}

TEST_CASE("A-operator amplitude identity on random draws") {
    std::mt19937_64 rng(2024);
    for (int draw = 0; draw < 50; ++draw) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 3);
        const auto d = random_pmf(n, rng);
        const double gamma = 0.05 + 0.9 * (static_cast<double>(rng() % 1000) / 1000.0);
        const std::uint64_t k1 = rng() % d.size();
        const std::uint64_t k2 = k1 == 0 ? 0 : rng() % (k1 + 1);
        const auto a_op = rvar_a_operator(d, k1, k2, gamma);
        double want = 0.0;
        for (std::uint64_t i = k2; i <= k1; ++i)
            want += d.probs[i] * std::pow(std::sin(g_hat(d, i, gamma)), 2);
        CHECK(std::abs(exact_amplitude(a_op) - want) < 1e-9);

        const std::uint64_t i_star = rng() % d.size();
        const double alpha = 0.5 + 0.49 * (static_cast<double>(rng() % 1000) / 1000.0);
        const auto params = ExpectileParams::at(alpha, d, i_star);
        const auto e_op = expectile_a_operator(d, params, gamma);
        double want_e = 0.0;
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            const double g = expectile_angle(d, params, gamma, i);
            want_e += d.probs[i] * std::sin(g) * std::sin(g);
        }
        CHECK(std::abs(exact_amplitude(e_op) - want_e) < 1e-9);
    }
}

TEST_CASE("grover operator obeys the rotation law") {
    SUBCASE("amplitude zero stays zero") {
        const auto d = from_pmf({1.0, 0.0, 0.0, 0.0}, 0.0, 1.0);
        const auto a_op = cdf_a_operator(d, 0); // P(i < 0) = 0
        QuantumState s(a_op.circuit.layout);
        apply_inplace(s, a_op.circuit);
        const Circuit q = grover_operator(a_op);
        for (int k = 0; k < 3; ++k) {
            apply_inplace(s, q);
            CHECK(probability_of(s, a_op.objective_qubit, 1) < 1e-12);
        }
    }
    SUBCASE("amplitude one stays one") {
        const auto d = from_pmf({1.0, 0.0, 0.0, 0.0}, 0.0, 1.0);
        const auto a_op = cdf_a_operator(d, 4);
        QuantumState s(a_op.circuit.layout);
        apply_inplace(s, a_op.circuit);
        const Circuit q = grover_operator(a_op);
        for (int k = 0; k < 3; ++k) {
            apply_inplace(s, q);
            CHECK(probability_of(s, a_op.objective_qubit, 1) ==
                  doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    SUBCASE("sin^2((2k+1) theta) for k <= 4 on random operators") {
        std::mt19937_64 rng(5);
        for (int draw = 0; draw < 5; ++draw) {
            const auto d = random_pmf(3, rng);
            const auto a_op =
                rvar_a_operator(d, 4 + rng() % 4, rng() % 4, 0.2 + 0.5 * (rng() % 2));
            const double a = exact_amplitude(a_op);
            const double theta = std::asin(std::sqrt(a));
            QuantumState s(a_op.circuit.layout);
            apply_inplace(s, a_op.circuit);
            const Circuit q = grover_operator(a_op);
            for (int k = 1; k <= 4; ++k) {
                apply_inplace(s, q);
                const double want = std::pow(std::sin((2 * k + 1) * theta), 2);
                CHECK(std::abs(probability_of(s, a_op.objective_qubit, 1) - want) <
                      1e-8);
            }
        }
    }
}

TEST_CASE("linearization bound underpinning the affine inversion") {
    for (double gamma : {0.05, 0.1, kPi / 8.0, 0.5, kPi / 4.0, 1.0}) {
        for (int zi = -100; zi <= 100; ++zi) {
            const double z = zi / 100.0;
            const double exact = std::pow(std::sin(gamma * z + kPi / 4.0), 2);
            const double linear = gamma * z + 0.5;
            CHECK(std::abs(exact - linear) <=
                  gamma * gamma * gamma * std::abs(z * z * z) + 1e-15);
        }
    }
}

TEST_CASE("linear inversion of the A-operator encoding") {
    AOperator a;
    a.gamma = 0.25;
    a.f_min = -2.0;
    a.f_max = 6.0;
    // amplitude 1/2 maps to the payoff midpoint
    CHECK(a.invert(0.5) == doctest::Approx(2.0).epsilon(1e-12));
    // slope (f_max - f_min)/(2 gamma)
    CHECK(a.invert(0.6) - a.invert(0.5) == doctest::Approx(0.1 / 0.5 * 8.0).epsilon(1e-12));
}

TEST_CASE("expectile params validation") {
    const auto d = from_pmf({0.5, 0.5}, 0.0, 1.0);
    CHECK_THROWS_AS(ExpectileParams::at(0.4, d, 0), ConfigError);
    CHECK_THROWS_AS(ExpectileParams::at(1.0, d, 0), ConfigError);
    CHECK_THROWS_AS(ExpectileParams::at(0.8, d, 2), ConfigError);
    const auto params = ExpectileParams::at(0.75, d, 1);
    CHECK(params.beta_e == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(params.x_star == doctest::Approx(1.0).epsilon(1e-12));
}
