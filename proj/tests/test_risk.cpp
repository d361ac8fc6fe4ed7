// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrisk/distributions.hpp"
#include "qrisk/errors.hpp"
#include "qrisk/oracle.hpp"
#include "qrisk/risk.hpp"

using namespace qrisk;
namespace orc = qrisk::oracle;

namespace {

constexpr double kPi = std::numbers::pi;

QAEConfig exact_cfg() {
    QAEConfig cfg;
    cfg.variant = qae::ExactAmplitude{};
    return cfg;
}

QAEConfig iqae_cfg(double eps, QAEConfig::Mode mode, std::uint64_t seed = 0) {
    QAEConfig cfg;
    cfg.variant = qae::Iqae{.epsilon = eps, .alpha_conf = 0.01, .shots = 2048};
    cfg.mode = mode;
    cfg.seed = seed;
    return cfg;
}

DiscretizedDistribution preset_dist(const std::string& name, std::uint32_t n) {
    const auto p = *find_preset(name);
    return discretize(p.spec, p.sim_lo, p.sim_hi, n);
}

/// Payoff range of the expectile operator anchored at grid index i_star.
double expectile_span(const DiscretizedDistribution& d, double alpha,
                      std::uint64_t i_star) {
    const double beta = (2.0 * alpha - 1.0) / (1.0 - alpha);
    const double n1 = static_cast<double>(d.size() - 1);
    return (1.0 + beta) * d.b * n1 - beta * d.b * static_cast<double>(i_star);
}

} // namespace

TEST_CASE("exact-mode quantum VaR reproduces the classical oracle") {
    for (const auto& name : preset_names()) {
        for (const double lambda : {0.2, 0.05, 0.005}) {
            const auto d = preset_dist(name, 5);
            const auto r = quantum_var(d, 1.0 - lambda, exact_cfg());
            CHECK(r.value == doctest::Approx(orc::exact_var(d, lambda)).epsilon(1e-12));
            CHECK(r.iterations <= d.n_qubits + 1);
            CHECK(*r.threshold_index == orc::quantile_index(d, 1.0 - lambda));
        }
    }
}

TEST_CASE("VaR level edges hit the grid endpoints") {
    const auto d = preset_dist("normal-3-1", 4);
    // level -> 0+ selects the first grid point, level -> 1- the last one.
    CHECK(quantum_var(d, 1e-9, exact_cfg()).value ==
          doctest::Approx(d.grid_min()).epsilon(1e-12));
    CHECK(quantum_var(d, 1.0 - 1e-12, exact_cfg()).value ==
          doctest::Approx(d.grid_max()).epsilon(1e-12));
    CHECK_THROWS_AS(quantum_var(d, 0.0, exact_cfg()), ConfigError);
    CHECK_THROWS_AS(quantum_var(d, 1.0, exact_cfg()), ConfigError);
}

TEST_CASE("exact-mode CVaR tracks the discrete oracle within the bias bound") {
    const double gamma = default_gamma_var_cvar();
    for (const auto& name : preset_names()) {
        const auto d = preset_dist(name, 5);
        for (const double lambda : {0.2, 0.05}) {
            const auto r = quantum_cvar(d, 1.0 - lambda, gamma, exact_cfg());
            const double truth = orc::exact_cvar(d, lambda);
            // Linearization bias of the sin^2 encoding is O(gamma^2 range),
            // amplified by the window mass in the conditional division.
            const double bound =
                gamma * gamma * (d.grid_max() - d.grid_min()) / (*r.window_mass);
            CHECK(std::abs(r.value - truth) <= bound);
        }
    }
}

TEST_CASE("CVaR with full support recovers the mean") {
    const auto d = preset_dist("gamma-1-1", 4);
    const double gamma = default_gamma_var_cvar();
    // level -> 0+ puts the threshold at index 0: unconditional expectation.
    const auto r = quantum_cvar(d, 1e-9, gamma, exact_cfg());
    CHECK(*r.threshold_index == 0);
    CHECK(std::abs(r.value - d.mean()) <=
          gamma * gamma * (d.grid_max() - d.grid_min()) / 3.0);
}

TEST_CASE("single-point tail collapses CVaR to the top grid value") {
    // All trailing mass at the last grid point.
    const auto d = from_pmf({0.3, 0.3, 0.3, 0.1}, 0.0, 1.0);
    const double gamma = default_gamma_var_cvar();
    const auto r = quantum_cvar(d, 0.95, gamma, exact_cfg());
    CHECK(*r.threshold_index == 3);
    CHECK(std::abs(r.value - 3.0) <=
          gamma * gamma * (d.grid_max() - d.grid_min()) / 3.0 + 1e-12);
}

TEST_CASE("RVaR pipeline against the discrete oracle") {
    const double gamma = default_gamma_rvar_expectile();
    const auto d = preset_dist("gamma-1-1", 5);
    const auto r = quantum_rvar(d, 0.8, 0.95, gamma, exact_cfg());
    const double truth = orc::exact_rvar(d, 0.2, 0.05);
    const double bound =
        gamma * gamma * (d.grid_max() - d.grid_min()) / (*r.window_mass);
    CHECK(std::abs(r.value - truth) <= bound);
    CHECK(*r.threshold_index == orc::quantile_index(d, 0.8));
    CHECK(*r.threshold_index_2 == orc::quantile_index(d, 0.95));
}

TEST_CASE("degenerate single-index RVaR window returns the grid value") {
    // Concentrated pmf: both quantile searches land on the same index.
    const auto d =
        from_pmf({0.05, 0.05, 0.8, 0.05, 0.03, 0.01, 0.005, 0.005}, 0.0, 0.5);
    const double gamma = default_gamma_rvar_expectile();
    const auto r = quantum_rvar(d, 0.5, 0.8, gamma, exact_cfg());
    REQUIRE(*r.threshold_index == *r.threshold_index_2);
    CHECK(std::abs(r.value - d.grid(*r.threshold_index)) <=
          gamma * gamma * (d.grid_max() - d.grid_min()) / 3.0 + 1e-12);
}

TEST_CASE("RVaR configuration and conditioning errors") {
    const auto d = preset_dist("normal-3-1", 4);
    const double gamma = default_gamma_rvar_expectile();
    CHECK_THROWS_AS(quantum_rvar(d, 0.95, 0.8, gamma, exact_cfg()), ConfigError);
    CHECK_THROWS_AS(quantum_rvar(d, 0.8, 0.8, gamma, exact_cfg()), ConfigError);
    // A conditioning floor above the window mass must surface, never clamp.
    CHECK_THROWS_AS(quantum_rvar(d, 0.8, 0.95, gamma, exact_cfg(),
                                 SignConvention::Loss, 0.5),
                    IllConditionedError);
    CHECK_THROWS_AS(quantum_cvar(d, 0.95, gamma, exact_cfg(),
                                 SignConvention::Loss, 0.5),
                    IllConditionedError);
}

TEST_CASE("measure ordering VaR <= RVaR <= CVaR in exact mode") {
    for (const auto& name : preset_names()) {
        const auto d = preset_dist(name, 5);
        const double var = quantum_var(d, 0.95, exact_cfg()).value;
        const double rvar =
            quantum_rvar(d, 0.8, 0.95, default_gamma_rvar_expectile(), exact_cfg())
                .value;
        const double cvar =
            quantum_cvar(d, 0.95, default_gamma_var_cvar(), exact_cfg()).value;
        const double slack = 0.05 * (d.grid_max() - d.grid_min());
        CHECK(var <= cvar + slack);
        CHECK(rvar <= cvar + slack);
    }
}

TEST_CASE("h estimate matches the normal closed form at x = 3") {
    const auto d = preset_dist("normal-3-1", 6);
    const double alpha = 0.95, gamma = 0.2;
    const auto cfg = iqae_cfg(0.01, QAEConfig::Mode::ExactProbability);
    const double est = h_estimate(d, 3.0, alpha, gamma, cfg);
    const double exact = orc::exact_h(d, alpha, 3.0);
    const double closed = orc::closed_form_h_normal(3.0, 1.0, alpha, 3.0);
    const std::uint64_t i_star =
        static_cast<std::uint64_t>(std::round((3.0 - d.a) / d.b));
    const double span = expectile_span(d, alpha, i_star);
    // QAE half-width and sin^2 linearization bias, both mapped through the
    // affine inversion, plus the pmf-vs-continuous discretization gap.
    const double slack = 0.01 * span / (2.0 * gamma) +
                         gamma * gamma * span / 3.0 + std::abs(exact - closed);
    CHECK(std::abs(est - closed) <= slack);
}

TEST_CASE("h estimate at alpha = 1/2 is the mean for every anchor") {
    const auto d = preset_dist("gamma-1-1", 5);
    const double gamma = 0.2;
    for (const double x : {0.0, 2.5, 9.0}) {
        const double est = h_estimate(d, x, 0.5, gamma, exact_cfg());
        CHECK(std::abs(est - d.mean()) <=
              gamma * gamma * (d.grid_max() - d.grid_min()) / 3.0);
    }
}

TEST_CASE("expectile at alpha = 1/2 is the mean within max(eps, b)") {
    // gamma small enough that the encoding bias stays below the grid step.
    for (const auto& name : preset_names()) {
        const auto d = preset_dist(name, 5);
        const auto r = expectile(d, 0.5, 0.2, exact_cfg());
        CHECK(r.converged);
        CHECK(std::abs(r.value - d.mean()) <= d.b);
        CHECK(*r.evar == doctest::Approx(-r.value).epsilon(1e-12));
    }
}

TEST_CASE("low-level expectiles (reflection path) track the oracle") {
    // The case-study levels sit below 1/2: the reflection anchors the payoff
    // kink near the top of the mirrored grid, where the pi/4 encoding is
    // accurate.
    for (const auto& name : preset_names()) {
        const auto d = preset_dist(name, 6);
        for (const double alpha : {0.05, 0.2}) {
            const double gamma = default_gamma_rvar_expectile();
            const auto r = expectile(d, alpha, gamma, exact_cfg());
            CHECK(r.converged);
            // Bias bound of the sin^2 encoding on the mirrored grid, anchored
            // at the oracle root of the reflected problem.
            const auto neg = d.negated();
            const double truth = orc::exact_expectile(d, alpha);
            const std::uint64_t i_star = static_cast<std::uint64_t>(
                std::llround((-truth - neg.a) / neg.b));
            const double bound =
                gamma * gamma * expectile_span(neg, 1.0 - alpha, i_star) / 3.0 + d.b;
            CHECK(std::abs(r.value - truth) <= bound);
        }
    }
}

TEST_CASE("high-level expectile stays within the linearization bias bound") {
    // Directly anchored payoffs at alpha = 0.95 carry the full gamma^2 span
    // bias of the sin^2 encoding; the result must stay inside that envelope.
    const auto d = preset_dist("gamma-1-1", 6);
    const double gamma = default_gamma_rvar_expectile();
    const auto r = expectile(d, 0.95, gamma, exact_cfg());
    const double truth = orc::exact_expectile(d, 0.95);
    const std::uint64_t i_star =
        static_cast<std::uint64_t>(std::round((truth - d.a) / d.b));
    const double bound = gamma * gamma * expectile_span(d, 0.95, i_star) / 3.0 + d.b;
    CHECK(std::abs(r.value - truth) <= bound);
}

TEST_CASE("gamma preset at n = 7 against continuous references") {
    const auto d = preset_dist("gamma-1-1", 7);
    SUBCASE("VaR at lambda = 0.05 is within one grid step of ln 20") {
        const auto r = quantum_var(d, 0.95, exact_cfg());
        CHECK(std::abs(r.value - std::log(20.0)) <= d.b);
    }
    SUBCASE("expectile at alpha = 0.95, small gamma, IQAE eps = 0.005") {
        const double gamma = 0.15;
        const auto r = expectile(d, 0.95, gamma,
                                 iqae_cfg(0.005, QAEConfig::Mode::ExactProbability));
        const double truth = orc::exact_expectile(d, 0.95);
        const std::uint64_t i_star =
            static_cast<std::uint64_t>(std::round((truth - d.a) / d.b));
        const double span = expectile_span(d, 0.95, i_star);
        // one grid step + QAE-induced slack through the inversion (the
        // encoding bias at this gamma sits below the slack)
        const double slack = 0.005 * span / (2.0 * gamma) +
                             gamma * gamma * span / 3.0;
        CHECK(std::abs(r.value - truth) <= d.b + slack);
    }
    SUBCASE("RVaR window between the 0.95 and 0.995 quantiles, exact mode") {
        const double gamma = default_gamma_rvar_expectile();
        const auto r = quantum_rvar(d, 0.95, 0.995, gamma, exact_cfg());
        const double truth = orc::exact_rvar(d, 0.05, 0.005);
        const double bound =
            gamma * gamma * (d.grid_max() - d.grid_min()) / (*r.window_mass) + d.b;
        CHECK(std::abs(r.value - truth) <= bound);
    }
}

TEST_CASE("expectile reflection identity") {
    const auto d = preset_dist("lognormal-0-0.5", 5);
    for (const double alpha : {0.2, 0.05}) {
        const auto lo = expectile(d, alpha, default_gamma_rvar_expectile(), exact_cfg());
        const auto hi = expectile(d.negated(), 1.0 - alpha,
                                  default_gamma_rvar_expectile(), exact_cfg());
        CHECK(std::abs(lo.value + hi.value) <= 2.0 * d.b);
    }
}

TEST_CASE("orientation: PnL input equals loss pipeline on the mirrored pmf") {
    const auto d = preset_dist("normal-3-1", 4);
    const auto neg = d.negated();
    const auto a = quantum_var(d, 0.95, exact_cfg(), SignConvention::Pnl);
    const auto b = quantum_var(neg, 0.95, exact_cfg(), SignConvention::Loss);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
    const auto ca = quantum_cvar(d, 0.95, default_gamma_var_cvar(), exact_cfg(),
                                 SignConvention::Pnl);
    const auto cb = quantum_cvar(neg, 0.95, default_gamma_var_cvar(), exact_cfg(),
                                 SignConvention::Loss);
    CHECK(ca.value == doctest::Approx(cb.value).epsilon(1e-12));
}

TEST_CASE("bisection caps surface as a non-converged result") {
    const auto d = preset_dist("gamma-1-1", 5);
    BisectionConfig bisect;
    bisect.max_iterations = 1;
    bisect.epsilon = 1e-12;
    bisect.delta = 1e-12;
    const auto r = expectile(d, 0.9, default_gamma_rvar_expectile(), exact_cfg(), bisect);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 1);
}

TEST_CASE("level validation") {
    const auto d = preset_dist("gamma-1-1", 3);
    CHECK_THROWS_AS(expectile(d, 0.0, 0.5, exact_cfg()), ConfigError);
    CHECK_THROWS_AS(expectile(d, 1.0, 0.5, exact_cfg()), ConfigError);
    CHECK_THROWS_AS(quantum_cvar(d, -0.1, 0.3, exact_cfg()), ConfigError);
}

TEST_CASE("sampled pipelines are seed-reproducible") {
    const auto d = preset_dist("gamma-1-1", 4);
    const auto cfg = iqae_cfg(0.02, QAEConfig::Mode::Sampled, 123);
    const auto r1 = quantum_cvar(d, 0.8, default_gamma_var_cvar(), cfg);
    const auto r2 = quantum_cvar(d, 0.8, default_gamma_var_cvar(), cfg);
    CHECK(r1.value == r2.value);
    CHECK(*r1.threshold_index == *r2.threshold_index);
    // A different seed may move the estimate but must keep the diagnostics.
    const auto r3 = quantum_cvar(d, 0.8, default_gamma_var_cvar(),
                                 iqae_cfg(0.02, QAEConfig::Mode::Sampled, 124));
    CHECK(r3.qae_diagnostics.size() >= 2);
    CHECK(*r3.window_mass > 0.0);
}

TEST_CASE("default gammas") {
    CHECK(default_gamma_var_cvar() == doctest::Approx(kPi / 8.0));
    CHECK(default_gamma_rvar_expectile() == doctest::Approx(kPi / 4.0));
}
