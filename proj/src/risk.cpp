// SPDX-License-Identifier: Apache-2.0
#include "qrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrisk/errors.hpp"

namespace qrisk {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Hands out decorrelated per-call QAE configs within one pipeline run.
struct QaeCaller {
    QAEConfig cfg;
    std::uint64_t calls = 0;
    std::vector<QAEResult>* diag = nullptr;

    double amplitude(const AOperator& a_op) {
        QAEConfig c = cfg;
        c.seed = splitmix64(cfg.seed ^ splitmix64(calls + 1));
        ++calls;
        QAEResult r = estimate_amplitude(a_op, c);
        const double est = r.estimate;
        if (diag) diag->push_back(std::move(r));
        return est;
    }
};

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw ConfigError("risk level must lie in (0, 1)");
}

/// Estimated CDF value P(i <= j) of the loaded pmf.
double estimated_cdf(const DiscretizedDistribution& dist, std::uint64_t j,
                     QaeCaller& qc) {
    return qc.amplitude(cdf_a_operator(dist, j + 1));
}

/// Smallest grid index whose estimated CDF reaches `target`, by bisection
/// over the grid (the CDF is monotone in the index).
std::uint64_t var_index_search(const DiscretizedDistribution& dist, double target,
                               QaeCaller& qc) {
    std::uint64_t lo = 0, hi = dist.size() - 1;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (estimated_cdf(dist, mid, qc) >= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

/// Inversion of a windowed payoff estimate: conditional mean of the grid
/// value given the window, from the raw amplitude and the window mass.
double invert_windowed(const AOperator& payoff_op, double amp, double mass) {
    const double z_sum = (amp - mass / 2.0) / payoff_op.gamma; // sum of p_i z_i
    const double z_mean = z_sum / mass;                        // z in [-1, 1]
    return (z_mean + 1.0) * (payoff_op.f_max - payoff_op.f_min) / 2.0 +
           payoff_op.f_min;
}

DiscretizedDistribution as_loss(const DiscretizedDistribution& dist,
                                SignConvention orientation) {
    return orientation == SignConvention::Loss ? dist : dist.negated();
}

} // namespace

double default_gamma_var_cvar() { return kPi / 8.0; }
double default_gamma_rvar_expectile() { return kPi / 4.0; }

double h_estimate(const DiscretizedDistribution& dist, double x, double alpha_exp,
                  double gamma, const QAEConfig& qae_cfg,
                  std::vector<QAEResult>* diagnostics) {
    const double idx = std::round((x - dist.a) / dist.b);
    const std::uint64_t i_star = static_cast<std::uint64_t>(
        std::clamp(idx, 0.0, static_cast<double>(dist.size() - 1)));
    const auto params = ExpectileParams::at(alpha_exp, dist, i_star);
    const AOperator a_op = expectile_a_operator(dist, params, gamma);
    QaeCaller qc{qae_cfg, 0, diagnostics};
    // Fold the grid coordinate into the seed stream so repeated evaluations
    // at different points do not share shot noise.
    qc.cfg.seed = splitmix64(qae_cfg.seed ^ splitmix64(i_star + 0x51ed'270bull));
    const double amp = qc.amplitude(a_op);
    return a_op.invert(amp);
}

RiskResult expectile(const DiscretizedDistribution& dist, double alpha_exp, double gamma,
                     const QAEConfig& qae_cfg, const BisectionConfig& bisect) {
    check_level(alpha_exp);
    if (alpha_exp < 0.5) {
        // e_alpha(X) = -e_{1-alpha}(-X)
        RiskResult r = expectile(dist.negated(), 1.0 - alpha_exp, gamma, qae_cfg, bisect);
        r.value = -r.value;
        r.evar = -r.value;
        return r;
    }

    RiskResult res;
    res.measure = "expectile";
    res.grid_step = dist.b;
    const double eps = bisect.epsilon > 0.0 ? bisect.epsilon : dist.b / 2.0;
    const double delta = bisect.delta > 0.0 ? bisect.delta : dist.b / 2.0;

    double lo = dist.grid_min(), hi = dist.grid_max();
    double x = 0.5 * (lo + hi);
    res.converged = false;
    for (std::uint32_t it = 0; it < bisect.max_iterations; ++it) {
        x = 0.5 * (lo + hi);
        const double resid =
            h_estimate(dist, x, alpha_exp, gamma, qae_cfg, &res.qae_diagnostics) - x;
        res.iterations = it + 1;
        if (std::abs(resid) <= eps) {
            res.converged = true;
            break;
        }
        if (resid > 0.0)
            lo = x; // fixed point lies above
        else
            hi = x;
        if (hi - lo <= delta) {
            x = 0.5 * (lo + hi);
            res.converged = true;
            break;
        }
    }
    res.value = x;
    res.evar = -x;
    return res;
}

RiskResult quantum_var(const DiscretizedDistribution& dist, double level,
                       const QAEConfig& qae_cfg, SignConvention orientation) {
    check_level(level);
    const DiscretizedDistribution loss = as_loss(dist, orientation);
    RiskResult res;
    res.measure = "var";
    res.orientation = orientation;
    res.grid_step = loss.b;
    QaeCaller qc{qae_cfg, 0, &res.qae_diagnostics};
    const std::uint64_t k = var_index_search(loss, level, qc);
    res.threshold_index = k;
    res.iterations = static_cast<std::uint32_t>(qc.calls);
    res.value = loss.grid(k);
    return res;
}

RiskResult quantum_cvar(const DiscretizedDistribution& dist, double level, double gamma,
                        const QAEConfig& qae_cfg, SignConvention orientation,
                        double denominator_floor) {
    check_level(level);
    const DiscretizedDistribution loss = as_loss(dist, orientation);
    RiskResult res;
    res.measure = "cvar";
    res.orientation = orientation;
    res.grid_step = loss.b;
    QaeCaller qc{qae_cfg, 0, &res.qae_diagnostics};

    const std::uint64_t k = var_index_search(loss, level, qc);
    res.threshold_index = k;

    const double mass = qc.amplitude(tail_mass_a_operator(loss, k));
    res.window_mass = mass;
    if (mass < denominator_floor)
        throw IllConditionedError("estimated tail mass below the conditioning floor");

    const AOperator payoff = cvar_a_operator(loss, k, gamma);
    const double amp = qc.amplitude(payoff);
    res.value = invert_windowed(payoff, amp, mass);
    res.iterations = static_cast<std::uint32_t>(qc.calls);
    return res;
}

RiskResult quantum_rvar(const DiscretizedDistribution& dist, double level_lo,
                        double level_hi, double gamma, const QAEConfig& qae_cfg,
                        SignConvention orientation, double denominator_floor) {
    check_level(level_lo);
    check_level(level_hi);
    if (!(level_lo < level_hi))
        throw ConfigError("RVaR needs two ordered quantile levels");
    const DiscretizedDistribution loss = as_loss(dist, orientation);
    RiskResult res;
    res.measure = "rvar";
    res.orientation = orientation;
    res.grid_step = loss.b;
    QaeCaller qc{qae_cfg, 0, &res.qae_diagnostics};

    const std::uint64_t k2 = var_index_search(loss, level_lo, qc);
    const std::uint64_t k1 = var_index_search(loss, level_hi, qc);
    if (k1 < k2)
        throw InconsistentQuantilesError(
            "estimated quantile indices came back out of order");
    res.threshold_index = k2;
    res.threshold_index_2 = k1;

    const double mass = qc.amplitude(window_mass_a_operator(loss, k1, k2));
    res.window_mass = mass;
    if (mass < denominator_floor)
        throw IllConditionedError("estimated window mass below the conditioning floor");

    const AOperator payoff = rvar_a_operator(loss, k1, k2, gamma);
    const double amp = qc.amplitude(payoff);
    res.value = invert_windowed(payoff, amp, mass);
    res.iterations = static_cast<std::uint32_t>(qc.calls);
    return res;
}

} // namespace qrisk
