// SPDX-License-Identifier: Apache-2.0
#include "qrisk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrisk/errors.hpp"

namespace qrisk::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double beta_of(double alpha) { return (2.0 * alpha - 1.0) / (1.0 - alpha); }

double continuous_cdf(const ContinuousSpec& spec, double x) {
    switch (spec.family) {
    case ContinuousSpec::Family::Normal:
        return normal_cdf((x - spec.param1) / spec.param2);
    case ContinuousSpec::Family::Lognormal:
        if (x <= 0.0) return 0.0;
        return normal_cdf((std::log(x) - spec.param1) / spec.param2);
    case ContinuousSpec::Family::Gamma:
        if (x <= 0.0) return 0.0;
        return reg_lower_gamma(spec.param1, spec.param2 * x);
    }
    return 0.0;
}

/// Lower incomplete gamma by power series (x < s + 1).
double gamma_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double ap = s;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

/// Upper incomplete gamma by modified Lentz continued fraction (x >= s + 1).
double gamma_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

} // namespace

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("normal quantile needs p in (0, 1)");
    double lo = -40.0, hi = 40.0, z = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double f = normal_cdf(z) - p;
        if (f > 0.0)
            hi = z;
        else
            lo = z;
        const double dens = normal_pdf(z);
        double next = dens > 1e-300 ? z - f / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - z) < 1e-13) return next;
        z = next;
    }
    return z;
}

double reg_lower_gamma(double s, double x) {
    if (!(s > 0.0)) throw ConfigError("incomplete gamma needs s > 0");
    if (x <= 0.0) return 0.0;
    if (x < s + 1.0) return gamma_series(s, x);
    return 1.0 - gamma_cf(s, x);
}

std::uint64_t quantile_index(const DiscretizedDistribution& dist, double target_cum) {
    double cum = 0.0;
    for (std::uint64_t i = 0; i < dist.size(); ++i) {
        cum += dist.probs[i];
        if (cum >= target_cum - 1e-15) return i;
    }
    return dist.size() - 1;
}

double exact_var(const DiscretizedDistribution& dist, double lambda) {
    return dist.grid(quantile_index(dist, 1.0 - lambda));
}

double exact_cvar(const DiscretizedDistribution& dist, double lambda) {
    const std::uint64_t k = quantile_index(dist, 1.0 - lambda);
    double mass = 0.0, sum = 0.0;
    for (std::uint64_t i = k; i < dist.size(); ++i) {
        mass += dist.probs[i];
        sum += dist.probs[i] * dist.grid(i);
    }
    if (mass <= 0.0) throw DegenerateInputError("empty tail in exact CVaR");
    return sum / mass;
}

double exact_rvar(const DiscretizedDistribution& dist, double alpha, double beta) {
    if (!(beta < alpha)) throw ConfigError("RVaR needs beta < alpha");
    const std::uint64_t k2 = quantile_index(dist, 1.0 - alpha);
    const std::uint64_t k1 = quantile_index(dist, 1.0 - beta);
    double mass = 0.0, sum = 0.0;
    for (std::uint64_t i = k2; i <= k1; ++i) {
        mass += dist.probs[i];
        sum += dist.probs[i] * dist.grid(i);
    }
    if (mass <= 0.0) throw DegenerateInputError("empty window in exact RVaR");
    return sum / mass;
}

double expectile_residual(const DiscretizedDistribution& dist, double alpha, double e) {
    double up = 0.0, down = 0.0;
    for (std::uint64_t i = 0; i < dist.size(); ++i) {
        const double x = dist.grid(i);
        if (x > e)
            up += dist.probs[i] * (x - e);
        else
            down += dist.probs[i] * (e - x);
    }
    return alpha * up - (1.0 - alpha) * down;
}

double exact_expectile(const DiscretizedDistribution& dist, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("expectile level must lie in (0, 1)");
    double lo = dist.grid_min(), hi = dist.grid_max();
    const double tol = 1e-12 * std::max(1.0, std::abs(hi - lo));
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (expectile_residual(dist, alpha, mid) > 0.0)
            lo = mid; // residual decreasing: root above
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double exact_h(const DiscretizedDistribution& dist, double alpha, double x) {
    const double beta = beta_of(alpha);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < dist.size(); ++i) {
        const double xi = dist.grid(i);
        sum += dist.probs[i] * std::max((1.0 + beta) * xi - beta * x, xi);
    }
    return sum;
}

double closed_form_h_normal(double mu, double sigma, double alpha, double x) {
    const double beta = beta_of(alpha);
    const double z = (x - mu) / sigma;
    return mu + beta * (1.0 - normal_cdf(z)) * (mu - x) + beta * sigma * normal_pdf(z);
}

double continuous_quantile(const ContinuousSpec& spec, double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile level must lie in (0, 1)");
    if (spec.family == ContinuousSpec::Family::Normal)
        return spec.param1 + spec.param2 * normal_quantile(p);
    if (spec.family == ContinuousSpec::Family::Lognormal)
        return std::exp(spec.param1 + spec.param2 * normal_quantile(p));
    // Gamma: bracketed bisection on the regularized cdf.
    double lo = 0.0, hi = 1.0;
    while (continuous_cdf(spec, hi) < p) hi *= 2.0;
    for (int it = 0; it < 500 && hi - lo > 1e-10 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (continuous_cdf(spec, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double continuous_mean(const ContinuousSpec& spec) {
    switch (spec.family) {
    case ContinuousSpec::Family::Normal:
        return spec.param1;
    case ContinuousSpec::Family::Lognormal:
        return std::exp(spec.param1 + 0.5 * spec.param2 * spec.param2);
    case ContinuousSpec::Family::Gamma:
        return spec.param1 / spec.param2;
    }
    return 0.0;
}

double partial_expectation_above(const ContinuousSpec& spec, double t) {
    switch (spec.family) {
    case ContinuousSpec::Family::Normal: {
        const double z = (t - spec.param1) / spec.param2;
        return spec.param1 * (1.0 - normal_cdf(z)) + spec.param2 * normal_pdf(z);
    }
    case ContinuousSpec::Family::Lognormal: {
        if (t <= 0.0) return continuous_mean(spec);
        const double mu = spec.param1, sg = spec.param2;
        return std::exp(mu + 0.5 * sg * sg) *
               normal_cdf((mu + sg * sg - std::log(t)) / sg);
    }
    case ContinuousSpec::Family::Gamma: {
        if (t <= 0.0) return continuous_mean(spec);
        const double p = spec.param1, q = spec.param2;
        return (p / q) * (1.0 - reg_lower_gamma(p + 1.0, q * t));
    }
    }
    return 0.0;
}

double tail_probability(const ContinuousSpec& spec, double t) {
    return 1.0 - continuous_cdf(spec, t);
}

double continuous_var(const ContinuousSpec& spec, double lambda) {
    return continuous_quantile(spec, 1.0 - lambda);
}

double continuous_cvar(const ContinuousSpec& spec, double lambda) {
    const double t = continuous_var(spec, lambda);
    return partial_expectation_above(spec, t) / lambda;
}

double continuous_rvar(const ContinuousSpec& spec, double alpha, double beta) {
    if (!(beta < alpha)) throw ConfigError("RVaR needs beta < alpha");
    const double t2 = continuous_quantile(spec, 1.0 - alpha);
    const double t1 = continuous_quantile(spec, 1.0 - beta);
    return (partial_expectation_above(spec, t2) - partial_expectation_above(spec, t1)) /
           (alpha - beta);
}

double continuous_expectile(const ContinuousSpec& spec, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("expectile level must lie in (0, 1)");
    const double mean = continuous_mean(spec);
    auto residual = [&](double e) {
        const double tail = tail_probability(spec, e);
        const double pea = partial_expectation_above(spec, e);
        const double up = pea - e * tail;                  // E[(X - e)^+]
        const double down = e * (1.0 - tail) - mean + pea; // E[(e - X)^+]
        return alpha * up - (1.0 - alpha) * down;
    };
    double lo = continuous_quantile(spec, 1e-9);
    double hi = continuous_quantile(spec, 1.0 - 1e-9);
    // Residual is strictly decreasing; widen until it brackets the root.
    for (int g = 0; g < 60 && residual(lo) <= 0.0; ++g) lo -= std::max(1.0, hi - lo);
    for (int g = 0; g < 60 && residual(hi) >= 0.0; ++g) hi += std::max(1.0, hi - lo);
    for (int it = 0; it < 300 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace qrisk::oracle
