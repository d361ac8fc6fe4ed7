// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qrisk/distributions.hpp"
#include "qrisk/risk.hpp"

namespace qrisk::oracle {

// ---- special functions -----------------------------------------------------

/// Standard normal density and cdf (cdf through std::erf).
double normal_pdf(double z);
double normal_cdf(double z);
/// Inverse standard normal cdf, bracketed Newton to 1e-12.
double normal_quantile(double p);
/// Regularized lower incomplete gamma P(s, x), series/continued-fraction split.
double reg_lower_gamma(double s, double x);

// ---- exact discrete measures (loss orientation on the loaded pmf) ----------

/// Smallest grid index whose CDF reaches `target_cum`.
std::uint64_t quantile_index(const DiscretizedDistribution& dist, double target_cum);

/// Loss VaR at level lambda: grid value at the (1-lambda)-quantile index.
double exact_var(const DiscretizedDistribution& dist, double lambda);

/// Loss CVaR: conditional mean of the tail i >= quantile index.
double exact_cvar(const DiscretizedDistribution& dist, double lambda);

/// Loss RVaR at levels (alpha, beta), beta < alpha: conditional mean of the
/// window between the (1-alpha)- and (1-beta)-quantile indices.
double exact_rvar(const DiscretizedDistribution& dist, double alpha, double beta);

/// Expectile of the pmf at any level: bisection to 1e-12 on the residual
/// alpha E[(X-e)^+] - (1-alpha) E[(e-X)^+].
double exact_expectile(const DiscretizedDistribution& dist, double alpha);

/// Residual of the expectile equation at e (strictly decreasing in e).
double expectile_residual(const DiscretizedDistribution& dist, double alpha, double e);

/// Exact h_{X,alpha}(x) = E[max{(1+beta)X - beta x, X}] on the pmf.
double exact_h(const DiscretizedDistribution& dist, double alpha, double x);

// ---- continuous references --------------------------------------------------

/// h_{Y,alpha} for Y ~ N(mu, sigma^2):
/// mu + beta (1 - Phi((x-mu)/sigma))(mu - x) + beta sigma phi((x-mu)/sigma).
double closed_form_h_normal(double mu, double sigma, double alpha, double x);

/// Inverse CDF of the continuous law, to 1e-10.
double continuous_quantile(const ContinuousSpec& spec, double p);

/// Untruncated mean.
double continuous_mean(const ContinuousSpec& spec);

/// Continuous loss-orientation references: VaR, tail/window conditional
/// means, and the expectile (root search on closed-form partial
/// expectations).
double continuous_var(const ContinuousSpec& spec, double lambda);
double continuous_cvar(const ContinuousSpec& spec, double lambda);
double continuous_rvar(const ContinuousSpec& spec, double alpha, double beta);
double continuous_expectile(const ContinuousSpec& spec, double alpha);

/// E[X 1{X > t}] for the untruncated law (partial expectation).
double partial_expectation_above(const ContinuousSpec& spec, double t);
/// P(X > t).
double tail_probability(const ContinuousSpec& spec, double t);

} // namespace qrisk::oracle
