// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrisk/qae.hpp"

namespace qrisk {

/// Orientation of the loaded variable. `Pnl`: the pmf is the profit-and-loss
/// variable X of the risk-measure definitions. `Loss`: the pmf is -X, so
/// larger grid values mean larger losses (the case-study convention).
enum class SignConvention { Pnl, Loss };

struct BisectionConfig {
    std::uint32_t max_iterations = 30;
    double epsilon = 0.0; ///< residual tolerance; 0 -> default b/2
    double delta = 0.0;   ///< interval tolerance; 0 -> default b/2
};

/// Default scaling parameters: pi/8 for the VaR/CVaR pipelines, pi/4 for
/// RVaR and expectile.
double default_gamma_var_cvar();
double default_gamma_rvar_expectile();

struct RiskResult {
    std::string measure;
    double value = 0.0; ///< in the loaded variable's units (loss units)
    SignConvention orientation = SignConvention::Loss;
    double grid_step = 0.0;
    std::uint32_t iterations = 0;
    bool converged = true;
    std::vector<QAEResult> qae_diagnostics;
    std::optional<double> window_mass;
    std::optional<std::uint64_t> threshold_index;   ///< VaR/CVaR index, RVaR k2
    std::optional<std::uint64_t> threshold_index_2; ///< RVaR k1
    std::optional<double> evar; ///< -expectile, reported alongside
};

/// One evaluation of h_{X,alpha}(x) = E[max{(1+beta)X - beta x, X}] through
/// the quantum pipeline; x is snapped to the nearest grid point.
double h_estimate(const DiscretizedDistribution& dist, double x, double alpha_exp,
                  double gamma, const QAEConfig& qae_cfg,
                  std::vector<QAEResult>* diagnostics = nullptr);

/// Expectile of the loaded pmf at any level in (0,1); levels below 1/2 use
/// the reflection e_alpha(X) = -e_{1-alpha}(-X).
RiskResult expectile(const DiscretizedDistribution& dist, double alpha_exp, double gamma,
                     const QAEConfig& qae_cfg, const BisectionConfig& bisect = {});

/// VaR via binary search over grid thresholds on QAE-estimated CDF values:
/// the smallest grid value whose estimated CDF reaches `level`. A tail risk
/// level lambda maps to level = 1 - lambda on a loss variable.
RiskResult quantum_var(const DiscretizedDistribution& dist, double level,
                       const QAEConfig& qae_cfg,
                       SignConvention orientation = SignConvention::Loss);

/// CVaR pipeline: quantile search at CDF target `level`, tail mass, tail
/// payoff, inversion.
RiskResult quantum_cvar(const DiscretizedDistribution& dist, double level, double gamma,
                        const QAEConfig& qae_cfg,
                        SignConvention orientation = SignConvention::Loss,
                        double denominator_floor = 1e-4);

/// RVaR pipeline: two quantile searches at CDF targets level_lo < level_hi,
/// window mass, windowed payoff. A loss-tail pair (alpha, beta) with
/// beta < alpha maps to targets (1 - alpha, 1 - beta).
RiskResult quantum_rvar(const DiscretizedDistribution& dist, double level_lo,
                        double level_hi, double gamma, const QAEConfig& qae_cfg,
                        SignConvention orientation = SignConvention::Loss,
                        double denominator_floor = 1e-4);

} // namespace qrisk
