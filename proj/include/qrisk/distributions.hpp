// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrisk/circuit.hpp"

namespace qrisk {

/// One of the three continuous laws of the case study.
struct ContinuousSpec {
    enum class Family { Normal, Lognormal, Gamma };
    Family family = Family::Normal;
    // Normal/Lognormal: (mu, sigma) with sigma > 0 the standard deviation of
    // the (underlying) normal. Gamma: (shape p, rate q), both > 0.
    double param1 = 0.0;
    double param2 = 1.0;

    double density(double x) const;
    std::string name() const;
};

/// Probability mass function on the grid {a, a+b, ..., a+(2^n-1)b}.
struct DiscretizedDistribution {
    std::uint32_t n_qubits = 0;
    double a = 0.0; ///< grid origin
    double b = 0.0; ///< grid step, > 0
    std::vector<double> probs;

    std::uint64_t size() const { return probs.size(); }
    /// Affine grid map g_X(i) = a + b*i.
    double grid(std::uint64_t i) const { return a + b * static_cast<double>(i); }
    double grid_min() const { return a; }
    double grid_max() const { return grid(size() - 1); }

    double mean() const;
    /// Mirror image: support negated, probabilities reversed. Represents -X.
    DiscretizedDistribution negated() const;
};

/// Evaluates the density on the 2^n-point grid over [lo, hi] and normalizes.
DiscretizedDistribution discretize(const ContinuousSpec& spec, double lo, double hi,
                                   std::uint32_t n_qubits);

/// Discretized distribution from an explicit pmf (escape hatch; values are
/// normalized and must be non-negative).
DiscretizedDistribution from_pmf(std::vector<double> probs, double a, double b);

/// State-preparation circuit R with R|0>_n = sum_i sqrt(p_i) |i>_n on the
/// distribution register of `layout`. Exact amplitude encoding through a
/// binary tree of uniformly controlled y-rotations.
Circuit loader_circuit(const DiscretizedDistribution& dist, const RegisterLayout& layout);

/// Appends the loader gates for `dist` acting on the given register.
void append_loader(Circuit& c, const DiscretizedDistribution& dist, QubitRange reg);

/// Named presets of Table-style parameters with their discretization
/// intervals ("normal-3-1", "lognormal-0-0.5", "gamma-1-1").
struct Preset {
    ContinuousSpec spec;
    double sim_lo, sim_hi; ///< simulator-scale interval
    double hw_lo, hw_hi;   ///< hardware-scale interval
};

std::optional<Preset> find_preset(const std::string& name);
std::vector<std::string> preset_names();

} // namespace qrisk
