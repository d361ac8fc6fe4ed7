// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qrisk {

/// Invalid configuration (bad layout, out-of-range threshold, unknown key).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Qubit budget or memory limit exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input that leaves the operation without a meaningful answer
/// (all-zero density, zero payoff range, empty conditioning window).
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative estimator hit its budget before reaching tolerance.
/// Carries the last bracketing interval for the target amplitude.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), interval_lo(lo), interval_hi(hi) {}
    double interval_lo;
    double interval_hi;
};

/// Conditional-expectation denominator fell below the configured floor.
struct IllConditionedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Estimated quantile indices came back out of order.
struct InconsistentQuantilesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qrisk
