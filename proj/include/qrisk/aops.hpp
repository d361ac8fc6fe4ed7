// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "qrisk/circuit.hpp"
#include "qrisk/distributions.hpp"

namespace qrisk {

/// Integer threshold test. `Geq` marks i >= k (cmp1), `Lt` marks i < k (cmp2).
struct ComparatorSpec {
    std::uint64_t threshold = 0;
    enum class Direction { Geq, Lt } direction = Direction::Geq;
};

/// Expectile payoff parameters at level alpha >= 1/2. The slope
/// beta_e = (2 alpha - 1)/(1 - alpha) kinks the payoff at grid index i*.
struct ExpectileParams {
    double alpha = 0.5;
    double beta_e = 0.0;
    std::uint64_t i_star = 0;
    double x_star = 0.0;

    static ExpectileParams at(double alpha, const DiscretizedDistribution& dist,
                              std::uint64_t i_star);
};

/// A state-preparation circuit whose objective-qubit |1> probability encodes
/// an expectation, together with the data needed to invert the encoding.
struct AOperator {
    Circuit circuit;
    std::uint32_t objective_qubit = 0;
    double gamma = 0.0;
    double f_min = 0.0;
    double f_max = 1.0;
    /// True for conditional operators whose inversion divides by a window mass.
    bool window_mass_required = false;

    const RegisterLayout& layout() const { return circuit.layout; }

    /// Linear inversion of the sin^2 encoding:
    /// value = ((amplitude - 1/2)/(2 gamma) + 1/2)(f_max - f_min) + f_min.
    double invert(double amplitude) const;
};

/// Appends a comparator writing the threshold indicator of the value held in
/// `reg` to `result`, using `anc` (n-1 qubits) which are uncomputed.
void append_comparator(Circuit& c, QubitRange reg, std::uint32_t result, QubitRange anc,
                       const ComparatorSpec& spec);

/// Standalone comparator on its own layout: value register [0,n), result
/// qubit n, ancillas above. For exhaustive unit testing.
Circuit comparator(std::uint32_t n, const ComparatorSpec& spec);

/// A-operator for the expectile payoff max{(1+beta)X - beta x*, X}.
AOperator expectile_a_operator(const DiscretizedDistribution& dist,
                               const ExpectileParams& params, double gamma);

/// A-operator whose amplitude is sum_{i=k2..k1} p_i sin^2(g_hat(i)).
AOperator rvar_a_operator(const DiscretizedDistribution& dist, std::uint64_t k1,
                          std::uint64_t k2, double gamma);

/// Comparator-only operator: amplitude equals P(i < k) exactly. The inversion
/// metadata is the identity map.
AOperator cdf_a_operator(const DiscretizedDistribution& dist, std::uint64_t k);

/// Comparator-only operator with amplitude P(i >= k).
AOperator tail_mass_a_operator(const DiscretizedDistribution& dist, std::uint64_t k);

/// Window-mass operator: amplitude P(k2 <= i <= k1).
AOperator window_mass_a_operator(const DiscretizedDistribution& dist, std::uint64_t k1,
                                 std::uint64_t k2);

/// One-sided tail payoff: amplitude sum_{i>=k} p_i sin^2(g_hat(i)).
AOperator cvar_a_operator(const DiscretizedDistribution& dist, std::uint64_t k,
                          double gamma);

/// Grover operator Q = A S0 A^dagger S_chi for the given A-operator.
Circuit grover_operator(const AOperator& a_op);

} // namespace qrisk
