// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>

#include "qrisk/aops.hpp"

namespace qrisk {

struct QAEResult {
    double estimate = 0.0; ///< amplitude estimate in [0, 1]
    std::optional<std::pair<double, double>> confidence_interval;
    std::uint64_t grover_calls = 0; ///< total applications of Q
    std::uint64_t shots_used = 0;
    std::map<std::uint64_t, std::uint64_t> raw_histogram; ///< canonical outcomes
};

namespace qae {

struct Canonical {
    std::uint32_t m = 3; ///< estimation ancilla count
    std::uint64_t shots = 1024;
};

struct Mlqae {
    std::uint32_t m = 3; ///< schedule depth: powers {0, 2, 4, ..., 2^(m-1)}
    std::uint64_t shots = 1024; ///< shots per power
};

struct Iqae {
    double epsilon = 0.05;     ///< target half-width for the amplitude
    double alpha_conf = 0.05;  ///< failure probability
    std::uint64_t shots = 1024; ///< shots per round
    std::uint64_t max_total_shots = 1'000'000;
};

/// Reads the amplitude from the state vector directly, no estimation loop.
struct ExactAmplitude {};

} // namespace qae

struct QAEConfig {
    std::variant<qae::Canonical, qae::Mlqae, qae::Iqae, qae::ExactAmplitude> variant =
        qae::Iqae{};
    enum class Mode { ExactProbability, Sampled } mode = Mode::ExactProbability;
    std::uint64_t seed = 0;

    std::string variant_name() const;
};

QAEResult canonical_qae(const AOperator& a_op, std::uint32_t m, std::uint64_t shots,
                        QAEConfig::Mode mode, std::uint64_t seed = 0);

/// Exact measurement distribution over the 2^m phase-estimation outcomes.
std::vector<double> canonical_outcome_distribution(const AOperator& a_op,
                                                   std::uint32_t m);

/// Closed-form canonical outcome law for a known amplitude, Fejer-kernel
/// mixture over the two Grover eigenphases. For cross-checking.
std::vector<double> canonical_outcome_law(double amplitude, std::uint32_t m);

QAEResult mlqae(const AOperator& a_op, std::uint32_t m, std::uint64_t shots,
                QAEConfig::Mode mode, std::uint64_t seed = 0);

QAEResult iqae(const AOperator& a_op, const qae::Iqae& cfg, QAEConfig::Mode mode,
               std::uint64_t seed = 0);

/// Exact objective-qubit probability of A|0> (the amplitude itself).
double exact_amplitude(const AOperator& a_op);

/// Dispatch on QAEConfig.
QAEResult estimate_amplitude(const AOperator& a_op, const QAEConfig& cfg);

} // namespace qrisk
