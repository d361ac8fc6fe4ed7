// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qrisk/circuit.hpp"
#include "qrisk/state.hpp"

namespace qrisk {

/// Kernel selection. Parallel uses the OpenMP kernels with control-aware
/// index enumeration; Serial is the plain reference implementation that
/// scans the full amplitude vector gate by gate.
enum class Exec { Serial, Parallel };

/// Identifier of the shot-sampling PRNG, recorded in outputs.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

void apply_inplace(QuantumState& state, const Circuit& circuit, Exec exec = Exec::Parallel);
void apply_inplace(QuantumState& state, const Gate& g, Exec exec = Exec::Parallel);

/// Unitary image of `state` under `circuit`. Layouts must match.
QuantumState apply(const QuantumState& state, const Circuit& circuit,
                   Exec exec = Exec::Parallel);

/// Marginal probability of measuring `outcome` on one qubit.
double probability_of(const QuantumState& state, std::uint32_t qubit, int outcome);

/// Marginal distribution over the listed qubits; entry k corresponds to the
/// outcome whose j-th bit is the j-th listed qubit.
std::vector<double> marginal_probabilities(const QuantumState& state,
                                           std::span<const std::uint32_t> qubits);

/// Seeded shot sampling of the listed qubits. Keys are bitstrings, most
/// significant listed qubit first. Deterministic for a fixed seed.
std::map<std::string, std::uint64_t> sample(const QuantumState& state,
                                            std::span<const std::uint32_t> qubits,
                                            std::uint64_t shots, std::uint64_t seed);

/// Same sampling, outcomes as integers (bit j = j-th listed qubit).
std::vector<std::uint64_t> sample_counts(const QuantumState& state,
                                         std::span<const std::uint32_t> qubits,
                                         std::uint64_t shots, std::uint64_t seed);

} // namespace qrisk
