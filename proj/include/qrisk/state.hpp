// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qrisk/layout.hpp"

namespace qrisk {

using cplx = std::complex<double>;

/// Hard cap on the register width of a dense state vector. All experiments
/// fit well below this (n <= 7 distribution qubits plus ancillas).
inline constexpr std::uint32_t kMaxQubits = 24;

/// Dense state vector over 2^total_qubits basis states. Qubit q is bit q of
/// the basis index (little-endian).
struct QuantumState {
    RegisterLayout layout;
    std::vector<cplx> amplitudes;

    QuantumState() = default;
    explicit QuantumState(RegisterLayout lay);

    std::uint32_t num_qubits() const { return layout.total_qubits; }
    std::uint64_t dim() const { return std::uint64_t{1} << layout.total_qubits; }

    double norm_sq() const;

    /// All-zeros computational basis state.
    static QuantumState zero(RegisterLayout lay) { return QuantumState(std::move(lay)); }
};

} // namespace qrisk
