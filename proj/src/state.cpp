// SPDX-License-Identifier: Apache-2.0
#include "qrisk/state.hpp"

#include "qrisk/errors.hpp"

namespace qrisk {

QuantumState::QuantumState(RegisterLayout lay) : layout(std::move(lay)) {
    if (layout.total_qubits > kMaxQubits)
        throw ResourceError("qubit budget exceeded: " +
                            std::to_string(layout.total_qubits) + " > " +
                            std::to_string(kMaxQubits));
    amplitudes.assign(std::uint64_t{1} << layout.total_qubits, cplx{0.0, 0.0});
    amplitudes[0] = cplx{1.0, 0.0};
}

double QuantumState::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

} // namespace qrisk
