// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "qrisk/layout.hpp"

namespace qrisk {

/// Control condition on one qubit. `on_one == false` is a zero-polarity
/// control (fires when the qubit is |0>).
struct QubitControl {
    std::uint32_t qubit = 0;
    bool on_one = true;
};

struct Circuit;

namespace gate {

struct Hadamard {
    std::uint32_t target;
};

struct PauliX {
    std::uint32_t target;
};

struct RotationY {
    double angle;
    std::uint32_t target;
};

struct ControlledRotationY {
    std::vector<QubitControl> controls;
    double angle;
    std::uint32_t target;
};

struct ControlledNot {
    std::uint32_t control;
    std::uint32_t target;
};

struct MultiControlledX {
    std::vector<QubitControl> controls;
    std::uint32_t target;
};

/// Flips the sign of every basis state satisfying all controls.
/// With a single on-one control this is a Z gate; with all-zero controls
/// over the full register it is the reflection about |0...0>.
struct PhaseFlip {
    std::vector<QubitControl> controls;
};

/// Quantum Fourier transform on the value register [first, first+count),
/// qubit `first` holding the least significant bit. `inverse` selects QFT^-1.
struct Fourier {
    std::uint32_t first;
    std::uint32_t count;
    bool inverse;
};

/// A sub-circuit promoted to fire only when the control condition holds.
struct Controlled {
    QubitControl control;
    std::shared_ptr<const Circuit> body;
};

} // namespace gate

using Gate = std::variant<gate::Hadamard, gate::PauliX, gate::RotationY,
                          gate::ControlledRotationY, gate::ControlledNot,
                          gate::MultiControlledX, gate::PhaseFlip, gate::Fourier,
                          gate::Controlled>;

/// Ordered gate sequence over a fixed register layout. Gates apply
/// front-to-back.
struct Circuit {
    RegisterLayout layout;
    std::vector<Gate> gates;

    void append(Gate g) { gates.push_back(std::move(g)); }
    void append(const Circuit& other) {
        gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    }
};

/// Formal inverse: reversed order, each gate replaced by its adjoint.
Circuit inverse(const Circuit& c);
Gate inverse(const Gate& g);

/// Throws ConfigError if any referenced qubit lies outside the layout.
void validate(const Circuit& c);

/// Inverse-QFT fragment on its own `register_size`-qubit layout
/// (distribution role covering all qubits).
Circuit inverse_qft(std::uint32_t register_size);

} // namespace qrisk
