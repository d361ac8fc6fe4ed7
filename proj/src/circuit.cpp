// SPDX-License-Identifier: Apache-2.0
#include "qrisk/circuit.hpp"

#include <algorithm>

namespace qrisk {

namespace {

struct InvertVisitor {
    Gate operator()(const gate::Hadamard& g) const { return g; }
    Gate operator()(const gate::PauliX& g) const { return g; }
    Gate operator()(const gate::RotationY& g) const {
        return gate::RotationY{-g.angle, g.target};
    }
    Gate operator()(const gate::ControlledRotationY& g) const {
        return gate::ControlledRotationY{g.controls, -g.angle, g.target};
    }
    Gate operator()(const gate::ControlledNot& g) const { return g; }
    Gate operator()(const gate::MultiControlledX& g) const { return g; }
    Gate operator()(const gate::PhaseFlip& g) const { return g; }
    Gate operator()(const gate::Fourier& g) const {
        return gate::Fourier{g.first, g.count, !g.inverse};
    }
    Gate operator()(const gate::Controlled& g) const {
        auto body = std::make_shared<Circuit>(inverse(*g.body));
        return gate::Controlled{g.control, std::move(body)};
    }
};

void check_qubit(std::uint32_t q, std::uint32_t total) {
    if (q >= total) throw ConfigError("gate references qubit outside the layout");
}

struct ValidateVisitor {
    std::uint32_t total;
    void controls(const std::vector<QubitControl>& cs) const {
        for (const auto& c : cs) check_qubit(c.qubit, total);
    }
    void operator()(const gate::Hadamard& g) const { check_qubit(g.target, total); }
    void operator()(const gate::PauliX& g) const { check_qubit(g.target, total); }
    void operator()(const gate::RotationY& g) const { check_qubit(g.target, total); }
    void operator()(const gate::ControlledRotationY& g) const {
        controls(g.controls);
        check_qubit(g.target, total);
    }
    void operator()(const gate::ControlledNot& g) const {
        check_qubit(g.control, total);
        check_qubit(g.target, total);
    }
    void operator()(const gate::MultiControlledX& g) const {
        controls(g.controls);
        check_qubit(g.target, total);
    }
    void operator()(const gate::PhaseFlip& g) const { controls(g.controls); }
    void operator()(const gate::Fourier& g) const {
        if (g.count == 0 || g.first + g.count > total)
            throw ConfigError("Fourier range outside the layout");
    }
    void operator()(const gate::Controlled& g) const {
        check_qubit(g.control.qubit, total);
        for (const auto& sub : g.body->gates) std::visit(*this, sub);
    }
};

} // namespace

Gate inverse(const Gate& g) { return std::visit(InvertVisitor{}, g); }

Circuit inverse(const Circuit& c) {
    Circuit out;
    out.layout = c.layout;
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
        out.gates.push_back(inverse(*it));
    return out;
}

void validate(const Circuit& c) {
    ValidateVisitor v{c.layout.total_qubits};
    for (const auto& g : c.gates) std::visit(v, g);
}

Circuit inverse_qft(std::uint32_t register_size) {
    if (register_size == 0) throw ConfigError("inverse_qft needs register_size >= 1");
    Circuit c;
    c.layout.total_qubits = register_size;
    c.layout.roles[Role::Distribution] = {0, register_size};
    c.append(gate::Fourier{0, register_size, /*inverse=*/true});
    return c;
}

} // namespace qrisk
