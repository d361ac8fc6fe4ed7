// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qrisk/errors.hpp"

namespace qrisk {

/// Named roles of the qubit sub-registers used by the circuit builders.
enum class Role {
    Distribution,
    ComparatorResult1,
    ComparatorResult2,
    ComparatorAncilla1,
    ComparatorAncilla2,
    Objective,
    EstimationAncilla,
};

std::string role_name(Role r);

/// Contiguous range of qubit indices [first, first + count).
struct QubitRange {
    std::uint32_t first = 0;
    std::uint32_t count = 0;

    bool contains(std::uint32_t q) const { return q >= first && q < first + count; }
    bool overlaps(const QubitRange& o) const {
        if (count == 0 || o.count == 0) return false;
        return first < o.first + o.count && o.first < first + count;
    }

    bool operator==(const QubitRange&) const = default;
};

/// Assignment of roles to disjoint contiguous ranges covering the register.
struct RegisterLayout {
    std::uint32_t total_qubits = 0;
    std::map<Role, QubitRange> roles;

    bool has(Role r) const {
        auto it = roles.find(r);
        return it != roles.end() && it->second.count > 0;
    }

    QubitRange range(Role r) const {
        auto it = roles.find(r);
        if (it == roles.end())
            throw ConfigError("layout has no register for role " + role_name(r));
        return it->second;
    }

    /// Single qubit of a role expected to have exactly one.
    std::uint32_t qubit(Role r) const {
        QubitRange rr = range(r);
        if (rr.count != 1)
            throw ConfigError("role " + role_name(r) + " is not a single qubit");
        return rr.first;
    }

    /// Checks disjointness and exact coverage of [0, total_qubits).
    void validate() const;

    bool operator==(const RegisterLayout& o) const = default;
};

} // namespace qrisk
