// SPDX-License-Identifier: Apache-2.0
#include "qrisk/layout.hpp"

#include <algorithm>
#include <vector>

namespace qrisk {

std::string role_name(Role r) {
    switch (r) {
    case Role::Distribution: return "distribution";
    case Role::ComparatorResult1: return "comparator-result-1";
    case Role::ComparatorResult2: return "comparator-result-2";
    case Role::ComparatorAncilla1: return "comparator-ancilla-1";
    case Role::ComparatorAncilla2: return "comparator-ancilla-2";
    case Role::Objective: return "objective";
    case Role::EstimationAncilla: return "estimation-ancilla";
    }
    return "?";
}

void RegisterLayout::validate() const {
    std::vector<QubitRange> rs;
    std::uint64_t covered = 0;
    for (const auto& [role, r] : roles) {
        if (r.count == 0) continue;
        if (r.first + r.count > total_qubits)
            throw ConfigError("range for " + role_name(role) + " exceeds total_qubits");
        for (const auto& other : rs)
            if (r.overlaps(other))
                throw ConfigError("overlapping register ranges in layout");
        rs.push_back(r);
        covered += r.count;
    }
    if (covered != total_qubits)
        throw ConfigError("layout ranges do not cover the register");
    auto it = roles.find(Role::Distribution);
    if (it == roles.end() || it->second.count == 0)
        throw ConfigError("layout needs a non-empty distribution register");
}

} // namespace qrisk
