// SPDX-License-Identifier: Apache-2.0
#include "qrisk/distributions.hpp"

#include <cmath>
#include <numbers>

#include "qrisk/errors.hpp"

namespace qrisk {

double ContinuousSpec::density(double x) const {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
    switch (family) {
    case Family::Normal: {
        const double z = (x - param1) / param2;
        return inv_sqrt_2pi / param2 * std::exp(-0.5 * z * z);
    }
    case Family::Lognormal: {
        if (x <= 0.0) return 0.0;
        const double z = (std::log(x) - param1) / param2;
        return inv_sqrt_2pi / (param2 * x) * std::exp(-0.5 * z * z);
    }
    case Family::Gamma: {
        if (x < 0.0) return 0.0;
        const double p = param1, q = param2;
        if (x == 0.0) return p < 1.0 ? 0.0 : (p == 1.0 ? q : 0.0);
        return std::exp(p * std::log(q) + (p - 1.0) * std::log(x) - q * x -
                        std::lgamma(p));
    }
    }
    return 0.0;
}

std::string ContinuousSpec::name() const {
    auto num = [](double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };
    switch (family) {
    case Family::Normal: return "normal(" + num(param1) + "," + num(param2) + ")";
    case Family::Lognormal: return "lognormal(" + num(param1) + "," + num(param2) + ")";
    case Family::Gamma: return "gamma(" + num(param1) + "," + num(param2) + ")";
    }
    return "?";
}

double DiscretizedDistribution::mean() const {
    double m = 0.0;
    for (std::uint64_t i = 0; i < size(); ++i) m += probs[i] * grid(i);
    return m;
}

DiscretizedDistribution DiscretizedDistribution::negated() const {
    DiscretizedDistribution out;
    out.n_qubits = n_qubits;
    out.b = b;
    out.a = -grid_max();
    out.probs.assign(probs.rbegin(), probs.rend());
    return out;
}

DiscretizedDistribution discretize(const ContinuousSpec& spec, double lo, double hi,
                                   std::uint32_t n_qubits) {
    if (!(lo < hi)) throw ConfigError("discretize: need lo < hi");
    if (n_qubits < 1 || n_qubits > 12)
        throw ConfigError("discretize: n_qubits must be in [1, 12]");
    if ((spec.family == ContinuousSpec::Family::Normal ||
         spec.family == ContinuousSpec::Family::Lognormal) &&
        !(spec.param2 > 0.0))
        throw ConfigError("discretize: sigma must be > 0");
    if (spec.family == ContinuousSpec::Family::Gamma &&
        (!(spec.param1 > 0.0) || !(spec.param2 > 0.0)))
        throw ConfigError("discretize: gamma parameters must be > 0");

    const std::uint64_t n = std::uint64_t{1} << n_qubits;
    DiscretizedDistribution dist;
    dist.n_qubits = n_qubits;
    dist.a = lo;
    dist.b = (hi - lo) / static_cast<double>(n - 1);
    dist.probs.resize(n);
    double total = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double d = spec.density(dist.grid(i));
        dist.probs[i] = d;
        total += d;
    }
    if (!(total > 0.0))
        throw DegenerateInputError("discretize: density vanishes on the whole interval");
    for (auto& p : dist.probs) p /= total;
    return dist;
}

DiscretizedDistribution from_pmf(std::vector<double> probs, double a, double b) {
    if (probs.empty() || (probs.size() & (probs.size() - 1)) != 0)
        throw ConfigError("from_pmf: pmf length must be a power of two");
    if (!(b > 0.0)) throw ConfigError("from_pmf: grid step must be > 0");
    double total = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw ConfigError("from_pmf: negative probability");
        total += p;
    }
    if (!(total > 0.0)) throw DegenerateInputError("from_pmf: pmf sums to zero");
    DiscretizedDistribution dist;
    dist.n_qubits = static_cast<std::uint32_t>(std::countr_zero(probs.size()));
    dist.a = a;
    dist.b = b;
    dist.probs = std::move(probs);
    for (auto& p : dist.probs) p /= total;
    return dist;
}

void append_loader(Circuit& c, const DiscretizedDistribution& dist, QubitRange reg) {
    const std::uint32_t n = dist.n_qubits;
    if (reg.count != n)
        throw ConfigError("loader: register width does not match the pmf");
    // Subtree masses: level d has 2^d nodes; node (d, prefix) covers indices
    // whose d most significant bits equal prefix.
    const std::uint64_t size = dist.size();
    std::vector<std::vector<double>> mass(n + 1);
    mass[n] = dist.probs;
    for (std::uint32_t d = n; d-- > 0;) {
        mass[d].resize(std::uint64_t{1} << d);
        for (std::uint64_t j = 0; j < mass[d].size(); ++j)
            mass[d][j] = mass[d + 1][2 * j] + mass[d + 1][2 * j + 1];
    }
    (void)size;
    for (std::uint32_t d = 0; d < n; ++d) {
        const std::uint32_t target = reg.first + (n - 1 - d); // MSB first
        for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << d); ++prefix) {
            const double node = mass[d][prefix];
            if (node <= 0.0) continue;
            const double left = mass[d + 1][2 * prefix];
            const double angle = 2.0 * std::acos(std::sqrt(std::clamp(left / node, 0.0, 1.0)));
            if (angle == 0.0) continue;
            if (d == 0) {
                c.append(gate::RotationY{angle, target});
            } else {
                std::vector<QubitControl> ctls;
                ctls.reserve(d);
                for (std::uint32_t bq = 0; bq < d; ++bq) {
                    const bool bit = (prefix >> (d - 1 - bq)) & 1u;
                    ctls.push_back({reg.first + (n - 1 - bq), bit});
                }
                c.append(gate::ControlledRotationY{std::move(ctls), angle, target});
            }
        }
    }
}

Circuit loader_circuit(const DiscretizedDistribution& dist, const RegisterLayout& layout) {
    Circuit c;
    c.layout = layout;
    append_loader(c, dist, layout.range(Role::Distribution));
    return c;
}

std::optional<Preset> find_preset(const std::string& name) {
    using F = ContinuousSpec::Family;
    if (name == "normal-3-1")
        return Preset{{F::Normal, 3.0, 1.0}, 0.0, 10.0, 0.0, 6.0};
    if (name == "lognormal-0-0.5")
        // Table-style LN(mu, sigma^2) label read with sigma = 1/2 as the
        // standard deviation of the underlying normal.
        return Preset{{F::Lognormal, 0.0, 0.5}, 0.0, 10.0, 0.0, 3.0};
    if (name == "gamma-1-1")
        return Preset{{F::Gamma, 1.0, 1.0}, 0.0, 10.0, 0.0, 3.0};
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    return {"normal-3-1", "lognormal-0-0.5", "gamma-1-1"};
}

} // namespace qrisk
