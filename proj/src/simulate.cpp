// SPDX-License-Identifier: Apache-2.0
#include "qrisk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qrisk/errors.hpp"

#ifdef __BMI2__
#include <immintrin.h>
#endif

namespace qrisk {

namespace {

/// Control condition as a (mask, value) pair: fires when
/// (index & mask) == value.
struct Ctl {
    std::uint64_t mask = 0;
    std::uint64_t val = 0;

    void add(const QubitControl& c) {
        const std::uint64_t bit = std::uint64_t{1} << c.qubit;
        mask |= bit;
        if (c.on_one) val |= bit;
    }
    void add(std::span<const QubitControl> cs) {
        for (const auto& c : cs) add(c);
    }
    bool holds(std::uint64_t idx) const { return (idx & mask) == val; }
};

/// Deposits the low bits of `j` into the set bit positions of `mask`.
inline std::uint64_t scatter_bits(std::uint64_t j, std::uint64_t mask) {
#ifdef __BMI2__
    return _pdep_u64(j, mask);
#else
    std::uint64_t res = 0;
    while (mask != 0) {
        const std::uint64_t low = mask & (~mask + 1);
        if (j & 1) res |= low;
        j >>= 1;
        mask &= mask - 1;
    }
    return res;
#endif
}

inline int popcount64(std::uint64_t x) { return static_cast<int>(std::popcount(x)); }

// --------------------------------------------------------------------------
// Reference kernels: plain scans over the full amplitude vector. Kept simple
// on purpose; the parallel kernels below are checked against these.
// --------------------------------------------------------------------------
namespace ref {

void two_by_two(QuantumState& s, std::uint32_t t, const double m[4], Ctl ctl) {
    const std::uint64_t bit = std::uint64_t{1} << t;
    const std::uint64_t dim = s.dim();
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        if ((idx & bit) != 0 || !ctl.holds(idx)) continue;
        const cplx a0 = s.amplitudes[idx];
        const cplx a1 = s.amplitudes[idx | bit];
        s.amplitudes[idx] = m[0] * a0 + m[1] * a1;
        s.amplitudes[idx | bit] = m[2] * a0 + m[3] * a1;
    }
}

void phase(QuantumState& s, Ctl ctl, double angle) {
    const cplx w = std::polar(1.0, angle);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t idx = 0; idx < dim; ++idx)
        if (ctl.holds(idx)) s.amplitudes[idx] *= w;
}

void flip_sign(QuantumState& s, Ctl ctl) {
    const std::uint64_t dim = s.dim();
    for (std::uint64_t idx = 0; idx < dim; ++idx)
        if (ctl.holds(idx)) s.amplitudes[idx] = -s.amplitudes[idx];
}

void swap_qubits(QuantumState& s, std::uint32_t q1, std::uint32_t q2, Ctl ctl) {
    const std::uint64_t b1 = std::uint64_t{1} << q1;
    const std::uint64_t b2 = std::uint64_t{1} << q2;
    const std::uint64_t dim = s.dim();
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        if ((idx & b1) == 0 || (idx & b2) != 0 || !ctl.holds(idx)) continue;
        std::swap(s.amplitudes[idx], s.amplitudes[idx ^ b1 ^ b2]);
    }
}

} // namespace ref

// --------------------------------------------------------------------------
// Parallel kernels: enumerate only the indices matching the control mask and
// split the enumeration across OpenMP threads.
// --------------------------------------------------------------------------
namespace par {

void two_by_two(QuantumState& s, std::uint32_t t, const double m[4], Ctl ctl) {
    const std::uint64_t bit = std::uint64_t{1} << t;
    const std::uint64_t all = s.dim() - 1;
    const std::uint64_t free = all & ~(ctl.mask | bit);
    const std::int64_t n = std::int64_t{1} << popcount64(free);
    const std::uint64_t base = ctl.val;
    cplx* amps = s.amplitudes.data();
    const double m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
#pragma omp parallel for schedule(static) if (n >= (1 << 12))
    for (std::int64_t j = 0; j < n; ++j) {
        const std::uint64_t idx = base | scatter_bits(static_cast<std::uint64_t>(j), free);
        const cplx a0 = amps[idx];
        const cplx a1 = amps[idx | bit];
        amps[idx] = m00 * a0 + m01 * a1;
        amps[idx | bit] = m10 * a0 + m11 * a1;
    }
}

void phase(QuantumState& s, Ctl ctl, double angle) {
    const cplx w = std::polar(1.0, angle);
    const std::uint64_t all = s.dim() - 1;
    const std::uint64_t free = all & ~ctl.mask;
    const std::int64_t n = std::int64_t{1} << popcount64(free);
    const std::uint64_t base = ctl.val;
    cplx* amps = s.amplitudes.data();
#pragma omp parallel for schedule(static) if (n >= (1 << 12))
    for (std::int64_t j = 0; j < n; ++j)
        amps[base | scatter_bits(static_cast<std::uint64_t>(j), free)] *= w;
}

void flip_sign(QuantumState& s, Ctl ctl) {
    const std::uint64_t all = s.dim() - 1;
    const std::uint64_t free = all & ~ctl.mask;
    const std::int64_t n = std::int64_t{1} << popcount64(free);
    const std::uint64_t base = ctl.val;
    cplx* amps = s.amplitudes.data();
#pragma omp parallel for schedule(static) if (n >= (1 << 12))
    for (std::int64_t j = 0; j < n; ++j) {
        const std::uint64_t idx = base | scatter_bits(static_cast<std::uint64_t>(j), free);
        amps[idx] = -amps[idx];
    }
}

void swap_qubits(QuantumState& s, std::uint32_t q1, std::uint32_t q2, Ctl ctl) {
    const std::uint64_t b1 = std::uint64_t{1} << q1;
    const std::uint64_t b2 = std::uint64_t{1} << q2;
    const std::uint64_t all = s.dim() - 1;
    const std::uint64_t free = all & ~(ctl.mask | b1 | b2);
    const std::int64_t n = std::int64_t{1} << popcount64(free);
    const std::uint64_t base = ctl.val | b1;
    cplx* amps = s.amplitudes.data();
#pragma omp parallel for schedule(static) if (n >= (1 << 12))
    for (std::int64_t j = 0; j < n; ++j) {
        const std::uint64_t idx = base | scatter_bits(static_cast<std::uint64_t>(j), free);
        std::swap(amps[idx], amps[idx ^ b1 ^ b2]);
    }
}

} // namespace par

// --------------------------------------------------------------------------
// Gate dispatch shared by both kernel sets.
// --------------------------------------------------------------------------

struct Kernels {
    void (*two_by_two)(QuantumState&, std::uint32_t, const double[4], Ctl);
    void (*phase)(QuantumState&, Ctl, double);
    void (*flip_sign)(QuantumState&, Ctl);
    void (*swap_qubits)(QuantumState&, std::uint32_t, std::uint32_t, Ctl);
};

constexpr Kernels kRef{ref::two_by_two, ref::phase, ref::flip_sign, ref::swap_qubits};
constexpr Kernels kPar{par::two_by_two, par::phase, par::flip_sign, par::swap_qubits};

const Kernels& kernels_for(Exec exec) { return exec == Exec::Serial ? kRef : kPar; }

void check_ctl_disjoint(const Ctl& ctl, std::uint32_t target) {
    if (ctl.mask & (std::uint64_t{1} << target))
        throw ConfigError("gate target coincides with one of its controls");
}

void apply_fourier(QuantumState& s, const gate::Fourier& f, Ctl ctl, const Kernels& k) {
    constexpr double pi = std::numbers::pi;
    static const double h[4] = {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0,
                                std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};
    const std::uint32_t m = f.count;
    auto q = [&](std::uint32_t j) { return f.first + j; };
    auto cphase = [&](std::uint32_t c, std::uint32_t t, double angle) {
        Ctl cc = ctl;
        cc.add({c, true});
        cc.add({t, true});
        k.phase(s, cc, angle);
    };
    if (!f.inverse) {
        for (std::uint32_t j = m; j-- > 0;) {
            k.two_by_two(s, q(j), h, ctl);
            for (std::uint32_t kk = j; kk-- > 0;)
                cphase(q(kk), q(j), pi / static_cast<double>(1u << (j - kk)));
        }
        for (std::uint32_t i = 0; i < m / 2; ++i)
            k.swap_qubits(s, q(i), q(m - 1 - i), ctl);
    } else {
        for (std::uint32_t i = 0; i < m / 2; ++i)
            k.swap_qubits(s, q(i), q(m - 1 - i), ctl);
        for (std::uint32_t j = 0; j < m; ++j) {
            for (std::uint32_t kk = 0; kk < j; ++kk)
                cphase(q(kk), q(j), -pi / static_cast<double>(1u << (j - kk)));
            k.two_by_two(s, q(j), h, ctl);
        }
    }
}

void apply_gate(QuantumState& s, const Gate& g, Ctl ctl, const Kernels& k);

void apply_gates(QuantumState& s, const std::vector<Gate>& gs, Ctl ctl,
                 const Kernels& k) {
    for (const auto& g : gs) apply_gate(s, g, ctl, k);
}

void apply_gate(QuantumState& s, const Gate& g, Ctl ctl, const Kernels& k) {
    std::visit(
        [&](const auto& gg) {
            using T = std::decay_t<decltype(gg)>;
            if constexpr (std::is_same_v<T, gate::Hadamard>) {
                static const double h[4] = {std::numbers::sqrt2 / 2.0,
                                            std::numbers::sqrt2 / 2.0,
                                            std::numbers::sqrt2 / 2.0,
                                            -std::numbers::sqrt2 / 2.0};
                check_ctl_disjoint(ctl, gg.target);
                k.two_by_two(s, gg.target, h, ctl);
            } else if constexpr (std::is_same_v<T, gate::PauliX>) {
                static const double x[4] = {0.0, 1.0, 1.0, 0.0};
                check_ctl_disjoint(ctl, gg.target);
                k.two_by_two(s, gg.target, x, ctl);
            } else if constexpr (std::is_same_v<T, gate::RotationY>) {
                const double c = std::cos(gg.angle / 2.0), sn = std::sin(gg.angle / 2.0);
                const double m[4] = {c, -sn, sn, c};
                check_ctl_disjoint(ctl, gg.target);
                k.two_by_two(s, gg.target, m, ctl);
            } else if constexpr (std::is_same_v<T, gate::ControlledRotationY>) {
                ctl.add(gg.controls);
                const double c = std::cos(gg.angle / 2.0), sn = std::sin(gg.angle / 2.0);
                const double m[4] = {c, -sn, sn, c};
                check_ctl_disjoint(ctl, gg.target);
                k.two_by_two(s, gg.target, m, ctl);
            } else if constexpr (std::is_same_v<T, gate::ControlledNot>) {
                static const double x[4] = {0.0, 1.0, 1.0, 0.0};
                ctl.add({gg.control, true});
                check_ctl_disjoint(ctl, gg.target);
                k.two_by_two(s, gg.target, x, ctl);
            } else if constexpr (std::is_same_v<T, gate::MultiControlledX>) {
                static const double x[4] = {0.0, 1.0, 1.0, 0.0};
                ctl.add(gg.controls);
                check_ctl_disjoint(ctl, gg.target);
                k.two_by_two(s, gg.target, x, ctl);
            } else if constexpr (std::is_same_v<T, gate::PhaseFlip>) {
                ctl.add(gg.controls);
                k.flip_sign(s, ctl);
            } else if constexpr (std::is_same_v<T, gate::Fourier>) {
                apply_fourier(s, gg, ctl, k);
            } else if constexpr (std::is_same_v<T, gate::Controlled>) {
                ctl.add(gg.control);
                apply_gates(s, gg.body->gates, ctl, k);
            }
        },
        g);
}

} // namespace

void apply_inplace(QuantumState& state, const Gate& g, Exec exec) {
    apply_gate(state, g, Ctl{}, kernels_for(exec));
}

void apply_inplace(QuantumState& state, const Circuit& circuit, Exec exec) {
    if (circuit.layout != state.layout)
        throw ConfigError("circuit layout does not match state layout");
    apply_gates(state, circuit.gates, Ctl{}, kernels_for(exec));
}

QuantumState apply(const QuantumState& state, const Circuit& circuit, Exec exec) {
    QuantumState out = state;
    apply_inplace(out, circuit, exec);
    return out;
}

double probability_of(const QuantumState& state, std::uint32_t qubit, int outcome) {
    if (qubit >= state.num_qubits())
        throw ConfigError("probability_of: qubit index out of range");
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double p1 = 0.0;
    const std::uint64_t dim = state.dim();
    for (std::uint64_t idx = 0; idx < dim; ++idx)
        if (idx & bit) p1 += std::norm(state.amplitudes[idx]);
    return outcome ? p1 : 1.0 - p1;
}

std::vector<double> marginal_probabilities(const QuantumState& state,
                                           std::span<const std::uint32_t> qubits) {
    for (auto q : qubits)
        if (q >= state.num_qubits())
            throw ConfigError("marginal_probabilities: qubit index out of range");
    std::vector<double> probs(std::uint64_t{1} << qubits.size(), 0.0);
    const std::uint64_t dim = state.dim();
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        std::uint64_t out = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j)
            out |= ((idx >> qubits[j]) & 1u) << j;
        probs[out] += std::norm(state.amplitudes[idx]);
    }
    return probs;
}

std::vector<std::uint64_t> sample_counts(const QuantumState& state,
                                         std::span<const std::uint32_t> qubits,
                                         std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw ConfigError("sample: shots must be >= 1");
    const std::vector<double> probs = marginal_probabilities(state, qubits);
    std::vector<double> cum(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cum[i] = acc;
    }
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        const std::size_t k =
            it == cum.end() ? probs.size() - 1
                            : static_cast<std::size_t>(it - cum.begin());
        ++counts[k];
    }
    return counts;
}

std::map<std::string, std::uint64_t> sample(const QuantumState& state,
                                            std::span<const std::uint32_t> qubits,
                                            std::uint64_t shots, std::uint64_t seed) {
    const auto counts = sample_counts(state, qubits, shots, seed);
    std::map<std::string, std::uint64_t> hist;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) continue;
        std::string key(qubits.size(), '0');
        for (std::size_t j = 0; j < qubits.size(); ++j)
            if ((k >> j) & 1u) key[qubits.size() - 1 - j] = '1';
        hist[key] = counts[k];
    }
    return hist;
}

} // namespace qrisk
