// SPDX-License-Identifier: Apache-2.0
#include "qrisk/aops.hpp"

#include <cmath>
#include <numbers>

#include "qrisk/errors.hpp"

namespace qrisk {

namespace {

constexpr double kPi = std::numbers::pi;

/// Comparator forward pass: carry chain of i + (2^n - k) with the final
/// carry written to `result`. Gates are all self-inverse, so uncomputation
/// replays the ancilla part in reverse.
void append_geq(Circuit& c, QubitRange reg, std::uint32_t result, QubitRange anc,
                std::uint64_t k) {
    const std::uint32_t n = reg.count;
    const std::uint64_t total = std::uint64_t{1} << n;
    if (k == 0) { // i >= 0 always
        c.append(gate::PauliX{result});
        return;
    }
    if (k == total) return; // i >= 2^n never
    if (n == 1) {           // k == 1: carry is just i_0
        c.append(gate::ControlledNot{reg.first, result});
        return;
    }
    if (anc.count < n - 1)
        throw ConfigError("comparator needs n-1 ancilla qubits");
    const std::uint64_t twos = total - k;
    auto bit_i = [&](std::uint32_t j) { return reg.first + j; };
    auto bit_a = [&](std::uint32_t j) { return anc.first + j; };

    std::vector<Gate> fwd; // ancilla-targeting steps, to be uncomputed
    if (twos & 1u) fwd.push_back(gate::ControlledNot{bit_i(0), bit_a(0)});
    for (std::uint32_t j = 1; j + 1 < n; ++j) {
        if ((twos >> j) & 1u) {
            // carry_{j+1} = i_j OR carry_j
            fwd.push_back(gate::MultiControlledX{
                {{bit_i(j), false}, {bit_a(j - 1), false}}, bit_a(j)});
            fwd.push_back(gate::PauliX{bit_a(j)});
        } else {
            // carry_{j+1} = i_j AND carry_j
            fwd.push_back(gate::MultiControlledX{
                {{bit_i(j), true}, {bit_a(j - 1), true}}, bit_a(j)});
        }
    }
    for (const auto& g : fwd) c.append(g);
    // final carry onto the result qubit
    const std::uint32_t j = n - 1;
    if ((twos >> j) & 1u) {
        c.append(gate::MultiControlledX{{{bit_i(j), false}, {bit_a(j - 1), false}},
                                        result});
        c.append(gate::PauliX{result});
    } else {
        c.append(gate::MultiControlledX{{{bit_i(j), true}, {bit_a(j - 1), true}},
                                        result});
    }
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) c.append(*it);
}

/// Rotation ladder realizing Ry(2 g(i)) on `target` for the affine function
/// g(i) = offset + slope * i of the value held in `reg`, under extra controls.
void append_affine_rotation(Circuit& c, QubitRange reg, std::uint32_t target,
                            const std::vector<QubitControl>& extra, double offset,
                            double slope) {
    if (offset != 0.0) {
        if (extra.empty())
            c.append(gate::RotationY{2.0 * offset, target});
        else
            c.append(gate::ControlledRotationY{extra, 2.0 * offset, target});
    }
    if (slope == 0.0) return;
    for (std::uint32_t q = 0; q < reg.count; ++q) {
        std::vector<QubitControl> ctls = extra;
        ctls.push_back({reg.first + q, true});
        c.append(gate::ControlledRotationY{
            std::move(ctls), 2.0 * slope * static_cast<double>(std::uint64_t{1} << q),
            target});
    }
}

RegisterLayout payoff_layout(std::uint32_t n) {
    // distribution | comparator result | comparator ancillas | objective
    RegisterLayout lay;
    lay.roles[Role::Distribution] = {0, n};
    lay.roles[Role::ComparatorResult1] = {n, 1};
    lay.roles[Role::ComparatorAncilla1] = {n + 1, n - 1};
    lay.roles[Role::Objective] = {2 * n, 1};
    lay.total_qubits = 2 * n + 1;
    return lay;
}

RegisterLayout window_layout(std::uint32_t n) {
    RegisterLayout lay;
    lay.roles[Role::Distribution] = {0, n};
    lay.roles[Role::ComparatorResult1] = {n, 1};
    lay.roles[Role::ComparatorAncilla1] = {n + 1, n - 1};
    lay.roles[Role::ComparatorResult2] = {2 * n, 1};
    lay.roles[Role::ComparatorAncilla2] = {2 * n + 1, n - 1};
    lay.roles[Role::Objective] = {3 * n, 1};
    lay.total_qubits = 3 * n + 1;
    return lay;
}

RegisterLayout cdf_layout(std::uint32_t n) {
    RegisterLayout lay;
    lay.roles[Role::Distribution] = {0, n};
    lay.roles[Role::ComparatorAncilla1] = {n, n - 1};
    lay.roles[Role::Objective] = {2 * n - 1, 1};
    lay.total_qubits = 2 * n;
    return lay;
}

void check_threshold(const DiscretizedDistribution& dist, std::uint64_t k,
                     bool inclusive_top) {
    const std::uint64_t top = dist.size() - (inclusive_top ? 0 : 1);
    if (k > top) throw ConfigError("comparator threshold out of range");
}

} // namespace

void append_comparator(Circuit& c, QubitRange reg, std::uint32_t result, QubitRange anc,
                       const ComparatorSpec& spec) {
    const std::uint64_t total = std::uint64_t{1} << reg.count;
    if (spec.threshold > total) throw ConfigError("comparator threshold out of range");
    if (spec.direction == ComparatorSpec::Direction::Geq) {
        append_geq(c, reg, result, anc, spec.threshold);
    } else {
        append_geq(c, reg, result, anc, spec.threshold);
        c.append(gate::PauliX{result});
    }
}

Circuit comparator(std::uint32_t n, const ComparatorSpec& spec) {
    if (n == 0) throw ConfigError("comparator: n must be >= 1");
    RegisterLayout lay;
    lay.roles[Role::Distribution] = {0, n};
    lay.roles[Role::ComparatorResult1] = {n, 1};
    lay.roles[Role::ComparatorAncilla1] = {n + 1, n - 1};
    lay.total_qubits = 2 * n;
    Circuit c;
    c.layout = lay;
    append_comparator(c, {0, n}, n, {n + 1, n - 1}, spec);
    return c;
}

ExpectileParams ExpectileParams::at(double alpha, const DiscretizedDistribution& dist,
                                    std::uint64_t i_star) {
    if (!(alpha >= 0.5 && alpha < 1.0))
        throw ConfigError("expectile A-operator needs alpha in [1/2, 1)");
    if (i_star >= dist.size()) throw ConfigError("i_star outside the grid");
    ExpectileParams p;
    p.alpha = alpha;
    p.beta_e = (2.0 * alpha - 1.0) / (1.0 - alpha);
    p.i_star = i_star;
    p.x_star = dist.grid(i_star);
    return p;
}

double AOperator::invert(double amplitude) const {
    return ((amplitude - 0.5) / (2.0 * gamma) + 0.5) * (f_max - f_min) + f_min;
}

AOperator expectile_a_operator(const DiscretizedDistribution& dist,
                               const ExpectileParams& params, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw ConfigError("expectile A-operator needs gamma in (0, 1]");
    const std::uint32_t n = dist.n_qubits;
    const double beta = params.beta_e;
    const double span = (1.0 + beta) * dist.b * static_cast<double>(dist.size() - 1) -
                        beta * dist.b * static_cast<double>(params.i_star);
    if (!(span > 0.0))
        throw DegenerateInputError("expectile payoff has zero range");

    const RegisterLayout lay = payoff_layout(n);
    const std::uint32_t cmp_result = n;
    const std::uint32_t objective = 2 * n;

    Circuit c;
    c.layout = lay;
    append_loader(c, dist, {0, n});
    append_comparator(c, {0, n}, cmp_result, {n + 1, n - 1},
                      {params.i_star, ComparatorSpec::Direction::Geq});
    // g0(i) = 2 gamma (b/span) i - gamma + pi/4, applied for every i
    append_affine_rotation(c, {0, n}, objective, {}, kPi / 4.0 - gamma,
                           2.0 * gamma * dist.b / span);
    // g1(i) = 2 gamma (beta b / span)(i - i*), applied for i >= i*
    if (beta != 0.0) {
        const double slope1 = 2.0 * gamma * beta * dist.b / span;
        append_affine_rotation(c, {0, n}, objective, {{cmp_result, true}},
                               -slope1 * static_cast<double>(params.i_star), slope1);
    }

    AOperator a;
    a.circuit = std::move(c);
    a.objective_qubit = objective;
    a.gamma = gamma;
    a.f_min = dist.a;
    a.f_max = dist.a + span;
    a.window_mass_required = false;
    return a;
}

AOperator rvar_a_operator(const DiscretizedDistribution& dist, std::uint64_t k1,
                          std::uint64_t k2, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw ConfigError("rvar A-operator needs gamma in (0, 1]");
    check_threshold(dist, k1, false);
    if (k2 > k1) throw ConfigError("rvar A-operator needs k2 <= k1");
    const std::uint32_t n = dist.n_qubits;
    const RegisterLayout lay = window_layout(n);
    const std::uint32_t t1 = n, t2 = 2 * n, objective = 3 * n;

    Circuit c;
    c.layout = lay;
    append_loader(c, dist, {0, n});
    append_comparator(c, {0, n}, t1, {n + 1, n - 1},
                      {k2, ComparatorSpec::Direction::Geq});
    append_comparator(c, {0, n}, t2, {2 * n + 1, n - 1},
                      {k1 + 1, ComparatorSpec::Direction::Lt});
    // g_hat(i) = gamma (2 i/(2^n - 1) - 1) + pi/4, fired when k2 <= i <= k1
    const double denom = static_cast<double>(dist.size() - 1);
    append_affine_rotation(c, {0, n}, objective, {{t1, true}, {t2, true}},
                           kPi / 4.0 - gamma,
                           denom > 0.0 ? 2.0 * gamma / denom : 0.0);

    AOperator a;
    a.circuit = std::move(c);
    a.objective_qubit = objective;
    a.gamma = gamma;
    a.f_min = dist.grid_min();
    a.f_max = dist.grid_max();
    a.window_mass_required = true;
    return a;
}

AOperator cdf_a_operator(const DiscretizedDistribution& dist, std::uint64_t k) {
    check_threshold(dist, k, true);
    const std::uint32_t n = dist.n_qubits;
    const RegisterLayout lay = cdf_layout(n);
    const std::uint32_t objective = 2 * n - 1;

    Circuit c;
    c.layout = lay;
    append_loader(c, dist, {0, n});
    append_comparator(c, {0, n}, objective, {n, n - 1},
                      {k, ComparatorSpec::Direction::Lt});

    AOperator a;
    a.circuit = std::move(c);
    a.objective_qubit = objective;
    // Identity inversion: the amplitude is the estimated quantity.
    a.gamma = 0.5;
    a.f_min = 0.0;
    a.f_max = 1.0;
    a.window_mass_required = false;
    return a;
}

AOperator tail_mass_a_operator(const DiscretizedDistribution& dist, std::uint64_t k) {
    check_threshold(dist, k, true);
    const std::uint32_t n = dist.n_qubits;
    const RegisterLayout lay = cdf_layout(n);
    const std::uint32_t objective = 2 * n - 1;

    Circuit c;
    c.layout = lay;
    append_loader(c, dist, {0, n});
    append_comparator(c, {0, n}, objective, {n, n - 1},
                      {k, ComparatorSpec::Direction::Geq});

    AOperator a;
    a.circuit = std::move(c);
    a.objective_qubit = objective;
    a.gamma = 0.5;
    a.f_min = 0.0;
    a.f_max = 1.0;
    a.window_mass_required = false;
    return a;
}

AOperator window_mass_a_operator(const DiscretizedDistribution& dist, std::uint64_t k1,
                                 std::uint64_t k2) {
    check_threshold(dist, k1, false);
    if (k2 > k1) throw ConfigError("window mass operator needs k2 <= k1");
    const std::uint32_t n = dist.n_qubits;
    const RegisterLayout lay = window_layout(n);
    const std::uint32_t t1 = n, t2 = 2 * n, objective = 3 * n;

    Circuit c;
    c.layout = lay;
    append_loader(c, dist, {0, n});
    append_comparator(c, {0, n}, t1, {n + 1, n - 1},
                      {k2, ComparatorSpec::Direction::Geq});
    append_comparator(c, {0, n}, t2, {2 * n + 1, n - 1},
                      {k1 + 1, ComparatorSpec::Direction::Lt});
    c.append(gate::MultiControlledX{{{t1, true}, {t2, true}}, objective});

    AOperator a;
    a.circuit = std::move(c);
    a.objective_qubit = objective;
    a.gamma = 0.5;
    a.f_min = 0.0;
    a.f_max = 1.0;
    a.window_mass_required = false;
    return a;
}

AOperator cvar_a_operator(const DiscretizedDistribution& dist, std::uint64_t k,
                          double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw ConfigError("cvar A-operator needs gamma in (0, 1]");
    check_threshold(dist, k, false);
    const std::uint32_t n = dist.n_qubits;
    const RegisterLayout lay = payoff_layout(n);
    const std::uint32_t t1 = n, objective = 2 * n;

    Circuit c;
    c.layout = lay;
    append_loader(c, dist, {0, n});
    append_comparator(c, {0, n}, t1, {n + 1, n - 1},
                      {k, ComparatorSpec::Direction::Geq});
    const double denom = static_cast<double>(dist.size() - 1);
    append_affine_rotation(c, {0, n}, objective, {{t1, true}}, kPi / 4.0 - gamma,
                           denom > 0.0 ? 2.0 * gamma / denom : 0.0);

    AOperator a;
    a.circuit = std::move(c);
    a.objective_qubit = objective;
    a.gamma = gamma;
    a.f_min = dist.grid_min();
    a.f_max = dist.grid_max();
    a.window_mass_required = true;
    return a;
}

Circuit grover_operator(const AOperator& a_op) {
    const RegisterLayout& lay = a_op.circuit.layout;
    Circuit q;
    q.layout = lay;
    // Q = -A S0 A^dagger S_chi, gates listed in application order. The global
    // -1 (an uncontrolled PhaseFlip) turns the raw reflection product, whose
    // eigenvalues are -e^{+-2i theta}, into the plain rotation by 2 theta that
    // phase estimation expects; uncontrolled it is unobservable.
    q.append(gate::PhaseFlip{{{a_op.objective_qubit, true}}});
    q.append(inverse(a_op.circuit));
    std::vector<QubitControl> zeros;
    zeros.reserve(lay.total_qubits);
    for (std::uint32_t i = 0; i < lay.total_qubits; ++i) zeros.push_back({i, false});
    q.append(gate::PhaseFlip{std::move(zeros)});
    q.append(a_op.circuit);
    q.append(gate::PhaseFlip{{}});
    return q;
}

} // namespace qrisk
