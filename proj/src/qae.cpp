// SPDX-License-Identifier: Apache-2.0
#include "qrisk/qae.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "qrisk/errors.hpp"
#include "qrisk/simulate.hpp"

namespace qrisk {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 1));
}

/// Layout of the A-operator extended by an m-qubit estimation register.
RegisterLayout extend_with_ancillas(const RegisterLayout& base, std::uint32_t m) {
    RegisterLayout lay = base;
    lay.roles[Role::EstimationAncilla] = {base.total_qubits, m};
    lay.total_qubits = base.total_qubits + m;
    return lay;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double amplitude_of(const QuantumState& s, const AOperator& a_op) {
    return probability_of(s, a_op.objective_qubit, 1);
}

double log_clamped(double p) {
    return std::log(std::clamp(p, 1e-12, 1.0 - 1e-12));
}

} // namespace

std::string QAEConfig::variant_name() const {
    struct V {
        std::string operator()(const qae::Canonical&) const { return "canonical"; }
        std::string operator()(const qae::Mlqae&) const { return "mlqae"; }
        std::string operator()(const qae::Iqae&) const { return "iqae"; }
        std::string operator()(const qae::ExactAmplitude&) const { return "exact"; }
    };
    return std::visit(V{}, variant);
}

double exact_amplitude(const AOperator& a_op) {
    QuantumState s(a_op.circuit.layout);
    apply_inplace(s, a_op.circuit);
    return amplitude_of(s, a_op);
}

std::vector<double> canonical_outcome_law(double amplitude, std::uint32_t m) {
    const std::uint64_t big_m = std::uint64_t{1} << m;
    const double theta = std::asin(std::sqrt(clamp01(amplitude)));
    const double phi = theta / kPi; // Grover eigenphase fraction
    auto fejer = [&](double delta) {
        // K(delta) = sin^2(pi delta) / (M^2 sin^2(pi delta / M))
        const double M = static_cast<double>(big_m);
        const double d = delta - M * std::round(delta / M);
        const double den = M * std::sin(kPi * d / M);
        if (std::abs(den) < 1e-14) return 1.0;
        const double num = std::sin(kPi * d);
        return (num * num) / (den * den);
    };
    std::vector<double> law(big_m);
    for (std::uint64_t y = 0; y < big_m; ++y) {
        const double yd = static_cast<double>(y);
        const double M = static_cast<double>(big_m);
        law[y] = 0.5 * fejer(yd - M * phi) + 0.5 * fejer(yd + M * phi);
    }
    return law;
}

namespace {

/// State after the full phase-estimation circuit; ancilla qubits listed
/// least-significant first.
std::pair<QuantumState, std::vector<std::uint32_t>>
canonical_state(const AOperator& a_op, std::uint32_t m) {
    if (m == 0 || m > 20) throw ConfigError("canonical QAE needs 1 <= m <= 20");
    const RegisterLayout lay = extend_with_ancillas(a_op.circuit.layout, m);
    if (lay.total_qubits > kMaxQubits)
        throw ResourceError("canonical QAE circuit exceeds the qubit budget");
    const std::uint32_t anc0 = a_op.circuit.layout.total_qubits;

    Circuit c;
    c.layout = lay;
    c.append(a_op.circuit);
    for (std::uint32_t j = 0; j < m; ++j) c.append(gate::Hadamard{anc0 + j});
    const auto q_body = std::make_shared<const Circuit>(grover_operator(a_op));
    for (std::uint32_t j = 0; j < m; ++j) {
        const std::uint64_t reps = std::uint64_t{1} << j;
        for (std::uint64_t r = 0; r < reps; ++r)
            c.append(gate::Controlled{{anc0 + j, true}, q_body});
    }
    c.append(gate::Fourier{anc0, m, true});

    QuantumState s(lay);
    apply_inplace(s, c);
    std::vector<std::uint32_t> anc(m);
    for (std::uint32_t j = 0; j < m; ++j) anc[j] = anc0 + j;
    return {std::move(s), std::move(anc)};
}

} // namespace

std::vector<double> canonical_outcome_distribution(const AOperator& a_op,
                                                   std::uint32_t m) {
    auto [s, anc] = canonical_state(a_op, m);
    return marginal_probabilities(s, anc);
}

QAEResult canonical_qae(const AOperator& a_op, std::uint32_t m, std::uint64_t shots,
                        QAEConfig::Mode mode, std::uint64_t seed) {
    auto [s, anc] = canonical_state(a_op, m);
    const std::uint64_t big_m = std::uint64_t{1} << m;

    QAEResult res;
    std::uint64_t y_hat = 0;
    if (mode == QAEConfig::Mode::Sampled) {
        if (shots == 0) throw ConfigError("canonical QAE needs shots >= 1");
        const auto hist = sample_counts(s, anc, shots, seed);
        for (std::uint64_t y = 0; y < big_m; ++y)
            if (hist[y] > 0) res.raw_histogram[y] = hist[y];
        for (std::uint64_t y = 1; y < big_m; ++y)
            if (hist[y] > hist[y_hat]) y_hat = y;
        res.shots_used = shots;
        res.grover_calls = (big_m - 1) * shots;
    } else {
        const auto probs = marginal_probabilities(s, anc);
        for (std::uint64_t y = 1; y < big_m; ++y)
            if (probs[y] > probs[y_hat]) y_hat = y;
        res.grover_calls = big_m - 1;
    }
    const double sv = std::sin(kPi * static_cast<double>(y_hat) / static_cast<double>(big_m));
    res.estimate = sv * sv;
    // Half a grid cell of the folded phase on either side.
    const double phi_hat = static_cast<double>(y_hat) / static_cast<double>(big_m);
    const double half = 0.5 / static_cast<double>(big_m);
    auto to_a = [](double phi) {
        const double v = std::sin(kPi * phi);
        return v * v;
    };
    const double a1 = to_a(std::max(0.0, std::min(phi_hat, 1.0 - phi_hat) - half));
    const double a2 = to_a(std::min(0.5, std::min(phi_hat, 1.0 - phi_hat) + half));
    res.confidence_interval = {std::min(a1, a2), std::max(a1, a2)};
    return res;
}

QAEResult mlqae(const AOperator& a_op, std::uint32_t m, std::uint64_t shots,
                QAEConfig::Mode mode, std::uint64_t seed) {
    if (m == 0) throw ConfigError("MLQAE needs m >= 1");
    if (shots == 0) throw ConfigError("MLQAE needs shots >= 1");
    std::vector<std::uint64_t> schedule;
    schedule.push_back(0);
    for (std::uint32_t j = 1; j < m; ++j) schedule.push_back(std::uint64_t{1} << j);

    QuantumState s(a_op.circuit.layout);
    apply_inplace(s, a_op.circuit);
    const Circuit q = grover_operator(a_op);

    const double n_shots = static_cast<double>(shots);
    std::vector<double> ones; // observed (or exact-expected) |1> counts
    std::uint64_t current_k = 0;
    QAEResult res;
    for (std::size_t j = 0; j < schedule.size(); ++j) {
        const std::uint64_t k = schedule[j];
        for (; current_k < k; ++current_k) apply_inplace(s, q);
        if (mode == QAEConfig::Mode::Sampled) {
            const std::uint32_t obj[1] = {a_op.objective_qubit};
            const auto counts = sample_counts(s, obj, shots, sub_seed(seed, j));
            ones.push_back(static_cast<double>(counts[1]));
            res.shots_used += shots;
            res.grover_calls += k * shots;
        } else {
            ones.push_back(amplitude_of(s, a_op) * n_shots);
            res.grover_calls += k;
        }
    }

    auto log_lik = [&](double theta) {
        double ll = 0.0;
        for (std::size_t j = 0; j < schedule.size(); ++j) {
            const double arg =
                static_cast<double>(2 * schedule[j] + 1) * theta;
            const double p = std::sin(arg) * std::sin(arg);
            ll += ones[j] * log_clamped(p) + (n_shots - ones[j]) * log_clamped(1.0 - p);
        }
        return ll;
    };

    // Coarse grid over [0, pi/2], then golden-section refinement.
    const int grid = 100'000;
    double best_theta = 0.0, best_ll = -1e300;
    for (int i = 0; i <= grid; ++i) {
        const double theta = (kPi / 2.0) * static_cast<double>(i) / grid;
        const double ll = log_lik(theta);
        if (ll > best_ll) {
            best_ll = ll;
            best_theta = theta;
        }
    }
    double lo = std::max(0.0, best_theta - (kPi / 2.0) / grid);
    double hi = std::min(kPi / 2.0, best_theta + (kPi / 2.0) / grid);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = log_lik(x1), f2 = log_lik(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = log_lik(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = log_lik(x1);
        }
    }
    const double theta_hat = 0.5 * (lo + hi);
    res.estimate = std::sin(theta_hat) * std::sin(theta_hat);
    return res;
}

QAEResult iqae(const AOperator& a_op, const qae::Iqae& cfg, QAEConfig::Mode mode,
               std::uint64_t seed) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5))
        throw ConfigError("IQAE needs epsilon in (0, 1/2)");
    if (!(cfg.alpha_conf > 0.0 && cfg.alpha_conf < 1.0))
        throw ConfigError("IQAE needs alpha in (0, 1)");
    if (cfg.shots == 0) throw ConfigError("IQAE needs shots >= 1");

    const double big_t =
        std::ceil(std::log2(kPi / (8.0 * cfg.epsilon))); // round-count bound
    const double t_rounds = std::max(1.0, big_t);

    QuantumState s(a_op.circuit.layout);
    apply_inplace(s, a_op.circuit);
    const Circuit q = grover_operator(a_op);
    std::uint64_t cached_k = 0; // s currently holds Q^cached_k A |0>

    double theta_l = 0.0, theta_u = kPi / 2.0; // amplitude angle interval
    std::uint64_t k = 0;
    bool up = true;

    // Accumulated measurements per power k (shots, ones).
    std::map<std::uint64_t, std::pair<double, double>> tallies;

    QAEResult res;
    std::uint64_t round = 0;
    auto a_lower = [&] { return std::sin(theta_l) * std::sin(theta_l); };
    auto a_upper = [&] { return std::sin(theta_u) * std::sin(theta_u); };

    while (a_upper() - a_lower() > 2.0 * cfg.epsilon) {
        // FindNextK: largest K = 4k'+2 with the scaled interval in a half-plane.
        {
            const std::uint64_t k_i = 4 * k + 2;
            const double span = theta_u - theta_l;
            std::uint64_t k_max =
                span > 0.0 ? static_cast<std::uint64_t>(kPi / span) : k_i;
            if (k_max < 2) k_max = 2;
            std::uint64_t cand = k_max - (k_max - 2) % 4; // largest = 2 mod 4
            while (cand >= 2 * k_i) {                     // growth factor r = 2
                const double lo_s = std::fmod(cand * theta_l, 2.0 * kPi);
                const double hi_s = std::fmod(cand * theta_u, 2.0 * kPi);
                if (lo_s <= kPi && hi_s <= kPi) {
                    k = (cand - 2) / 4;
                    up = true;
                    break;
                }
                if (lo_s >= kPi && hi_s >= kPi) {
                    k = (cand - 2) / 4;
                    up = false;
                    break;
                }
                if (cand < 4) break;
                cand -= 4;
            }
        }
        const std::uint64_t big_k = 4 * k + 2;

        // Measure at power k (evolution is monotone in k, so extend in place).
        if (k < cached_k) {
            QuantumState fresh(a_op.circuit.layout);
            apply_inplace(fresh, a_op.circuit);
            s = std::move(fresh);
            cached_k = 0;
        }
        for (; cached_k < k; ++cached_k) apply_inplace(s, q);

        double a_meas;
        double eps_a;
        if (mode == QAEConfig::Mode::Sampled) {
            const std::uint32_t obj[1] = {a_op.objective_qubit};
            const auto counts = sample_counts(s, obj, cfg.shots, sub_seed(seed, round));
            auto& tally = tallies[k];
            tally.first += static_cast<double>(cfg.shots);
            tally.second += static_cast<double>(counts[1]);
            a_meas = tally.second / tally.first;
            // Chernoff-Hoeffding width at confidence alpha split over T rounds
            eps_a = std::sqrt(std::log(2.0 * t_rounds / cfg.alpha_conf) /
                              (2.0 * tally.first));
            res.shots_used += cfg.shots;
            res.grover_calls += k * cfg.shots;
            if (res.shots_used > cfg.max_total_shots)
                throw ConvergenceError("IQAE exceeded its total shot budget",
                                       a_lower(), a_upper());
        } else {
            a_meas = amplitude_of(s, a_op);
            eps_a = 0.0;
            res.grover_calls += k;
        }

        const double a_min = clamp01(a_meas - eps_a);
        const double a_max = clamp01(a_meas + eps_a);
        // Scaled angle Omega = K theta, with cos(Omega) = 1 - 2 a.
        double omega_min, omega_max;
        if (up) {
            omega_min = std::acos(1.0 - 2.0 * a_min);
            omega_max = std::acos(1.0 - 2.0 * a_max);
        } else {
            omega_min = 2.0 * kPi - std::acos(1.0 - 2.0 * a_max);
            omega_max = 2.0 * kPi - std::acos(1.0 - 2.0 * a_min);
        }
        // Unwrap into the current winding of the K-scaled interval.
        const double kd = static_cast<double>(big_k);
        const double wind_l = std::floor(kd * theta_l / (2.0 * kPi));
        const double wind_u = std::floor(kd * theta_u / (2.0 * kPi));
        const double cand_l = (2.0 * kPi * wind_l + omega_min) / kd;
        const double cand_u = (2.0 * kPi * wind_u + omega_max) / kd;
        theta_l = std::max(theta_l, cand_l);
        theta_u = std::min(theta_u, cand_u);
        if (theta_u < theta_l) std::swap(theta_l, theta_u);
        ++round;
        if (round > 10'000)
            throw ConvergenceError("IQAE failed to tighten its interval", a_lower(),
                                   a_upper());
    }

    res.estimate = 0.5 * (a_lower() + a_upper());
    res.confidence_interval = {a_lower(), a_upper()};
    return res;
}

QAEResult estimate_amplitude(const AOperator& a_op, const QAEConfig& cfg) {
    struct V {
        const AOperator& a;
        const QAEConfig& c;
        QAEResult operator()(const qae::Canonical& v) const {
            return canonical_qae(a, v.m, v.shots, c.mode, c.seed);
        }
        QAEResult operator()(const qae::Mlqae& v) const {
            return mlqae(a, v.m, v.shots, c.mode, c.seed);
        }
        QAEResult operator()(const qae::Iqae& v) const {
            return iqae(a, v, c.mode, c.seed);
        }
        QAEResult operator()(const qae::ExactAmplitude&) const {
            QAEResult r;
            r.estimate = exact_amplitude(a);
            r.confidence_interval = {r.estimate, r.estimate};
            return r;
        }
    };
    return std::visit(V{a_op, cfg}, cfg.variant);
}

} // namespace qrisk
