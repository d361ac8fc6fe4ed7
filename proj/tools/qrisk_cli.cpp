// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner: discretization dumps, single estimates, qubit/shot
// sweeps, canonical-QAE histograms, and oracle golden values. Tables go to
// stdout (and <out>.csv); full diagnostics to <out>.json.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrisk/distributions.hpp"
#include "qrisk/errors.hpp"
#include "qrisk/oracle.hpp"
#include "qrisk/qae.hpp"
#include "qrisk/risk.hpp"
#include "qrisk/simulate.hpp"

#ifndef QRISK_VERSION
#define QRISK_VERSION "unversioned"
#endif

namespace {

using nlohmann::json;
using namespace qrisk;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kSchemaVersion = 1;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t master, std::uint64_t c1, std::uint64_t c2) {
    return splitmix64(splitmix64(master ^ splitmix64(c1 + 1)) ^ splitmix64(c2 + 0x9e37ull));
}

struct Options {
    std::string preset;
    std::string pmf;            // inline comma-separated masses
    std::string interval;       // "lo,hi"
    std::string qubits = "3";   // "n" or "lo..hi"
    std::string measure = "all";
    std::string levels;         // lambda[,beta] / alpha
    double gamma = 0.0;         // 0 -> per-measure default
    std::string qae = "iqae";
    double epsilon = 0.05;
    double conf = 0.01;
    std::uint32_t m = 3;
    std::string shots = "1024"; // count, or comma list for sweep-shots / m range
    std::string mode = "exact";
    std::uint64_t seed = 0;
    std::string out;
    std::string orientation = "loss";
};

json config_echo(const Options& o, const std::string& cmd) {
    return json{{"schema_version", kSchemaVersion},
                {"command", cmd},
                {"preset", o.preset},
                {"pmf", o.pmf},
                {"interval", o.interval},
                {"qubits", o.qubits},
                {"measure", o.measure},
                {"levels", o.levels},
                {"gamma", o.gamma},
                {"qae", o.qae},
                {"epsilon", o.epsilon},
                {"conf", o.conf},
                {"m", o.m},
                {"shots", o.shots},
                {"mode", o.mode},
                {"seed", o.seed},
                {"orientation", o.orientation}};
}

void apply_config_file(Options& o, const std::string& path, std::string& cmd_hint) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j = json::parse(in);
    if (j.contains("config")) j = j.at("config"); // accept an emitted result file
    if (j.value("schema_version", kSchemaVersion) != kSchemaVersion)
        throw ConfigError("unsupported config schema version");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "schema_version") continue;
        else if (k == "command") cmd_hint = it.value().get<std::string>();
        else if (k == "preset") o.preset = it.value().get<std::string>();
        else if (k == "pmf") o.pmf = it.value().get<std::string>();
        else if (k == "interval") o.interval = it.value().get<std::string>();
        else if (k == "qubits") o.qubits = it.value().get<std::string>();
        else if (k == "measure") o.measure = it.value().get<std::string>();
        else if (k == "levels") o.levels = it.value().get<std::string>();
        else if (k == "gamma") o.gamma = it.value().get<double>();
        else if (k == "qae") o.qae = it.value().get<std::string>();
        else if (k == "epsilon") o.epsilon = it.value().get<double>();
        else if (k == "conf") o.conf = it.value().get<double>();
        else if (k == "m") o.m = it.value().get<std::uint32_t>();
        else if (k == "shots") o.shots = it.value().get<std::string>();
        else if (k == "mode") o.mode = it.value().get<std::string>();
        else if (k == "seed") o.seed = it.value().get<std::uint64_t>();
        else if (k == "orientation") o.orientation = it.value().get<std::string>();
        else throw ConfigError("unknown config key: " + k);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

std::pair<double, double> parse_interval(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw ConfigError("interval must be 'lo,hi'");
    return {std::stod(parts[0]), std::stod(parts[1])};
}

std::vector<std::uint32_t> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    std::vector<std::uint32_t> out;
    if (dots == std::string::npos) {
        for (const auto& p : split(s, ','))
            out.push_back(static_cast<std::uint32_t>(std::stoul(p)));
    } else {
        const auto lo = std::stoul(s.substr(0, dots));
        const auto hi = std::stoul(s.substr(dots + 2));
        if (hi < lo) throw ConfigError("empty range: " + s);
        for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<std::uint32_t>(v));
    }
    if (out.empty()) throw ConfigError("empty range: " + s);
    return out;
}

std::vector<std::uint64_t> parse_list64(const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const auto& p : split(s, ',')) out.push_back(std::stoull(p));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

struct Source {
    std::optional<ContinuousSpec> spec; // set when a closed-form law exists
    std::optional<std::vector<double>> masses;
    double lo = 0.0, hi = 0.0;

    DiscretizedDistribution at(std::uint32_t n) const {
        if (spec) return discretize(*spec, lo, hi, n);
        DiscretizedDistribution d = from_pmf(*masses, lo,
                                             (hi - lo) / static_cast<double>((std::uint64_t{1} << n) - 1));
        if (d.n_qubits != n) throw ConfigError("pmf size does not match --qubits");
        return d;
    }
};

Source resolve_source(const Options& o) {
    Source s;
    if (!o.preset.empty() && !o.pmf.empty())
        throw ConfigError("--preset and --pmf are mutually exclusive");
    if (!o.preset.empty()) {
        const auto p = find_preset(o.preset);
        if (!p) {
            std::string known;
            for (const auto& n : preset_names()) known += " " + n;
            throw ConfigError("unknown preset '" + o.preset + "'; known:" + known);
        }
        s.spec = p->spec;
        s.lo = p->sim_lo;
        s.hi = p->sim_hi;
    } else if (!o.pmf.empty()) {
        std::vector<double> masses;
        for (const auto& v : split(o.pmf, ',')) masses.push_back(std::stod(v));
        s.masses = std::move(masses);
        s.lo = 0.0;
        s.hi = static_cast<double>(s.masses->size() - 1);
    } else {
        throw ConfigError("one of --preset or --pmf is required");
    }
    if (!o.interval.empty()) std::tie(s.lo, s.hi) = parse_interval(o.interval);
    return s;
}

QAEConfig make_qae_cfg(const Options& o, std::uint64_t seed, std::uint64_t shots) {
    QAEConfig cfg;
    if (o.qae == "iqae")
        cfg.variant = qae::Iqae{o.epsilon, o.conf, shots, 10'000'000};
    else if (o.qae == "mlqae")
        cfg.variant = qae::Mlqae{o.m, shots};
    else if (o.qae == "canonical")
        cfg.variant = qae::Canonical{o.m, shots};
    else if (o.qae == "exact")
        cfg.variant = qae::ExactAmplitude{};
    else
        throw ConfigError("unknown QAE variant: " + o.qae);
    if (o.mode == "exact")
        cfg.mode = QAEConfig::Mode::ExactProbability;
    else if (o.mode == "sampled")
        cfg.mode = QAEConfig::Mode::Sampled;
    else
        throw ConfigError("unknown mode: " + o.mode);
    cfg.seed = seed;
    return cfg;
}

struct Levels {
    double lambda = 0.05; // VaR/CVaR level, RVaR alpha, expectile alpha
    double beta = 0.005;  // RVaR inner level
};

Levels parse_levels(const Options& o) {
    Levels lv;
    if (!o.levels.empty()) {
        const auto parts = split(o.levels, ',');
        lv.lambda = std::stod(parts[0]);
        if (parts.size() > 1) lv.beta = std::stod(parts[1]);
        if (parts.size() > 2) throw ConfigError("--levels takes at most two values");
    }
    return lv;
}

SignConvention parse_orientation(const Options& o) {
    if (o.orientation == "loss") return SignConvention::Loss;
    if (o.orientation == "pnl") return SignConvention::Pnl;
    throw ConfigError("orientation must be 'loss' or 'pnl'");
}

std::vector<std::string> measure_list(const std::string& m) {
    if (m == "all") return {"var", "cvar", "rvar", "expectile"};
    std::vector<std::string> out;
    for (const auto& part : split(m, ',')) {
        bool known = false;
        for (const auto& k : {"var", "cvar", "rvar", "expectile"})
            if (part == k) known = true;
        if (!known) throw ConfigError("unknown measure: " + part);
        out.push_back(part);
    }
    if (out.empty()) throw ConfigError("unknown measure: " + m);
    return out;
}

double gamma_for(const Options& o, const std::string& measure) {
    if (o.gamma > 0.0) return o.gamma;
    return (measure == "var" || measure == "cvar") ? default_gamma_var_cvar()
                                                   : default_gamma_rvar_expectile();
}

RiskResult run_measure(const std::string& measure, const DiscretizedDistribution& dist,
                       const Levels& lv, double gamma, const QAEConfig& cfg,
                       SignConvention orient) {
    // The CLI talks in tail risk levels; the pipelines take CDF targets.
    if (measure == "var") return quantum_var(dist, 1.0 - lv.lambda, cfg, orient);
    if (measure == "cvar")
        return quantum_cvar(dist, 1.0 - lv.lambda, gamma, cfg, orient);
    if (measure == "rvar")
        return quantum_rvar(dist, 1.0 - lv.lambda, 1.0 - lv.beta, gamma, cfg, orient);
    if (measure == "expectile") return expectile(dist, lv.lambda, gamma, cfg);
    throw ConfigError("unknown measure: " + measure);
}

double oracle_discrete(const std::string& measure, const DiscretizedDistribution& dist,
                       const Levels& lv, SignConvention orient) {
    const DiscretizedDistribution loss =
        orient == SignConvention::Loss ? dist : dist.negated();
    if (measure == "var") return oracle::exact_var(loss, lv.lambda);
    if (measure == "cvar") return oracle::exact_cvar(loss, lv.lambda);
    if (measure == "rvar") return oracle::exact_rvar(loss, lv.lambda, lv.beta);
    if (measure == "expectile") return oracle::exact_expectile(dist, lv.lambda);
    throw ConfigError("unknown measure: " + measure);
}

std::optional<double> oracle_continuous(const std::string& measure, const Source& src,
                                        const Levels& lv) {
    if (!src.spec) return std::nullopt;
    if (measure == "var") return oracle::continuous_var(*src.spec, lv.lambda);
    if (measure == "cvar") return oracle::continuous_cvar(*src.spec, lv.lambda);
    if (measure == "rvar") return oracle::continuous_rvar(*src.spec, lv.lambda, lv.beta);
    if (measure == "expectile") return oracle::continuous_expectile(*src.spec, lv.lambda);
    return std::nullopt;
}

/// Emits the table to stdout and, when --out is set, <out>.csv / <out>.json.
void emit(const Options& o, const std::string& cmd, const std::string& csv,
          json diagnostics) {
    json doc{{"version", QRISK_VERSION},
             {"rng", kRngAlgorithm},
             {"config", config_echo(o, cmd)},
             {"rows", std::move(diagnostics)}};
    std::cout << csv;
    if (!o.out.empty()) {
        std::ofstream fc(o.out + ".csv");
        if (!fc) throw ConfigError("cannot write " + o.out + ".csv");
        fc << csv;
        std::ofstream fj(o.out + ".json");
        if (!fj) throw ConfigError("cannot write " + o.out + ".json");
        fj << doc.dump(2) << '\n';
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

json risk_row_json(const RiskResult& r) {
    json j{{"measure", r.measure},
           {"value", r.value},
           {"grid_step", r.grid_step},
           {"iterations", r.iterations},
           {"converged", r.converged}};
    if (r.window_mass) j["window_mass"] = *r.window_mass;
    if (r.threshold_index) j["threshold_index"] = *r.threshold_index;
    if (r.threshold_index_2) j["threshold_index_2"] = *r.threshold_index_2;
    if (r.evar) j["evar"] = *r.evar;
    std::uint64_t grover = 0, shots = 0;
    for (const auto& q : r.qae_diagnostics) {
        grover += q.grover_calls;
        shots += q.shots_used;
    }
    j["grover_calls"] = grover;
    j["shots_used"] = shots;
    j["qae_calls"] = r.qae_diagnostics.size();
    return j;
}

// ---- subcommands -----------------------------------------------------------

int cmd_discretize(const Options& o) {
    const Source src = resolve_source(o);
    const auto ns = parse_range(o.qubits);
    std::ostringstream csv;
    csv << "n,i,x,p\n";
    json rows = json::array();
    for (auto n : ns) {
        const auto d = src.at(n);
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            csv << n << ',' << i << ',' << fmt(d.grid(i)) << ',' << fmt(d.probs[i])
                << '\n';
        }
        rows.push_back({{"n", n}, {"a", d.a}, {"b", d.b}, {"probs", d.probs}});
    }
    emit(o, "discretize", csv.str(), rows);
    return kExitOk;
}

int cmd_estimate(const Options& o) {
    const Source src = resolve_source(o);
    const auto ns = parse_range(o.qubits);
    if (ns.size() != 1) throw ConfigError("estimate takes a single --qubits value");
    const Levels lv = parse_levels(o);
    const SignConvention orient = parse_orientation(o);
    const auto dist = src.at(ns[0]);
    const auto shots = parse_list64(o.shots);

    std::ostringstream csv;
    csv << "measure,estimate,oracle_discrete,continuous_ref,abs_error,status\n";
    json rows = json::array();
    bool degraded = false;
    for (const auto& measure : measure_list(o.measure)) {
        const double gamma = gamma_for(o, measure);
        const QAEConfig cfg = make_qae_cfg(o, o.seed, shots[0]);
        const double ref = oracle_discrete(measure, dist, lv, orient);
        const auto cont = oracle_continuous(measure, src, lv);
        json row{{"measure", measure},
                 {"gamma", gamma},
                 {"oracle_discrete", ref}};
        if (cont) row["continuous_ref"] = *cont;
        std::string status = "ok";
        double est = std::numeric_limits<double>::quiet_NaN();
        try {
            const RiskResult r = run_measure(measure, dist, lv, gamma, cfg, orient);
            est = r.value;
            row.update(risk_row_json(r));
        } catch (const IllConditionedError& e) {
            status = std::string("ill-conditioned: ") + e.what();
            degraded = true;
        } catch (const ConvergenceError& e) {
            status = std::string("no-convergence: ") + e.what();
            degraded = true;
        }
        row["status"] = status;
        csv << measure << ',' << fmt(est) << ',' << fmt(ref) << ','
            << (cont ? fmt(*cont) : "") << ',' << fmt(std::abs(est - ref)) << ','
            << (status == "ok" ? "ok" : "error") << '\n';
        rows.push_back(std::move(row));
    }
    emit(o, "estimate", csv.str(), rows);
    return degraded ? kExitConvergence : kExitOk;
}

int cmd_sweep_qubits(const Options& o) {
    const Source src = resolve_source(o);
    const auto ns = parse_range(o.qubits);
    const Levels lv = parse_levels(o);
    const SignConvention orient = parse_orientation(o);
    const auto measures = measure_list(o.measure);
    const auto shots = parse_list64(o.shots);
    const double span = src.hi - src.lo;

    struct Cell {
        std::uint32_t n;
        std::string measure;
        json row;
        std::string csv_line;
        bool failed = false;
    };
    std::vector<Cell> cells;
    for (auto n : ns)
        for (const auto& msr : measures) cells.push_back({n, msr, {}, "", false});

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(cells.size()); ++c) {
        Cell& cell = cells[c];
        const auto dist = src.at(cell.n);
        const double gamma = gamma_for(o, cell.measure);
        const std::uint64_t seed =
            cell_seed(o.seed, cell.n, std::hash<std::string>{}(cell.measure));
        const QAEConfig cfg = make_qae_cfg(o, seed, shots[0]);
        const double ref = oracle_discrete(cell.measure, dist, lv, orient);
        const auto cont = oracle_continuous(cell.measure, src, lv);
        json row{{"n", cell.n},
                 {"measure", cell.measure},
                 {"gamma", gamma},
                 {"seed", seed},
                 {"oracle_discrete", ref}};
        if (cont) row["continuous_ref"] = *cont;
        std::string status = "ok";
        double est = std::numeric_limits<double>::quiet_NaN();
        try {
            const RiskResult r =
                run_measure(cell.measure, dist, lv, gamma, cfg, orient);
            est = r.value;
            row.update(risk_row_json(r));
        } catch (const std::exception& e) {
            status = e.what();
            cell.failed = true;
        }
        row["status"] = status;
        const double rel =
            cont ? std::abs(est - *cont) / span : std::numeric_limits<double>::quiet_NaN();
        row["rel_error"] = rel;
        std::ostringstream line;
        line << cell.n << ',' << cell.measure << ',' << fmt(est) << ',' << fmt(ref)
             << ',' << (cont ? fmt(*cont) : "") << ',' << fmt(rel) << ','
             << (cell.failed ? "error" : "ok") << '\n';
        cell.row = std::move(row);
        cell.csv_line = line.str();
    }

    std::ostringstream csv;
    csv << "n,measure,estimate,oracle_discrete,continuous_ref,rel_error,status\n";
    json rows = json::array();
    for (auto& cell : cells) {
        csv << cell.csv_line;
        rows.push_back(std::move(cell.row));
    }
    emit(o, "sweep-qubits", csv.str(), rows);
    return kExitOk;
}

int cmd_sweep_shots(const Options& o) {
    if (o.mode != "sampled")
        throw ConfigError("sweep-shots requires --mode sampled");
    const Source src = resolve_source(o);
    const auto ns = parse_range(o.qubits);
    if (ns.size() != 1) throw ConfigError("sweep-shots takes a single --qubits value");
    const Levels lv = parse_levels(o);
    const SignConvention orient = parse_orientation(o);
    const auto measures = measure_list(o.measure);
    const auto shot_list = parse_list64(o.shots);
    const auto dist = src.at(ns[0]);

    struct Cell {
        std::uint64_t shots;
        std::string measure;
        json row;
        std::string csv_line;
        bool failed = false;
    };
    std::vector<Cell> cells;
    for (auto sh : shot_list)
        for (const auto& msr : measures) cells.push_back({sh, msr, {}, "", false});

    bool any_degraded = false;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(cells.size()); ++c) {
        Cell& cell = cells[c];
        const double gamma = gamma_for(o, cell.measure);
        const std::uint64_t seed =
            cell_seed(o.seed, cell.shots, std::hash<std::string>{}(cell.measure));
        const QAEConfig cfg = make_qae_cfg(o, seed, cell.shots);
        const double ref = oracle_discrete(cell.measure, dist, lv, orient);
        json row{{"shots", cell.shots},
                 {"measure", cell.measure},
                 {"gamma", gamma},
                 {"seed", seed},
                 {"oracle_discrete", ref}};
        std::string status = "ok";
        double est = std::numeric_limits<double>::quiet_NaN();
        std::uint64_t grover = 0;
        try {
            const RiskResult r =
                run_measure(cell.measure, dist, lv, gamma, cfg, orient);
            est = r.value;
            row.update(risk_row_json(r));
            grover = row["grover_calls"].get<std::uint64_t>();
        } catch (const IllConditionedError& e) {
            status = std::string("ill-conditioned: ") + e.what();
            cell.failed = true;
        } catch (const std::exception& e) {
            status = e.what();
            cell.failed = true;
        }
        row["status"] = status;
        std::ostringstream line;
        line << cell.shots << ',' << cell.measure << ',' << fmt(est) << ','
             << fmt(ref) << ',' << fmt(std::abs(est - ref)) << ',' << grover << ','
             << (cell.failed ? "error" : "ok") << '\n';
        cell.row = std::move(row);
        cell.csv_line = line.str();
    }
    for (const auto& cell : cells) any_degraded = any_degraded || cell.failed;

    std::ostringstream csv;
    csv << "shots,measure,estimate,oracle_discrete,abs_error,grover_calls,status\n";
    json rows = json::array();
    for (auto& cell : cells) {
        csv << cell.csv_line;
        rows.push_back(std::move(cell.row));
    }
    emit(o, "sweep-shots", csv.str(), rows);
    return any_degraded ? kExitConvergence : kExitOk;
}

int cmd_canonical_hist(const Options& o) {
    const Source src = resolve_source(o);
    const auto ns = parse_range(o.qubits);
    if (ns.size() != 1)
        throw ConfigError("canonical-hist takes a single --qubits value");
    Options opts = o;
    if (opts.levels.empty()) opts.levels = "0.05";
    const Levels lv = parse_levels(opts);
    const auto dist = src.at(ns[0]);
    const double gamma = o.gamma > 0.0 ? o.gamma : default_gamma_rvar_expectile();

    // Expectile histogram study: the A-operator is anchored at the oracle
    // root so each phase-grid outcome maps to a candidate h-value.
    double level = lv.lambda;
    DiscretizedDistribution work = dist;
    if (level < 0.5) {
        work = dist.negated();
        level = 1.0 - level;
    }
    const double root = oracle::exact_expectile(work, level);
    const std::uint64_t i_star = static_cast<std::uint64_t>(std::clamp(
        std::round((root - work.a) / work.b), 0.0,
        static_cast<double>(work.size() - 1)));
    const auto params = ExpectileParams::at(level, work, i_star);
    const AOperator a_op = expectile_a_operator(work, params, gamma);
    const double exact_a = exact_amplitude(a_op);
    const double reference = a_op.invert(exact_a);

    const auto m_list = parse_range(o.shots == "1024" ? std::string("2..6") : o.shots);
    const auto shot_default = 4096ull;

    std::ostringstream csv;
    csv << "m,y,inverted_value,weight,reference\n";
    json rows = json::array();
    for (auto m : m_list) {
        std::vector<double> weights;
        if (o.mode == "exact") {
            weights = canonical_outcome_distribution(a_op, m);
        } else {
            const auto res = canonical_qae(a_op, m, shot_default, QAEConfig::Mode::Sampled,
                                           cell_seed(o.seed, m, 0));
            weights.assign(std::uint64_t{1} << m, 0.0);
            for (const auto& [y, c] : res.raw_histogram)
                weights[y] = static_cast<double>(c);
        }
        const double big_m = static_cast<double>(std::uint64_t{1} << m);
        json hist = json::array();
        for (std::uint64_t y = 0; y < weights.size(); ++y) {
            const double sv = std::sin(std::numbers::pi * static_cast<double>(y) / big_m);
            const double inv = a_op.invert(sv * sv);
            csv << m << ',' << y << ',' << fmt(inv) << ',' << fmt(weights[y]) << ','
                << fmt(reference) << '\n';
            hist.push_back({{"y", y}, {"inverted_value", inv}, {"weight", weights[y]}});
        }
        rows.push_back({{"m", m},
                        {"reference", reference},
                        {"exact_amplitude", exact_a},
                        {"histogram", std::move(hist)}});
    }
    emit(o, "canonical-hist", csv.str(), rows);
    return kExitOk;
}

int cmd_oracle(const Options& o) {
    const Source src = resolve_source(o);
    const auto ns = parse_range(o.qubits);
    const Levels lv = parse_levels(o);
    const SignConvention orient = parse_orientation(o);

    std::ostringstream csv;
    csv << "n,measure,oracle_discrete,continuous_ref\n";
    json rows = json::array();
    for (auto n : ns) {
        const auto dist = src.at(n);
        for (const auto& measure : measure_list(o.measure)) {
            const double ref = oracle_discrete(measure, dist, lv, orient);
            const auto cont = oracle_continuous(measure, src, lv);
            csv << n << ',' << measure << ',' << fmt(ref) << ','
                << (cont ? fmt(*cont) : "") << '\n';
            json row{{"n", n}, {"measure", measure}, {"oracle_discrete", ref}};
            if (cont) row["continuous_ref"] = *cont;
            rows.push_back(std::move(row));
        }
    }
    emit(o, "oracle", csv.str(), rows);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    std::string config_path;
    std::string cmd_hint;

    // Pre-scan for --config so file values act as defaults under the flags.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    }

    CLI::App app{"Quantum risk-measure estimation experiments"};
    app.set_version_flag("--version", QRISK_VERSION);
    app.require_subcommand(0, 1);

    try {
        if (!config_path.empty()) apply_config_file(o, config_path, cmd_hint);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    std::vector<CLI::App*> subs;
    const std::pair<const char*, const char*> sub_specs[] = {
        {"discretize", "truncate and discretize a distribution onto a qubit grid"},
        {"estimate", "estimate risk measures with a QAE engine"},
        {"sweep-qubits", "estimate across a range of qubit counts"},
        {"sweep-shots", "estimate across a range of shot budgets"},
        {"canonical-hist", "canonical-QAE outcome histograms for the expectile"},
        {"oracle", "classical reference values only"},
    };
    for (const auto& [name, blurb] : sub_specs) {
        CLI::App* sub = app.add_subcommand(name, blurb);
        sub->add_option("--config", config_path, "JSON config file (or emitted result)");
        sub->add_option("--preset", o.preset, "named distribution preset");
        sub->add_option("--pmf", o.pmf, "inline comma-separated masses");
        sub->add_option("--interval", o.interval, "discretization interval 'lo,hi'");
        sub->add_option("--qubits", o.qubits, "qubit count, list, or range lo..hi");
        sub->add_option("--measure", o.measure, "var|cvar|rvar|expectile|all");
        sub->add_option("--levels", o.levels, "risk level(s) 'lambda[,beta]'");
        sub->add_option("--gamma", o.gamma, "scaling parameter (0 = per-measure default)");
        sub->add_option("--qae", o.qae, "iqae|mlqae|canonical|exact");
        sub->add_option("--epsilon", o.epsilon, "IQAE target half-width");
        sub->add_option("--conf", o.conf, "IQAE failure probability");
        sub->add_option("--m", o.m, "ancilla count / schedule depth");
        sub->add_option("--shots", o.shots, "shot count, list, or m-range for canonical-hist");
        sub->add_option("--mode", o.mode, "exact|sampled");
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--out", o.out, "output path prefix (.csv/.json)");
        sub->add_option("--orientation", o.orientation, "loss|pnl");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    std::string cmd = cmd_hint;
    for (const auto* sub : subs)
        if (sub->parsed()) cmd = sub->get_name();
    if (cmd.empty()) {
        std::cerr << app.help() << '\n';
        return kExitConfig;
    }

    try {
        if (cmd == "discretize") return cmd_discretize(o);
        if (cmd == "estimate") return cmd_estimate(o);
        if (cmd == "sweep-qubits") return cmd_sweep_qubits(o);
        if (cmd == "sweep-shots") return cmd_sweep_shots(o);
        if (cmd == "canonical-hist") return cmd_canonical_hist(o);
        if (cmd == "oracle") return cmd_oracle(o);
        std::cerr << "unknown command: " << cmd << '\n';
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << " [" << e.interval_lo << ", "
                  << e.interval_hi << "]\n";
        return kExitConvergence;
    } catch (const IllConditionedError& e) {
        std::cerr << "ill-conditioned: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
