#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "paoi/distribution.hpp"
#include "paoi/nonpreemptive.hpp"
#include "paoi/preemptive.hpp"
#include "paoi/simulation.hpp"
#include "paoi/threshold.hpp"

// Config-driven front end: JSON experiment descriptions in, result rows and
// optimizer traces out. Everything here is also reachable through the CLI.
namespace paoi::experiment {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PolicyConfig {
    enum class Kind { fixed, randomized, transmission_aware, mean, optimal };
    Kind kind = Kind::fixed;
    Threshold theta{};
    std::optional<DistributionSpec> theta_dist;
    double beta = 0.0;
};

struct SweepSettings {
    std::vector<double> ratio_grid;
    double total_mean = 1.0;
};

struct ExperimentConfig {
    sim::Discipline discipline = sim::Discipline::non_preemptive;
    std::optional<DistributionSpec> T;
    std::optional<DistributionSpec> C;
    PolicyConfig policy;
    std::uint64_t packets = 1000000;
    std::uint64_t seed = 42;
    std::uint64_t batches = 100;
    std::optional<SweepSettings> sweep;
    std::vector<int> checks;     // validate: explicit check selection
    bool checks_given = false;   // distinguishes "all" from "none"
    double tolerance_scale = 1.0;
};

struct ResultRow {
    double ratio = std::numeric_limits<double>::quiet_NaN();
    std::string system;
    std::string policy;
    double threshold = std::numeric_limits<double>::quiet_NaN();
    double paoi_analytic = std::numeric_limits<double>::quiet_NaN();
    double paoi_sim = std::numeric_limits<double>::quiet_NaN();
    double paoi_stderr = std::numeric_limits<double>::quiet_NaN();
    double aoi_sim = std::numeric_limits<double>::quiet_NaN();
    double delivery_ratio = std::numeric_limits<double>::quiet_NaN();
};

// ---- parsing ----

namespace detail {

inline const json& require_field(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(std::string(where) + ": missing field \"" + key + "\"");
    return j.at(key);
}

inline double require_number(const json& j, const char* key, const char* where) {
    const json& v = require_field(j, key, where);
    if (!v.is_number())
        throw ConfigError(std::string(where) + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

// a threshold-like field: a nonnegative number or the literal "inf"
inline double number_or_inf(const json& j, const char* key, const char* where) {
    const json& v = require_field(j, key, where);
    if (v.is_string() && v.get<std::string>() == "inf")
        return std::numeric_limits<double>::infinity();
    if (v.is_number()) {
        const double x = v.get<double>();
        if (std::isnan(x) || x < 0.0)
            throw ConfigError(std::string(where) + ": field \"" + key +
                              "\" must be nonnegative");
        return x;
    }
    throw ConfigError(std::string(where) + ": field \"" + key +
                      "\" must be a number or \"inf\"");
}

}  // namespace detail

inline DistributionSpec parse_distribution(const json& j, const char* where) {
    const json& kj = detail::require_field(j, "kind", where);
    if (!kj.is_string()) throw ConfigError(std::string(where) + ": \"kind\" must be a string");
    const std::string kind = kj.get<std::string>();
    try {
        if (kind == "exponential")
            return DistributionSpec::exponential(detail::require_number(j, "rate", where));
        if (kind == "pareto")
            return DistributionSpec::pareto(detail::require_number(j, "xm", where),
                                            detail::require_number(j, "alpha", where));
        if (kind == "deterministic")
            return DistributionSpec::deterministic(detail::require_number(j, "value", where));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(where) + ": " + e.what());
    }
    throw ConfigError(std::string(where) + ": unknown distribution kind \"" + kind + "\"");
}

inline PolicyConfig parse_policy(const json& j) {
    const char* where = "policy";
    const json& kj = detail::require_field(j, "kind", where);
    if (!kj.is_string()) throw ConfigError("policy: \"kind\" must be a string");
    const std::string kind = kj.get<std::string>();
    PolicyConfig p;
    if (kind == "fixed_threshold") {
        p.kind = PolicyConfig::Kind::fixed;
        p.theta = Threshold{detail::number_or_inf(j, "theta", where)};
    } else if (kind == "randomized_threshold") {
        p.kind = PolicyConfig::Kind::randomized;
        p.theta_dist = parse_distribution(detail::require_field(j, "theta_dist", where),
                                          "policy.theta_dist");
    } else if (kind == "transmission_aware") {
        p.kind = PolicyConfig::Kind::transmission_aware;
        p.beta = detail::number_or_inf(j, "beta", where);
    } else if (kind == "mean_threshold") {
        p.kind = PolicyConfig::Kind::mean;
    } else if (kind == "optimal") {
        p.kind = PolicyConfig::Kind::optimal;
    } else {
        throw ConfigError("policy: unknown kind \"" + kind + "\"");
    }
    return p;
}

// full=false relaxes the system/distribution/policy requirement; the
// validate command only needs run sizes and check selection
inline ExperimentConfig parse_config(const json& j, bool full = true) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    ExperimentConfig cfg;

    if (full || j.contains("system")) {
        const json& sys = detail::require_field(j, "system", "config");
        if (!sys.is_string()) throw ConfigError("config: \"system\" must be a string");
        const std::string s = sys.get<std::string>();
        if (s == "non_preemptive")
            cfg.discipline = sim::Discipline::non_preemptive;
        else if (s == "preemptive")
            cfg.discipline = sim::Discipline::preemptive;
        else
            throw ConfigError("config: system must be \"non_preemptive\" or \"preemptive\"");
    }

    if (full || j.contains("transmission"))
        cfg.T = parse_distribution(detail::require_field(j, "transmission", "config"),
                                   "transmission");
    if (full || j.contains("computation"))
        cfg.C = parse_distribution(detail::require_field(j, "computation", "config"),
                                   "computation");
    if (full || j.contains("policy"))
        cfg.policy = parse_policy(detail::require_field(j, "policy", "config"));

    if (j.contains("sim")) {
        const json& sj = j.at("sim");
        if (!sj.is_object()) throw ConfigError("config: \"sim\" must be an object");
        auto count = [&](const char* key, std::uint64_t dflt) -> std::uint64_t {
            if (!sj.contains(key)) return dflt;
            if (!sj.at(key).is_number_integer() || sj.at(key).get<long long>() < 0)
                throw ConfigError(std::string("sim: \"") + key +
                                  "\" must be a nonnegative integer");
            return sj.at(key).get<std::uint64_t>();
        };
        cfg.packets = count("packets", cfg.packets);
        cfg.seed = count("seed", cfg.seed);
        cfg.batches = count("batches", cfg.batches);
    }

    if (j.contains("sweep")) {
        const json& wj = j.at("sweep");
        if (!wj.is_object()) throw ConfigError("config: \"sweep\" must be an object");
        SweepSettings sw;
        const json& grid = detail::require_field(wj, "ratio_grid", "sweep");
        if (!grid.is_array() || grid.empty())
            throw ConfigError("sweep: \"ratio_grid\" must be a nonempty array");
        for (const auto& g : grid) {
            if (!g.is_number() || !(g.get<double>() > 0.0) || !std::isfinite(g.get<double>()))
                throw ConfigError("sweep: ratio_grid entries must be finite and positive");
            sw.ratio_grid.push_back(g.get<double>());
        }
        if (wj.contains("total_mean")) {
            if (!wj.at("total_mean").is_number() || !(wj.at("total_mean").get<double>() > 0.0))
                throw ConfigError("sweep: \"total_mean\" must be positive");
            sw.total_mean = wj.at("total_mean").get<double>();
        }
        cfg.sweep = sw;
    }

    if (j.contains("checks")) {
        const json& cj = j.at("checks");
        if (!cj.is_array()) throw ConfigError("config: \"checks\" must be an array");
        cfg.checks_given = true;
        for (const auto& c : cj) {
            if (!c.is_number_integer() || c.get<int>() < 1 || c.get<int>() > 11)
                throw ConfigError("config: check ids must be integers in [1, 11]");
            cfg.checks.push_back(c.get<int>());
        }
    }
    if (j.contains("tolerance_scale")) {
        if (!j.at("tolerance_scale").is_number() ||
            !(j.at("tolerance_scale").get<double>() > 0.0))
            throw ConfigError("config: \"tolerance_scale\" must be positive");
        cfg.tolerance_scale = j.at("tolerance_scale").get<double>();
    }
    return cfg;
}

// ---- row rendering ----

namespace detail {

inline std::string num17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string numshort(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

inline std::string dist_text(const DistributionSpec& d) {
    switch (d.kind()) {
        case Kind::exponential: return "exponential(" + numshort(d.rate()) + ")";
        case Kind::pareto:
            return "pareto(" + numshort(d.xm()) + "," + numshort(d.alpha()) + ")";
        case Kind::deterministic: return "deterministic(" + numshort(d.value()) + ")";
    }
    return "?";
}

inline json number_or_null(double x) {
    if (std::isnan(x)) return json();
    return json(x);
}

}  // namespace detail

inline std::string policy_text(const PolicyConfig& p) {
    switch (p.kind) {
        case PolicyConfig::Kind::fixed:
            return "fixed_threshold(" + detail::numshort(p.theta.value) + ")";
        case PolicyConfig::Kind::randomized:
            return "randomized_threshold(" + detail::dist_text(*p.theta_dist) + ")";
        case PolicyConfig::Kind::transmission_aware:
            return "transmission_aware(" + detail::numshort(p.beta) + ")";
        case PolicyConfig::Kind::mean: return "mean_threshold";
        case PolicyConfig::Kind::optimal: return "optimal";
    }
    return "?";
}

inline const char* system_text(sim::Discipline d) {
    return d == sim::Discipline::non_preemptive ? "non_preemptive" : "preemptive";
}

inline std::string csv_header() {
    return "ratio,system,policy,threshold,paoi_analytic,paoi_sim,paoi_stderr,aoi_sim,"
           "delivery_ratio";
}

inline std::string to_csv(const ResultRow& r) {
    using detail::num17;
    return num17(r.ratio) + "," + r.system + "," + r.policy + "," + num17(r.threshold) + "," +
           num17(r.paoi_analytic) + "," + num17(r.paoi_sim) + "," + num17(r.paoi_stderr) +
           "," + num17(r.aoi_sim) + "," + num17(r.delivery_ratio);
}

inline json to_json(const ResultRow& r) {
    json j;
    j["ratio"] = detail::number_or_null(r.ratio);
    j["system"] = r.system;
    j["policy"] = r.policy;
    if (std::isinf(r.threshold))
        j["threshold"] = "inf";
    else
        j["threshold"] = detail::number_or_null(r.threshold);
    j["paoi_analytic"] = detail::number_or_null(r.paoi_analytic);
    j["paoi_sim"] = detail::number_or_null(r.paoi_sim);
    j["paoi_stderr"] = detail::number_or_null(r.paoi_stderr);
    j["aoi_sim"] = detail::number_or_null(r.aoi_sim);
    j["delivery_ratio"] = detail::number_or_null(r.delivery_ratio);
    return j;
}

inline std::string format_rows(const std::vector<ResultRow>& rows, const std::string& format) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back(to_json(r));
        return arr.dump(2) + "\n";
    }
    if (format != "csv") throw ConfigError("format must be \"csv\" or \"json\"");
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) out += to_csv(r) + "\n";
    return out;
}

// ---- analytic dispatch ----

// scalar summarizing the policy in the threshold column
inline double policy_threshold_value(const PolicyConfig& p, const DistributionSpec& C) {
    switch (p.kind) {
        case PolicyConfig::Kind::fixed: return p.theta.value;
        case PolicyConfig::Kind::randomized: return p.theta_dist->mean();
        case PolicyConfig::Kind::transmission_aware: return p.beta;
        case PolicyConfig::Kind::mean: return C.mean();
        case PolicyConfig::Kind::optimal: return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// nullopt when no analytic evaluator exists for the combination
inline std::optional<double> analytic_paoi(sim::Discipline d, const DistributionSpec& T,
                                           const DistributionSpec& C, const PolicyConfig& p) {
    if (d == sim::Discipline::non_preemptive) {
        switch (p.kind) {
            case PolicyConfig::Kind::fixed:
                return nonpreemptive::paoi_wop(p.theta, T, C).paoi;
            case PolicyConfig::Kind::randomized:
                return nonpreemptive::paoi_wop_randomized(*p.theta_dist, T, C);
            case PolicyConfig::Kind::transmission_aware:
                return nonpreemptive::paoi_wop_transmission_aware(p.beta, T, C);
            case PolicyConfig::Kind::mean:
                return nonpreemptive::paoi_wop(Threshold{C.mean()}, T, C).paoi;
            case PolicyConfig::Kind::optimal: return std::nullopt;
        }
    }
    switch (p.kind) {
        case PolicyConfig::Kind::fixed:
            return preemptive::paoi_wp(preemptive::WaitFunction::fixed(p.theta), T, C).paoi;
        case PolicyConfig::Kind::transmission_aware:
            return preemptive::paoi_wp(preemptive::WaitFunction::transmission_aware(p.beta), T,
                                       C)
                .paoi;
        case PolicyConfig::Kind::mean:
            return preemptive::paoi_wp(preemptive::WaitFunction::fixed(Threshold{C.mean()}), T,
                                       C)
                .paoi;
        default: return std::nullopt;
    }
}

inline std::optional<double> analytic_delivery(sim::Discipline d, const DistributionSpec& T,
                                               const DistributionSpec& C,
                                               const PolicyConfig& p) {
    if (d == sim::Discipline::non_preemptive) return 1.0;
    switch (p.kind) {
        case PolicyConfig::Kind::fixed:
            return preemptive::paoi_wp(preemptive::WaitFunction::fixed(p.theta), T, C)
                .prob_success;
        case PolicyConfig::Kind::transmission_aware:
            return preemptive::paoi_wp(preemptive::WaitFunction::transmission_aware(p.beta), T,
                                       C)
                .prob_success;
        case PolicyConfig::Kind::mean:
            return preemptive::paoi_wp(preemptive::WaitFunction::fixed(Threshold{C.mean()}), T,
                                       C)
                .prob_success;
        default: return std::nullopt;
    }
}

inline sim::PolicySpec to_sim_policy(const PolicyConfig& p) {
    switch (p.kind) {
        case PolicyConfig::Kind::fixed: return sim::PolicySpec::fixed(p.theta);
        case PolicyConfig::Kind::randomized: return sim::PolicySpec::randomized(*p.theta_dist);
        case PolicyConfig::Kind::transmission_aware:
            return sim::PolicySpec::transmission_aware(p.beta);
        case PolicyConfig::Kind::mean: return sim::PolicySpec::mean_threshold();
        case PolicyConfig::Kind::optimal:
            throw ConfigError("policy \"optimal\" must be optimized, not simulated directly");
    }
    throw ConfigError("unknown policy kind");
}

// ---- commands ----

inline ResultRow cmd_eval(const ExperimentConfig& cfg) {
    const auto& T = *cfg.T;
    const auto& C = *cfg.C;
    if (cfg.policy.kind == PolicyConfig::Kind::optimal)
        throw ConfigError("eval needs a concrete policy; use the optimize command");
    if (cfg.discipline == sim::Discipline::preemptive &&
        cfg.policy.kind == PolicyConfig::Kind::randomized)
        throw ConfigError("randomized_threshold analytic evaluation is non-preemptive only");

    ResultRow row;
    row.ratio = T.mean() / C.mean();
    row.system = system_text(cfg.discipline);
    row.policy = policy_text(cfg.policy);
    row.threshold = policy_threshold_value(cfg.policy, C);
    row.paoi_analytic = *analytic_paoi(cfg.discipline, T, C, cfg.policy);
    row.delivery_ratio = *analytic_delivery(cfg.discipline, T, C, cfg.policy);
    return row;
}

struct OptimizeOutcome {
    ResultRow row;
    json trace;
    bool converged = true;
};

namespace detail {

inline json trace_steps_json(const preemptive::DinkelbachTrace& tr) {
    json steps = json::array();
    for (const auto& s : tr.steps) {
        json step;
        step["c"] = s.c;
        step["threshold"] = std::isinf(s.inner.value) ? json("inf") : json(s.inner.value);
        step["p"] = s.p_of_c;
        steps.push_back(step);
    }
    return steps;
}

inline json trace_json(const std::string& method, double threshold, double paoi,
                       bool converged, int iterations, double residual,
                       json steps = json::array()) {
    json t;
    t["method"] = method;
    t["threshold"] = std::isinf(threshold) ? json("inf") : json(threshold);
    t["paoi"] = paoi;
    t["converged"] = converged;
    t["iterations"] = iterations;
    t["residual"] = number_or_null(residual);
    t["steps"] = std::move(steps);
    return t;
}

}  // namespace detail

inline OptimizeOutcome cmd_optimize(const ExperimentConfig& cfg) {
    const auto& T = *cfg.T;
    const auto& C = *cfg.C;
    const auto pk = cfg.policy.kind;
    if (pk == PolicyConfig::Kind::randomized)
        throw ConfigError("no optimizer for randomized thresholds");
    if (pk == PolicyConfig::Kind::mean)
        throw ConfigError("mean_threshold has no free parameter to optimize");

    OptimizeOutcome out;
    out.row.ratio = T.mean() / C.mean();
    out.row.system = system_text(cfg.discipline);
    out.row.delivery_ratio = 1.0;

    if (cfg.discipline == sim::Discipline::non_preemptive) {
        if (pk == PolicyConfig::Kind::transmission_aware) {
            const auto r = nonpreemptive::optimize_transmission_aware_wop(T, C);
            out.row.policy = "transmission_aware_optimal";
            out.row.threshold = r.threshold.value;
            out.row.paoi_analytic = r.paoi;
            out.trace = detail::trace_json("window grid with golden-section refinement",
                                           r.threshold.value, r.paoi, r.converged,
                                           r.iterations, r.residual);
            out.converged = r.converged;
            return out;
        }
        OptimizationResult r;
        std::string method;
        if (C.kind() == Kind::exponential) {
            r = nonpreemptive::optimal_threshold_exp_C(T, C.rate());
            method = "transform dichotomy (exponential computation)";
        } else if (T.kind() == Kind::exponential) {
            r = nonpreemptive::optimize_threshold_exp_T(T.rate(), C);
            method = "piecewise bisection on the stationarity residual";
        } else {
            r = nonpreemptive::optimize_threshold_general(T, C);
            method = "quantile grid with golden-section refinement";
        }
        out.row.policy = "fixed_optimal";
        out.row.threshold = r.threshold.value;
        out.row.paoi_analytic = r.paoi;
        out.trace = detail::trace_json(method, r.threshold.value, r.paoi, r.converged,
                                       r.iterations, r.residual);
        out.trace["degenerate"] = r.degenerate;
        out.converged = r.converged;
        return out;
    }

    if (pk == PolicyConfig::Kind::optimal) {
        if (C.kind() != Kind::exponential)
            throw ConfigError("policy \"optimal\" requires exponential computation");
        const auto r = preemptive::optimal_policy_exp_C(T, C.rate());
        out.row.policy = "optimal";
        out.row.threshold = r.threshold.value;
        out.row.paoi_analytic = r.paoi;
        out.row.delivery_ratio = *analytic_delivery(
            cfg.discipline, T, C,
            PolicyConfig{PolicyConfig::Kind::transmission_aware, {}, {}, r.threshold.value});
        out.trace = detail::trace_json("stationary-slope fixed point", r.threshold.value,
                                       r.paoi, r.converged, r.iterations, r.residual);
        out.converged = r.converged;
        return out;
    }

    const bool ta = pk == PolicyConfig::Kind::transmission_aware;
    const auto r = ta ? preemptive::optimize_transmission_aware_wp(T, C)
                      : preemptive::optimize_fixed_threshold_wp(T, C);
    PolicyConfig evalp;
    if (ta) {
        evalp.kind = PolicyConfig::Kind::transmission_aware;
        evalp.beta = r.result.threshold.value;
    } else {
        evalp.kind = PolicyConfig::Kind::fixed;
        evalp.theta = r.result.threshold;
    }
    out.row.policy = ta ? "transmission_aware_optimal" : "fixed_optimal";
    out.row.threshold = r.result.threshold.value;
    out.row.paoi_analytic = r.result.paoi;
    out.row.delivery_ratio = *analytic_delivery(cfg.discipline, T, C, evalp);
    out.trace = detail::trace_json("ratio linearization", r.result.threshold.value,
                                   r.result.paoi, r.result.converged, r.result.iterations,
                                   r.result.residual, detail::trace_steps_json(r.trace));
    out.converged = r.result.converged;
    return out;
}

inline ResultRow cmd_simulate(const ExperimentConfig& cfg) {
    const auto& T = *cfg.T;
    const auto& C = *cfg.C;
    const sim::SystemConfig sc{cfg.discipline, T, C};
    const auto res = sim::simulate(sc, to_sim_policy(cfg.policy), cfg.packets, cfg.seed,
                                   cfg.batches);
    ResultRow row;
    row.ratio = T.mean() / C.mean();
    row.system = system_text(cfg.discipline);
    row.policy = policy_text(cfg.policy);
    row.threshold = policy_threshold_value(cfg.policy, C);
    if (const auto a = analytic_paoi(cfg.discipline, T, C, cfg.policy)) row.paoi_analytic = *a;
    row.paoi_sim = res.avg_paoi;
    row.paoi_stderr = res.paoi_stderr;
    row.aoi_sim = res.avg_aoi;
    row.delivery_ratio = res.delivery_ratio;
    return row;
}

namespace detail {

inline DistributionSpec family_with_mean(Kind kind, double mean) {
    switch (kind) {
        case Kind::exponential: return DistributionSpec::exponential(1.0 / mean);
        case Kind::pareto: return DistributionSpec::pareto(mean / 2.0, 2.0);
        case Kind::deterministic: return DistributionSpec::deterministic(mean);
    }
    throw ConfigError("unknown distribution family");
}

}  // namespace detail

// For each ratio and both disciplines: the optimized fixed window, the
// optimized transmission-aware window, and the mean-of-computation baseline,
// each optimized analytically and then simulated with shared RNG streams.
inline std::vector<ResultRow> cmd_sweep(const ExperimentConfig& cfg,
                                        std::vector<std::string>* log = nullptr) {
    if (!cfg.sweep) throw ConfigError("sweep requires a \"sweep\" block");
    const auto& sw = *cfg.sweep;
    std::vector<double> ratios = sw.ratio_grid;
    std::sort(ratios.begin(), ratios.end());

    const sim::Discipline systems[2] = {sim::Discipline::non_preemptive,
                                        sim::Discipline::preemptive};
    const char* policies[3] = {"fixed_optimal", "mean_threshold",
                               "transmission_aware_optimal"};

    std::vector<ResultRow> rows;
    for (double r : ratios) {
        const double mt = sw.total_mean * r / (1.0 + r);
        const double mc = sw.total_mean / (1.0 + r);
        const auto T = detail::family_with_mean(cfg.T->kind(), mt);
        const auto C = detail::family_with_mean(cfg.C->kind(), mc);
        for (const auto d : systems) {
            for (const char* pname : policies) {
                ResultRow row;
                row.ratio = r;
                row.system = system_text(d);
                row.policy = pname;
                PolicyConfig pol;
                try {
                    const std::string name(pname);
                    if (name == "mean_threshold") {
                        pol.kind = PolicyConfig::Kind::mean;
                        row.threshold = mc;
                    } else {
                        ExperimentConfig sub = cfg;
                        sub.discipline = d;
                        sub.T = T;
                        sub.C = C;
                        sub.policy.kind = name == "fixed_optimal"
                                              ? PolicyConfig::Kind::fixed
                                              : PolicyConfig::Kind::transmission_aware;
                        const auto opt = cmd_optimize(sub);
                        row.threshold = opt.row.threshold;
                        if (name == "fixed_optimal") {
                            pol.kind = PolicyConfig::Kind::fixed;
                            pol.theta = Threshold{opt.row.threshold};
                        } else {
                            pol.kind = PolicyConfig::Kind::transmission_aware;
                            pol.beta = opt.row.threshold;
                        }
                    }
                    if (const auto a = analytic_paoi(d, T, C, pol)) row.paoi_analytic = *a;
                    const sim::SystemConfig sc{d, T, C};
                    const auto res =
                        sim::simulate(sc, to_sim_policy(pol), cfg.packets, cfg.seed,
                                      cfg.batches);
                    row.paoi_sim = res.avg_paoi;
                    row.paoi_stderr = res.paoi_stderr;
                    row.aoi_sim = res.avg_aoi;
                    row.delivery_ratio = res.delivery_ratio;
                } catch (const std::exception& e) {
                    if (log)
                        log->push_back(std::string("cell ratio=") + detail::numshort(r) + " " +
                                       row.system + " " + row.policy + ": " + e.what());
                }
                rows.push_back(row);
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        if (a.system != b.system) return a.system < b.system;
        return a.policy < b.policy;
    });
    return rows;
}

}  // namespace paoi::experiment
