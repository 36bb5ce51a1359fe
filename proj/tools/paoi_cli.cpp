#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paoi/experiment.hpp"
#include "paoi/numerics.hpp"
#include "paoi/validate.hpp"

namespace {

using paoi::experiment::ConfigError;
using nlohmann::json;

struct CommonOpts {
    std::string config_path;
    std::string output_path;  // empty = stdout
    std::string format = "csv";
    long long packets = -1;  // -1 = keep config value
    long long seed = -1;
};

void attach(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--output", o.output_path, "output file (default: stdout)");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--packets", o.packets, "override sim.packets");
    cmd->add_option("--seed", o.seed, "override sim.seed");
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return j;
}

paoi::experiment::ExperimentConfig load_config(const CommonOpts& o, bool full = true) {
    auto cfg = paoi::experiment::parse_config(load_json(o.config_path), full);
    if (o.packets >= 0) cfg.packets = std::uint64_t(o.packets);
    if (o.seed >= 0) cfg.seed = std::uint64_t(o.seed);
    return cfg;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << text;
}

int run(int argc, char** argv) {
    CLI::App app{"peak-age analysis and simulation for a two-stage update pipeline"};
    app.require_subcommand(1);
    CommonOpts eo, oo, so, wo, vo;
    attach(app.add_subcommand("eval", "evaluate one policy analytically"), eo);
    attach(app.add_subcommand("optimize", "optimize the configured policy family"), oo);
    attach(app.add_subcommand("simulate", "Monte Carlo run of the configured policy"), so);
    attach(app.add_subcommand("sweep", "optimize and simulate across a ratio grid"), wo);
    attach(app.add_subcommand("validate", "run the built-in validation matrix"), vo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    namespace ex = paoi::experiment;

    if (app.got_subcommand("eval")) {
        const auto cfg = load_config(eo);
        emit(ex::format_rows({ex::cmd_eval(cfg)}, eo.format), eo.output_path);
        return 0;
    }

    if (app.got_subcommand("optimize")) {
        const auto cfg = load_config(oo);
        const auto out = ex::cmd_optimize(cfg);
        emit(ex::format_rows({out.row}, oo.format), oo.output_path);
        const std::string trace_path =
            oo.output_path.empty() ? "paoi_optimize.trace.json" : oo.output_path + ".trace.json";
        emit(out.trace.dump(2) + "\n", trace_path);
        if (!out.converged) {
            std::cerr << "optimize: search did not converge; see " << trace_path << "\n";
            return 4;
        }
        return 0;
    }

    if (app.got_subcommand("simulate")) {
        const auto cfg = load_config(so);
        emit(ex::format_rows({ex::cmd_simulate(cfg)}, so.format), so.output_path);
        return 0;
    }

    if (app.got_subcommand("sweep")) {
        const auto cfg = load_config(wo);
        std::vector<std::string> log;
        const auto rows = ex::cmd_sweep(cfg, &log);
        for (const auto& line : log) std::cerr << "sweep: " << line << "\n";
        emit(ex::format_rows(rows, wo.format), wo.output_path);
        return 0;
    }

    // validate: JSON report regardless of --format, nonzero exit on any failure
    const auto cfg = load_config(vo, false);
    paoi::validate::Settings settings;
    settings.packets = cfg.packets;
    settings.seed = cfg.seed;
    settings.batches = cfg.batches;
    settings.tolerance_scale = cfg.tolerance_scale;
    std::vector<int> ids;
    if (cfg.checks_given)
        ids = cfg.checks;
    else
        for (int i = 1; i <= 11; ++i) ids.push_back(i);

    json report;
    report["checks"] = json::array();
    int failed = 0;
    for (int id : ids) {
        const auto r = paoi::validate::run_one(id, settings);
        json rj;
        rj["id"] = r.id;
        rj["name"] = r.name;
        rj["pass"] = r.pass;
        rj["detail"] = r.detail;
        report["checks"].push_back(rj);
        if (!r.pass) ++failed;
    }
    report["passed"] = int(ids.size()) - failed;
    report["failed"] = failed;
    report["all_pass"] = failed == 0;
    if (ids.empty()) {
        report["warning"] = "no checks selected; result is vacuous";
        std::cerr << "validate: no checks selected; result is vacuous\n";
    }
    emit(report.dump(2) + "\n", vo.output_path);
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const paoi::num::QuadratureError& e) {
        std::cerr << "quadrature error: " << e.what() << "\n";
        return 3;
    } catch (const paoi::experiment::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
