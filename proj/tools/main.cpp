#include "eigengrowth/app.hpp"
#include "eigengrowth/config.hpp"
#include "eigengrowth/error.hpp"
#include "eigengrowth/version.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace eigengrowth;

int main(int argc, char** argv) {
    CLI::App app{"Robust growth-optimal portfolios: eigenpairs, exit simulation and growth reports"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, example, c_expr, measure;
    std::vector<double> interval, x0;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads, n_paths;
    std::optional<double> dt, horizon;
    bool identity = false;

    app.add_option("--config", config_path, "Scenario config file (INI with sections)");
    app.add_option("--seed", seed, "Random seed (u64)");
    app.add_option("--threads", threads, "Worker threads (fallback: ROBUST_GROWTH_THREADS)");
    app.add_option("--out", out_dir, "Directory for the JSON report and CSV sidecars");
    app.add_option("--example", example, "Registry model name (see list-examples)");
    app.add_option("--c", c_expr, "Inline 1-D covariance expression in x");
    app.add_option("--interval", interval, "Interval endpoints alpha beta")->expected(2);
    app.add_option("--x0", x0, "Initial point")->expected(1, 16);
    app.add_option("--n-paths", n_paths, "Number of simulated paths");
    app.add_option("--dt", dt, "Base time step");
    app.add_option("--horizon", horizon, "Simulation horizon T");
    app.add_option("--measure", measure, "Simulated law: q or pstar");
    app.add_flag("--identity", identity, "simulate: also run the exit-probability identity check");

    std::optional<ScenarioKind> kind;
    std::string verify_name;
    auto sub = [&](const char* name, ScenarioKind k, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->callback([&kind, k] { kind = k; });
        return s;
    };
    sub("eigen", ScenarioKind::eigen, "Principal eigenpair of a 1-D model");
    sub("classify", ScenarioKind::classify, "Sign of lambda, explosion and recurrence tests");
    sub("simulate", ScenarioKind::simulate, "Simulate paths and report exit statistics");
    sub("growth", ScenarioKind::growth, "Growth rate of V* under the simulated law");
    sub("numeraire", ScenarioKind::numeraire, "Numeraire property check against V*");
    sub("arbitrage", ScenarioKind::arbitrage, "Convergence of optimal arbitrage to V*");
    sub("robustness-sweep", ScenarioKind::robustness_sweep, "Growth of V* across drifts");
    sub("verify-example", ScenarioKind::verify_example, "PDE residual of a registry eigenpair")
        ->add_option("name", verify_name, "Registry name");
    CLI::App* run = app.add_subcommand("run", "Run the scenario kind named in --config");
    CLI::App* list = app.add_subcommand("list-examples", "List the example registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "[cli] " << e.what() << "\n";
        return kExitError;
    }

    if (list->parsed()) {
        std::cout << list_examples();
        return kExitPass;
    }

    try {
        ScenarioConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (kind) {
            cfg.kind = *kind;
        } else if (run->parsed() && config_path.empty()) {
            throw ConfigError("cli", "run needs --config");
        }
        if (!verify_name.empty()) cfg.example = verify_name;
        if (!example.empty()) {
            cfg.example = example;
            cfg.c_expr.clear();
        }
        if (!c_expr.empty()) {
            cfg.c_expr = c_expr;
            cfg.example.clear();
        }
        if (!interval.empty()) {
            cfg.alpha = interval[0];
            cfg.beta = interval[1];
        }
        if (!x0.empty()) cfg.x0 = x0;
        if (seed) cfg.sim.seed = *seed;
        if (n_paths) cfg.sim.n_paths = *n_paths;
        if (dt) cfg.sim.dt = *dt;
        if (horizon) cfg.sim.T = *horizon;
        if (!measure.empty()) cfg.measure = measure;
        if (identity) cfg.identity = true;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (threads) {
            cfg.sim.threads = *threads;
        } else if (!cfg.threads_from_file) {
            if (const auto env = threads_from_env()) cfg.sim.threads = *env;
        }
        return run_and_report(cfg, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
}
