#pragma once

#include "eigengrowth/eigen1d.hpp"
#include "eigengrowth/sde.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eigengrowth {

enum class ScenarioKind {
    eigen,
    classify,
    simulate,
    growth,
    numeraire,
    arbitrage,
    verify_example,
    robustness_sweep,
};

std::string to_string(ScenarioKind k);
/// Accepts the hyphenated CLI spelling; throws ConfigError listing the kinds.
ScenarioKind parse_scenario_kind(const std::string& s);

/// One batch run. Defaults match the key defaults documented in docs/config.md.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::eigen;

    // [model]
    std::string example;
    std::string c_expr;
    std::optional<double> alpha, beta;
    Point x0;

    // [sim]
    SimConfig sim;
    /// True when the config file set sim.threads (the env fallback then yields).
    bool threads_from_file = false;
    /// True when sim.absorb_level was given; otherwise it is fitted to x0.
    bool absorb_level_from_file = false;
    std::string measure = "pstar";
    bool identity = false;
    std::vector<double> tail_times;

    // [solver]
    EigenSolveOptions solver;
    double residual_gate = 1e-4;

    // [growth]
    std::optional<double> gamma_lo, gamma_hi;
    double gamma_step = 0.01;
    double growth_tolerance = 0.1;

    // [numeraire]
    std::vector<std::string> candidates{"zero", "half"};
    std::size_t checkpoints = 20;

    // [arbitrage]
    double arbitrage_t = 1.0;
    std::vector<double> arbitrage_horizons{4.0, 16.0, 64.0, 256.0};

    // [sweep]
    std::vector<std::string> drifts;
    bool include_pstar = true;
    int compact_level = 4;
    double tightness_threshold = 0.99;

    // [output]
    std::string out_dir;

    /// Checks every numeric field against the owning module's preconditions.
    void validate() const;
};

/// Parses the INI-style text; unknown sections or keys are ConfigErrors.
ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});

/// Worker count from ROBUST_GROWTH_THREADS, or nullopt when unset.
std::optional<std::size_t> threads_from_env();

std::vector<double> parse_number_list(const std::string& s, const std::string& key);
double parse_number(const std::string& s, const std::string& key);

}  // namespace eigengrowth
