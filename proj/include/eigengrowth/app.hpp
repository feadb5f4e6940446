#pragma once

#include "eigengrowth/config.hpp"
#include "eigengrowth/report.hpp"

#include <iosfwd>
#include <string>

namespace eigengrowth {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitGateFailed = 2;

/// Validates, dispatches to the owning module and assembles the report.
/// The body holds "scenario", "version", "inputs", "results", "gate",
/// "status" and a "runtime" block (wall clock, workers). Errors propagate.
Report run_scenario(const ScenarioConfig& cfg);

/// Runs the scenario, prints the JSON report to `out`, writes report files
/// when cfg.out_dir is set and maps the outcome to an exit status. Error
/// messages go to `err` as "[module] message".
int run_and_report(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);

/// One line per registry entry: "name  description".
std::string list_examples();

}  // namespace eigengrowth
