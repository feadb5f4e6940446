#pragma once

#include "eigengrowth/eigenpair.hpp"
#include "eigengrowth/model.hpp"
#include "eigengrowth/sde.hpp"

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace eigengrowth {

/// Wealth along one simulated path, on the ensemble's recorded time grid.
struct WealthPath {
    std::vector<double> t;
    std::vector<double> v;
    /// The underlying state path was absorbed; V is frozen at its last value.
    bool absorbed = false;
    /// The wealth itself hit zero (integrated strategies only).
    bool ruined = false;

    double terminal() const { return v.back(); }
};

/// V*_t = e^{λt} η(X_t) / η(X_0).
std::vector<WealthPath> wealth_star(const Eigenpair& pair, const PathEnsemble& ens);

/// Position θ(x, V) in each asset given the state and current wealth.
using Strategy = std::function<void(std::span<const double> x, double v, std::span<double> out)>;

/// V_{k+1} = V_k + θ(X_k, V_k)'(X_{k+1} − X_k) from V_0 = 1 on the recorded grid;
/// a path whose wealth reaches 0 stays at 0.
std::vector<WealthPath> wealth_integrate(const Strategy& theta, const PathEnsemble& ens);

/// θ = V ∇log η, the strategy whose continuous-time wealth is V*.
Strategy eigen_strategy(const Eigenpair& pair);

struct GrowthReport {
    double horizon = 0.0;
    std::vector<double> gammas;
    /// Fraction of used paths with (1/t) log V_t ≥ γ.
    std::vector<double> fractions;
    /// Largest grid γ whose fraction is ≥ 0.95 (−inf when none).
    double g_hat = -std::numeric_limits<double>::infinity();
    /// Empirical 5% quantile of (1/t) log V_t, the continuous version of g_hat.
    double g_quantile = 0.0;
    /// Quantiles of (1/t) log V_t at levels 0.05, 0.25, 0.5, 0.75, 0.95.
    std::vector<double> quantiles;
    std::size_t used = 0;
    std::size_t skipped_absorbed = 0;
};

inline constexpr double kGrowthThreshold = 0.95;

/// Skips paths whose state was absorbed; ruined wealth counts as −inf growth.
/// Throws EmptyReportError when no path is usable.
GrowthReport growth_rate(const std::vector<WealthPath>& paths, const std::vector<double>& gamma_grid);

/// Uniform grid [lo, hi] with the given step.
std::vector<double> gamma_grid(double lo, double hi, double step);

struct SweepRow {
    std::string drift;
    double g_hat = 0.0;
    double g_quantile = 0.0;
    bool tight = false;
    double time_in_compact = 0.0;
    double absorbed_fraction = 0.0;
    /// g_hat ≥ λ − tolerance; only asserted when tight.
    bool claim_holds = false;
};

struct SweepOptions {
    /// K is the closure of E_{compact_level}.
    int compact_level = 4;
    double tightness_threshold = 0.99;
    double tolerance = 0.1;
    std::vector<double> gammas;
};

std::vector<SweepRow> robustness_sweep(const Eigenpair& pair, const DomainSpec& domain,
                                       const CovarianceField& c,
                                       const std::vector<DriftField>& drifts, const Point& x0,
                                       const SimConfig& cfg, const SweepOptions& options = {});

struct NumeraireResult {
    std::vector<double> times;
    std::vector<double> mean_ratio;
    std::vector<double> std_error;
    bool monotone_pass = true;
};

/// Mean of V_t / V*_t under ℙ* on `checkpoints` evenly spaced recorded times
/// (cfg.record_every must be ≥ 1);
/// passes when no consecutive increase exceeds 3 combined standard errors.
NumeraireResult numeraire_check(const Eigenpair& pair, const DomainSpec& domain,
                                const CovarianceField& c, const Strategy& candidate,
                                const Point& x0, const SimConfig& cfg, std::size_t checkpoints = 20);

/// V^T_t = U(T − t, X_t) / U(T, x_0) with U(s, x) = 2Φ(x/√s) − 1 (Brownian motion
/// absorbed at 0). Throws RangeError when a time is ≥ T.
WealthPath optimal_arbitrage_closed_form(const std::vector<double>& times,
                                         const std::vector<double>& xs, double T);

struct ArbitrageRow {
    double T = 0.0;
    double median_sup_deviation = 0.0;
    double p95_sup_deviation = 0.0;
    double mean_density_gap = 0.0;
};

struct ArbitrageReport {
    double t = 0.0;
    std::vector<ArbitrageRow> rows;
    bool sup_deviation_decreasing = false;
    bool density_gap_decreasing = false;
};

/// Brownian motion on (0, ∞) with η*(x) = x, λ* = 0: simulates ℙ* (the 3-d Bessel
/// process) to horizon t and compares V^T with V* = X for each T in T_list.
ArbitrageReport arbitrage_convergence(double t, const std::vector<double>& T_list,
                                      const SimConfig& cfg, double x0 = 1.0);

}  // namespace eigengrowth
