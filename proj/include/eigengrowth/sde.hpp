#pragma once

#include "eigengrowth/eigenpair.hpp"
#include "eigengrowth/model.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace eigengrowth {

enum class Scheme {
    euler,
    /// Euler–Maruyama on log X (orthant only); exact for geometric Brownian motion.
    log_euler,
};

struct SimConfig {
    double T = 1.0;
    double dt = 1e-3;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 0;
    /// Index of the E_n taken as the effective interior; x0 must lie in it.
    int absorb_level = 8;
    int max_refine = 8;
    /// Store every k-th state; 0 keeps only the initial and final states.
    std::size_t record_every = 0;
    bool track_levels = true;
    std::size_t threads = 1;
    /// Synthetic outer boundary for unbounded coordinates.
    double outer_radius = 1e6;
    Scheme scheme = Scheme::euler;

    /// Throws PreconditionError when a field is out of range.
    void validate() const;
};

/// Law of the simulated coordinate process.
struct Measure {
    enum class Kind { q, pstar, drift };
    Kind kind = Kind::q;
    Eigenpair pair;
    DriftField drift;

    /// Driftless dX = σ(X)dW.
    static Measure q();
    /// Drift c∇log η.
    static Measure pstar(Eigenpair pair);
    static Measure with_drift(DriftField b);
    std::string name() const;
};

/// Simulated paths. States are stored path-major on the recorded time grid; a
/// path's states after its absorption are NaN.
struct PathEnsemble {
    std::size_t n_paths = 0;
    std::size_t dim = 1;
    double T = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t record_every = 0;
    int levels = 0;
    DomainSpec domain = DomainSpec::interval(0.0, 1.0);
    std::vector<double> times;
    std::vector<std::size_t> record_steps;
    std::vector<double> states;
    /// Last state inside E (the final state for surviving paths).
    std::vector<double> last_state;
    std::vector<double> exit_time;
    /// Row per path, one column per exhaustion level; +inf when never left.
    std::vector<double> level_exit;
    std::vector<std::uint8_t> absorbed;
    std::vector<std::uint8_t> outer_hit;
    std::vector<std::uint8_t> sigma_failure;

    std::size_t records() const noexcept { return times.size(); }
    std::span<const double> state(std::size_t path, std::size_t record) const;
    std::span<const double> final_state(std::size_t path) const;
    std::span<const double> last_valid_state(std::size_t path) const;
    double level_exit_time(std::size_t path, int level) const;
    std::size_t absorbed_count() const;
    /// FNV-1a over all states, exit times and flags.
    std::uint64_t hash() const;
};

inline constexpr double kNeverExited = std::numeric_limits<double>::infinity();

PathEnsemble simulate(const Measure& measure, const DomainSpec& domain, const CovarianceField& c,
                      const Point& x0, const SimConfig& cfg);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Fraction of paths with ζ̂ > T and its binomial standard error.
Estimate exit_probability(const PathEnsemble& ens, double T);

struct ExitIdentityResult {
    double lhs = 1.0;
    double rhs = 1.0;
    double lhs_se = 0.0;
    double rhs_se = 0.0;
    double combined_se = 0.0;
    bool pass = true;
};

/// ℚ[ζ > T] against η(x0)·E^{ℙ*}[e^{−λT}/η(X_T)] from two independently seeded
/// ensembles. Throws HypothesisError when any ℙ* path is absorbed.
ExitIdentityResult exit_identity_check(const DomainSpec& domain, const CovarianceField& c,
                                       const Eigenpair& pair, const Point& x0, double T,
                                       const SimConfig& cfg);

struct TailPoint {
    double T = 0.0;
    double scaled = 0.0;
    double std_error = 0.0;
};

struct TailDecay {
    std::vector<TailPoint> points;
    /// max/min of the scaled tail over the largest half of the horizons.
    double flatness = 1.0;
    std::vector<std::string> warnings;
};

/// e^{λT}·ℚ̂[ζ > T] along T_list from a single ℚ ensemble run to max(T_list).
TailDecay tail_decay_estimate(const DomainSpec& domain, const CovarianceField& c,
                              const Eigenpair& pair, const Point& x0,
                              const std::vector<double>& T_list, const SimConfig& cfg);

}  // namespace eigengrowth
