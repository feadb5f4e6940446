#pragma once

#include "eigengrowth/eigenpair.hpp"
#include "eigengrowth/model.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eigengrowth {

struct Interval {
    double alpha = 0.0;
    double beta = 1.0;
    double width() const { return beta - alpha; }
    double mid() const { return 0.5 * (alpha + beta); }
};

enum class LambdaSign { positive, zero, inconclusive };

enum class RecurrenceClass {
    transient_to_alpha,
    transient_to_beta,
    transient_to_both,
    null_recurrent,
    positive_recurrent,
    unknown,
};

std::string to_string(LambdaSign s);
std::string to_string(RecurrenceClass r);

/// True when c is finite and strictly positive at both closed endpoints, so the
/// Dirichlet problem can be shot from the endpoints themselves.
bool is_regular(const CovarianceField& c, Interval interval);

/// Principal Dirichlet eigenvalue of ½c(x)η'' = −λη on [α+ε, β−ε] by shooting
/// from η(α+ε)=0, η'(α+ε)=1 and bisecting on "η has a zero in (α+ε, β−ε]".
/// The default bracket top is 10³/(β−α)².
double shoot_eigenvalue(const CovarianceField& c, Interval interval, double epsilon, double tol,
                        std::optional<double> lambda_max = std::nullopt);

struct EigenSolveOptions {
    /// Strictly decreasing truncations; empty means {1e-2, 1e-3, 1e-4}·(β−α).
    std::vector<double> epsilons;
    double tol = 1e-11;
    std::size_t grid_size = 2048;
    std::optional<double> x0;
};

struct EigenSolution {
    Eigenpair pair;
    std::vector<double> epsilons;
    std::vector<double> per_epsilon_lambdas;
    /// "regular", "power" or "liouville".
    std::string extrapolation;
    /// "dirichlet" (regular problem), "anchor" (integrated from x0 at the
    /// extrapolated λ with extrapolated log-slope) or "dirichlet-fallback".
    std::string eigenfunction_source;
    double residual_max = 0.0;
};

EigenSolution solve_principal_eigenpair(const CovarianceField& c, Interval interval,
                                        const EigenSolveOptions& options = {});

struct PointwiseResult {
    LambdaSign verdict = LambdaSign::inconclusive;
    double sup_s = 0.0;
    /// (β−α)²/(8·sup s) when the verdict is positive, else 0.
    double lower_bound = 0.0;
    std::optional<EndpointOrders> orders;
};

/// Bounds s(x) = (x−α)²(β−x)²/c(x) on a grid refined geometrically toward both ends.
PointwiseResult pointwise_test(const CovarianceField& c, Interval interval, int grid_size = 1024);

struct IntegralResult {
    LambdaSign verdict = LambdaSign::inconclusive;
    /// ∫(x−α)(β−x)/c over the inner 98% of the interval.
    double interior_value = 0.0;
    std::optional<EndpointOrders> orders;
};

IntegralResult integral_test(const CovarianceField& c, Interval interval, double quad_tol = 1e-10);

struct ExplosionResult {
    bool to_alpha = false;
    bool to_beta = false;
    double interior_alpha = 0.0;
    double interior_beta = 0.0;
};

ExplosionResult explosion_test(const CovarianceField& c, Interval interval, double x0);

struct RecurrenceResult {
    RecurrenceClass cls = RecurrenceClass::unknown;
    double eta_order_alpha = 0.0;
    double eta_order_beta = 0.0;
    bool inverse_square_finite_alpha = false;
    bool inverse_square_finite_beta = false;
    bool speed_finite = false;
    double interior_inverse_square = 0.0;
    double interior_speed = 0.0;
};

RecurrenceResult recurrence_class(const Eigenpair& pair, const CovarianceField& c,
                                  Interval interval);

struct InvariantDensity {
    std::vector<double> x;
    std::vector<double> density;
    double normalizer = 0.0;
};

/// η²/c normalized by the trapezoid rule on the tabulation grid.
InvariantDensity invariant_density(const Eigenpair& pair, const CovarianceField& c,
                                   Interval interval);

struct Evidence {
    std::string test;
    double value = 0.0;
    std::string verdict;
};

struct ClassificationReport {
    LambdaSign lambda_sign = LambdaSign::inconclusive;
    std::vector<Evidence> evidence;
    std::pair<bool, bool> explosion{false, false};
    RecurrenceClass recurrence = RecurrenceClass::unknown;
};

/// Runs the pointwise, integral and explosion tests, plus the recurrence test
/// when a pair is supplied. Throws ContradictionError on conflicting verdicts.
ClassificationReport classify(const CovarianceField& c, Interval interval, double x0,
                              const Eigenpair* pair = nullptr);

/// Exponent r with η(x) ≍ (x−α)^r near α (first) and (β−x)^r near β (second).
std::optional<std::pair<double, double>> eta_endpoint_orders(const Eigenpair& pair,
                                                             Interval interval);

/// Chebyshev–Lobatto nodes on [a, b].
std::vector<double> chebyshev_nodes(double a, double b, std::size_t n);

}  // namespace eigengrowth
