#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eigengrowth {

using Point = std::vector<double>;
using PointFn = std::function<double(std::span<const double>)>;
using VectorFn = std::function<void(std::span<const double>, std::span<double>)>;
using ScalarFn = std::function<double(double)>;

enum class DomainKind { interval, orthant, simplex };

/// Open connected state space E with a fixed nested exhaustion E_0 ⊂ E_1 ⊂ ... ⊂ E.
///
/// interval(α, β): E_n = (α + h_n, β − h_n), h_n = (β−α)/2^{n+2}. A half line
/// (β = +inf) uses E_n = (α + 2^{−(n+2)}, α + 2^{n+2}).
/// orthant(d):     E_n = {1/n < x_i < n}.
/// simplex(d):     points of R^{d−1} with E_n = {x_i > 1/(n+d), Σx_i < 1 − 1/(n+d)}.
class DomainSpec {
public:
    static constexpr int kDefaultExhaustionCount = 64;

    static DomainSpec interval(double alpha, double beta,
                               int exhaustion_count = kDefaultExhaustionCount);
    static DomainSpec orthant(int d, int exhaustion_count = kDefaultExhaustionCount);
    static DomainSpec simplex(int d, int exhaustion_count = kDefaultExhaustionCount);

    DomainKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    /// Number of assets d for orthant/simplex, 1 for intervals.
    int assets() const noexcept { return d_; }
    /// Dimension of the state vector (simplex(d) lives in R^{d−1}).
    std::size_t dim() const noexcept;
    int exhaustion_count() const noexcept { return exhaustion_count_; }
    bool bounded() const noexcept;

    bool contains(std::span<const double> x) const;
    /// x ∈ E_n; throws RangeError for n outside [0, exhaustion_count).
    bool member(int n, std::span<const double> x) const;
    /// Euclidean distance to ∂E (+inf only for degenerate inputs).
    double boundary_distance(std::span<const double> x) const;

    /// Interval layer width h_n (lower side): the gap between E_n and ∂E.
    double interval_gap(int n) const;

    std::string describe() const;

private:
    DomainKind kind_ = DomainKind::interval;
    double alpha_ = 0.0;
    double beta_ = 1.0;
    int d_ = 1;
    int exhaustion_count_ = kDefaultExhaustionCount;
};

bool exhaustion_member(const DomainSpec& domain, int n, std::span<const double> x);

/// Exponents (p_α, p_β) with c(x) ≍ (x−α)^{p_α} near α and (β−x)^{p_β} near β.
struct EndpointOrders {
    double alpha = 0.0;
    double beta = 0.0;
    bool declared = false;
};

/// Exponent comparisons closer than this to a threshold are treated as equal
/// to the threshold.
inline constexpr double kOrderTolerance = 0.02;

/// Symmetric strictly positive definite matrix field c(x), row-major d×d.
struct CovarianceField {
    std::size_t dim = 1;
    std::string name;
    VectorFn eval;
    /// Optional factor σ with σσ' = c, used by the simulator instead of the
    /// symmetric root when present.
    VectorFn factor;
    /// 1-D fast path.
    ScalarFn scalar;
    std::optional<EndpointOrders> endpoint_orders;

    static CovarianceField one_dimensional(std::string name, ScalarFn c,
                                           std::optional<EndpointOrders> orders = std::nullopt);
    static CovarianceField matrix(std::string name, std::size_t dim, VectorFn c,
                                  VectorFn factor = {});

    double operator()(double x) const { return scalar(x); }
    Eigen::MatrixXd at(std::span<const double> x) const;
    CovarianceField scaled(double k) const;
};

/// Markovian drift b(x).
struct DriftField {
    std::size_t dim = 1;
    std::string name;
    VectorFn eval;
    ScalarFn scalar;

    static DriftField one_dimensional(std::string name, ScalarFn b);
    static DriftField zero(std::size_t dim);
};

/// Unique symmetric positive definite square root; NotPositiveDefiniteError
/// if the smallest eigenvalue is ≤ tolerance.
Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& c, double tolerance = 0.0);

/// Log-log least squares over 32 geometric points in the last 1% near each end.
std::optional<EndpointOrders> estimate_endpoint_orders(const ScalarFn& c, double alpha,
                                                       double beta);

/// Declared orders when present, else estimated.
std::optional<EndpointOrders> endpoint_orders(const CovarianceField& c, double alpha,
                                              double beta);

}  // namespace eigengrowth
