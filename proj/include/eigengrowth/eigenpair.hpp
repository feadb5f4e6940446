#pragma once

#include "eigengrowth/model.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace eigengrowth {

/// Quintic Hermite interpolant through (x_i, y_i, y'_i, y''_i). Outside the node
/// range the table extends as a power law in the distance to the nearer domain
/// endpoint, matching value and log-derivative at the outermost node.
class HermiteTable {
public:
    HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                 std::vector<double> d2y, double alpha, double beta);

    double value(double x) const;
    double derivative(double x) const;
    double log_derivative(double x) const;

    const std::vector<double>& nodes() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return y_; }
    const std::vector<double>& derivatives() const noexcept { return dy_; }
    double front() const noexcept { return x_.front(); }
    double back() const noexcept { return x_.back(); }

private:
    struct Eval {
        double v, d;
    };
    Eval eval(double x) const;

    std::vector<double> x_, y_, dy_, d2y_;
    double alpha_, beta_;
};

/// (λ, η, ∇log η) with η(x0) = 1.
struct Eigenpair {
    double lambda = 0.0;
    std::size_t dim = 1;
    Point x0;
    PointFn eta;
    VectorFn grad_log_eta;
    /// 1-D fast paths (set for every one-dimensional pair).
    ScalarFn eta1;
    ScalarFn dlog1;
    /// Present when η was tabulated by the 1-D solver.
    std::shared_ptr<const HermiteTable> table;
    std::string label;

    /// Builds a normalized 1-D pair from an unnormalized η and its log-derivative.
    static Eigenpair one_dimensional(double lambda, double x0, ScalarFn raw_eta,
                                     ScalarFn dlog, std::string label = {});
    /// Builds a normalized d-dimensional pair.
    static Eigenpair multi_dimensional(double lambda, Point x0, PointFn raw_eta,
                                       VectorFn grad_log, std::string label = {});

    /// η multiplied by k > 0 and re-normalized (grad log and λ unchanged).
    Eigenpair rescaled(double k) const;
};

}  // namespace eigengrowth
