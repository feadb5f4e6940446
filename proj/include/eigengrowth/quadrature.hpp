#pragma once

#include <functional>
#include <vector>

namespace eigengrowth {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int intervals = 0;
};

/// Globally adaptive Gauss–Kronrod (7/15) on a finite interval. Subdivides the
/// interval with the largest error estimate until the total estimate is below
/// max(abs_tol, rel_tol·|I|); throws QuadratureError when max_intervals is hit.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-12, double rel_tol = 1e-10,
                           int max_intervals = 2000);

/// Composite trapezoid rule on a tabulated (possibly non-uniform) grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eigengrowth
