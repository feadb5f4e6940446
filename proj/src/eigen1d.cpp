#include "eigengrowth/eigen1d.hpp"

#include "eigengrowth/error.hpp"
#include "eigengrowth/ode.hpp"
#include "eigengrowth/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace eigengrowth {

namespace {

constexpr const char* kModule = "eigen1d";
constexpr double kOdeTol = 1e-10;

void check_interval(Interval iv) {
    if (!std::isfinite(iv.alpha) || !std::isfinite(iv.beta) || !(iv.alpha < iv.beta)) {
        throw PreconditionError(kModule, "interval must satisfy -inf < alpha < beta < inf");
    }
}

const ScalarFn& scalar_of(const CovarianceField& c) {
    if (c.dim != 1 || !c.scalar) {
        throw PreconditionError(kModule, "covariance field must be one-dimensional");
    }
    return c.scalar;
}

double checked_c(const ScalarFn& c, double x) {
    const double v = c(x);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw SingularityError(kModule, "c is not finite and positive at x = " + std::to_string(x) +
                                            " (increase epsilon)");
    }
    return v;
}

auto eigen_rhs(const ScalarFn& c, double lambda) {
    return [&c, lambda](double x, const State2& y) -> State2 {
        return {y[1], -2.0 * lambda * y[0] / checked_c(c, x)};
    };
}

/// Sturm predicate: the solution with η(a)=0, η'(a)=1 vanishes somewhere in (a, b].
bool has_zero(const ScalarFn& c, double a, double b, double lambda) {
    bool found = false;
    dopri45(
        eigen_rhs(c, lambda), a, State2{0.0, 1.0}, b, kOdeTol, std::span<const double>{},
        [&](double, const State2& y) {
            if (y[0] <= 0.0) {
                found = true;
                return false;
            }
            return true;
        },
        [](std::size_t, const State2&) {});
    return found;
}

/// Solution at x_end of the Dirichlet problem started at a.
State2 shoot_to(const ScalarFn& c, double a, double x_end, double lambda) {
    return dopri45(
        eigen_rhs(c, lambda), a, State2{0.0, 1.0}, x_end, kOdeTol, std::span<const double>{},
        [](double, const State2&) { return true; }, [](std::size_t, const State2&) {});
}

/// Integrates from (x_start, y_start) to every node (ascending), both directions.
void tabulate(const ScalarFn& c, double lambda, double x_start, State2 y_start,
              const std::vector<double>& nodes, std::vector<double>& eta,
              std::vector<double>& deta) {
    eta.assign(nodes.size(), 0.0);
    deta.assign(nodes.size(), 0.0);
    const auto split = std::lower_bound(nodes.begin(), nodes.end(), x_start);
    const std::size_t k = static_cast<std::size_t>(split - nodes.begin());
    std::vector<double> right(nodes.begin() + static_cast<std::ptrdiff_t>(k), nodes.end());
    std::vector<double> left(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(k));
    std::reverse(left.begin(), left.end());
    auto noop = [](double, const State2&) { return true; };
    if (!right.empty()) {
        dopri45(eigen_rhs(c, lambda), x_start, y_start, right.back(), kOdeTol, right, noop,
                [&](std::size_t i, const State2& y) {
                    eta[k + i] = y[0];
                    deta[k + i] = y[1];
                });
    }
    if (!left.empty()) {
        dopri45(eigen_rhs(c, lambda), x_start, y_start, left.back(), kOdeTol, left, noop,
                [&](std::size_t i, const State2& y) {
                    eta[k - 1 - i] = y[0];
                    deta[k - 1 - i] = y[1];
                });
    }
}

std::vector<double> nodes_with(double a, double b, std::size_t n, double x0) {
    std::vector<double> nodes = chebyshev_nodes(a, b, n);
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), x0);
    if (it == nodes.end() || *it != x0) nodes.insert(it, x0);
    return nodes;
}

bool all_positive(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double e) { return e > 0.0 && std::isfinite(e); });
}

/// Builds the normalized pair from raw node data (η, η') at λ.
Eigenpair make_pair(const ScalarFn& c, double lambda, double x0, Interval iv,
                    std::vector<double> nodes, std::vector<double> eta, std::vector<double> deta,
                    const std::string& label) {
    const auto pos = std::lower_bound(nodes.begin(), nodes.end(), x0) - nodes.begin();
    const double norm = eta[static_cast<std::size_t>(pos)];
    std::vector<double> d2(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        eta[i] /= norm;
        deta[i] /= norm;
        d2[i] = -2.0 * lambda * eta[i] / c(nodes[i]);
    }
    auto table = std::make_shared<const HermiteTable>(std::move(nodes), std::move(eta),
                                                      std::move(deta), std::move(d2), iv.alpha,
                                                      iv.beta);
    Eigenpair pair = Eigenpair::one_dimensional(
        lambda, x0, [table](double x) { return table->value(x); },
        [table](double x) { return table->log_derivative(x); }, label);
    pair.table = table;
    return pair;
}

/// Max relative residual |½cη'' + λη|/η on the interior 80%, central differences.
double residual_on_interior(const Eigenpair& pair, const ScalarFn& c, Interval iv) {
    const double h = 1e-4 * iv.width();
    constexpr int kPoints = 201;
    double worst = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double x = iv.alpha + iv.width() * (0.1 + 0.8 * i / (kPoints - 1.0));
        const double e0 = pair.eta1(x);
        const double d2 = (pair.eta1(x + h) - 2.0 * e0 + pair.eta1(x - h)) / (h * h);
        worst = std::max(worst, std::abs(0.5 * c(x) * d2 + pair.lambda * e0) / e0);
    }
    return worst;
}

/// Weights w with extrapolated value Σ w_i v_i over the last three samples.
struct Extrapolation {
    std::string model;
    std::array<double, 3> w{0.0, 0.0, 1.0};
};

Extrapolation power_weights(const std::array<double, 3>& eps, const std::array<double, 3>& lam,
                            double tol) {
    Extrapolation ex{"power", {0.0, 0.0, 1.0}};
    const double d1 = lam[0] - lam[1];
    const double d2 = lam[1] - lam[2];
    if (std::abs(d2) < 1e3 * tol) return ex;
    auto ratio = [&](double p) {
        return (std::pow(eps[0], p) - std::pow(eps[1], p)) /
               (std::pow(eps[1], p) - std::pow(eps[2], p));
    };
    const double target = d1 / d2;
    double p = 1.0;
    double lo = 0.05, hi = 8.0;
    if (target > 0.0 && (ratio(lo) - target) * (ratio(hi) - target) < 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((ratio(lo) - target) * (ratio(mid) - target) <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        p = 0.5 * (lo + hi);
    }
    const double q = std::pow(eps[2], p) / (std::pow(eps[1], p) - std::pow(eps[2], p));
    ex.w = {0.0, -q, 1.0 + q};
    return ex;
}

Extrapolation liouville_weights(const std::array<double, 3>& s) {
    // Quadratic Lagrange interpolation in s evaluated at s = 0.
    Extrapolation ex{"liouville", {}};
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j) {
            if (j != i) w *= (0.0 - s[j]) / (s[i] - s[j]);
        }
        ex.w[i] = w;
    }
    return ex;
}

std::optional<double> fit_log_slope(const ScalarFn& f, double alpha, double beta, bool left) {
    constexpr int kPoints = 32;
    constexpr double kLo = 1e-9;
    constexpr double kHi = 1e-2;
    const double width = beta - alpha;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 0; i < kPoints; ++i) {
        const double delta = width * kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kPoints - 1));
        const double x = left ? alpha + delta : beta - delta;
        double v = 0.0;
        try {
            v = f(x);
        } catch (const Error&) {
            continue;
        }
        if (!(v > 0.0) || !std::isfinite(v)) continue;
        const double lx = std::log(delta), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 8) return std::nullopt;
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / den;
}

double inner_integral(const ScalarFn& f, Interval iv) {
    return integrate(f, iv.alpha + 0.01 * iv.width(), iv.beta - 0.01 * iv.width(), 1e-12, 1e-10)
        .value;
}

std::string verdict_name(LambdaSign s) { return to_string(s); }

}  // namespace

std::string to_string(LambdaSign s) {
    switch (s) {
        case LambdaSign::positive: return "positive";
        case LambdaSign::zero: return "zero";
        case LambdaSign::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(RecurrenceClass r) {
    switch (r) {
        case RecurrenceClass::transient_to_alpha: return "transient_to_alpha";
        case RecurrenceClass::transient_to_beta: return "transient_to_beta";
        case RecurrenceClass::transient_to_both: return "transient_to_both";
        case RecurrenceClass::null_recurrent: return "null_recurrent";
        case RecurrenceClass::positive_recurrent: return "positive_recurrent";
        case RecurrenceClass::unknown: return "unknown";
    }
    return "unknown";
}

std::vector<double> chebyshev_nodes(double a, double b, std::size_t n) {
    if (n < 2) throw PreconditionError(kModule, "chebyshev_nodes needs n >= 2");
    std::vector<double> x(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = mid - half * std::cos(std::numbers::pi * static_cast<double>(k) / (n - 1));
    }
    x.front() = a;
    x.back() = b;
    return x;
}

bool is_regular(const CovarianceField& c, Interval interval) {
    if (c.dim != 1 || !c.scalar) return false;
    try {
        const double ca = c.scalar(interval.alpha);
        const double cb = c.scalar(interval.beta);
        return ca > 0.0 && cb > 0.0 && std::isfinite(ca) && std::isfinite(cb);
    } catch (const Error&) {
        return false;
    }
}

double shoot_eigenvalue(const CovarianceField& c, Interval interval, double epsilon, double tol,
                        std::optional<double> lambda_max) {
    check_interval(interval);
    const ScalarFn& cf = scalar_of(c);
    if (!(epsilon >= 0.0) || !(epsilon < interval.width() / 4.0)) {
        throw PreconditionError(kModule, "epsilon must lie in [0, (beta-alpha)/4)");
    }
    if (epsilon == 0.0 && !is_regular(c, interval)) {
        throw PreconditionError(kModule, "epsilon = 0 requires c finite and positive at both ends");
    }
    if (!(tol > 0.0)) throw PreconditionError(kModule, "tol must be positive");
    const double a = interval.alpha + epsilon;
    const double b = interval.beta - epsilon;
    double hi = lambda_max.value_or(1e3 / (interval.width() * interval.width()));
    if (!has_zero(cf, a, b, hi)) {
        throw BracketError(kModule, "no sign change of eta(beta - epsilon) in [tol, " +
                                        std::to_string(hi) + "]");
    }
    double lo = 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (has_zero(cf, a, b, mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

EigenSolution solve_principal_eigenpair(const CovarianceField& c, Interval interval,
                                        const EigenSolveOptions& options) {
    check_interval(interval);
    const ScalarFn& cf = scalar_of(c);
    if (options.grid_size < 2048) {
        throw PreconditionError(kModule, "grid_size must be >= 2048");
    }
    const double x0 = options.x0.value_or(interval.mid());
    if (!(x0 > interval.alpha && x0 < interval.beta)) {
        throw PreconditionError(kModule, "x0 must lie inside the interval");
    }

    EigenSolution sol;
    if (is_regular(c, interval)) {
        const double lambda = shoot_eigenvalue(c, interval, 0.0, options.tol);
        std::vector<double> nodes = nodes_with(interval.alpha, interval.beta, options.grid_size, x0);
        std::vector<double> eta, deta;
        tabulate(cf, lambda, interval.alpha, State2{0.0, 1.0}, nodes, eta, deta);
        nodes = std::vector<double>(nodes.begin() + 1, nodes.end() - 1);
        eta = std::vector<double>(eta.begin() + 1, eta.end() - 1);
        deta = std::vector<double>(deta.begin() + 1, deta.end() - 1);
        if (!all_positive(eta)) {
            throw ConvergenceError(kModule, "Dirichlet eigenfunction is not positive");
        }
        sol.pair = make_pair(cf, lambda, x0, interval, std::move(nodes), std::move(eta),
                             std::move(deta), c.name);
        sol.epsilons = {0.0};
        sol.per_epsilon_lambdas = {lambda};
        sol.extrapolation = "regular";
        sol.eigenfunction_source = "dirichlet";
        sol.residual_max = residual_on_interior(sol.pair, cf, interval);
        return sol;
    }

    std::vector<double> eps = options.epsilons;
    if (eps.empty()) {
        eps = {1e-2 * interval.width(), 1e-3 * interval.width(), 1e-4 * interval.width()};
    }
    if (eps.size() < 3) throw PreconditionError(kModule, "need at least 3 epsilons");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || !(eps[i] < interval.width() / 4.0)) {
            throw PreconditionError(kModule, "every epsilon must lie in (0, (beta-alpha)/4)");
        }
        if (i > 0 && !(eps[i] < eps[i - 1])) {
            throw PreconditionError(kModule, "epsilons must be strictly decreasing");
        }
    }
    const double eps_min = eps.back();
    if (!(x0 > interval.alpha + eps_min && x0 < interval.beta - eps_min)) {
        throw PreconditionError(kModule, "x0 must lie inside the smallest truncated interval");
    }

    std::vector<double> lambdas;
    std::vector<double> slopes;
    for (double e : eps) {
        const double lam = shoot_eigenvalue(c, interval, e, options.tol);
        lambdas.push_back(lam);
        const State2 y = shoot_to(cf, interval.alpha + e, x0, lam);
        slopes.push_back(y[0] > 0.0 ? y[1] / y[0] : std::numeric_limits<double>::quiet_NaN());
    }
    const double slack = options.tol + 1e-9 * std::abs(lambdas.front());
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (lambdas[i] > lambdas[i - 1] + slack) {
            throw ConvergenceError(kModule, "truncated eigenvalues are not non-increasing in epsilon");
        }
    }

    const std::size_t n = eps.size();
    const std::array<double, 3> e3{eps[n - 3], eps[n - 2], eps[n - 1]};
    const std::array<double, 3> l3{lambdas[n - 3], lambdas[n - 2], lambdas[n - 1]};
    const auto orders = endpoint_orders(c, interval.alpha, interval.beta);
    const bool liouville = orders && (std::abs(orders->alpha - 2.0) <= kOrderTolerance ||
                                      std::abs(orders->beta - 2.0) <= kOrderTolerance);
    Extrapolation ex;
    if (liouville) {
        std::array<double, 3> s{};
        for (int i = 0; i < 3; ++i) {
            const double len = integrate([&](double x) { return 1.0 / std::sqrt(cf(x)); },
                                         interval.alpha + e3[i], interval.beta - e3[i], 1e-13,
                                         1e-12, 20000)
                                   .value;
            s[i] = 1.0 / (len * len);
        }
        ex = liouville_weights(s);
    } else {
        ex = power_weights(e3, l3, options.tol);
    }
    double lambda_hat = 0.0;
    double slope_hat = 0.0;
    for (int i = 0; i < 3; ++i) {
        lambda_hat += ex.w[i] * l3[i];
        slope_hat += ex.w[i] * slopes[n - 3 + i];
    }
    lambda_hat = std::max(lambda_hat, 0.0);

    sol.epsilons = eps;
    sol.per_epsilon_lambdas = lambdas;
    sol.extrapolation = ex.model;

    std::vector<double> nodes =
        nodes_with(interval.alpha + eps_min, interval.beta - eps_min, options.grid_size, x0);
    std::vector<double> eta, deta;
    bool anchored = false;
    if (std::isfinite(slope_hat)) {
        try {
            tabulate(cf, lambda_hat, x0, State2{1.0, slope_hat}, nodes, eta, deta);
            anchored = all_positive(eta);
        } catch (const SingularityError&) {
            anchored = false;
        }
    }
    if (anchored) {
        sol.pair = make_pair(cf, lambda_hat, x0, interval, std::move(nodes), std::move(eta),
                             std::move(deta), c.name);
        sol.eigenfunction_source = "anchor";
    } else {
        const double lam = lambdas.back();
        tabulate(cf, lam, nodes.front(), State2{0.0, 1.0}, nodes, eta, deta);
        nodes = std::vector<double>(nodes.begin() + 1, nodes.end() - 1);
        eta = std::vector<double>(eta.begin() + 1, eta.end() - 1);
        deta = std::vector<double>(deta.begin() + 1, deta.end() - 1);
        if (!all_positive(eta)) {
            throw ConvergenceError(kModule, "truncated eigenfunction is not positive");
        }
        Eigenpair p = make_pair(cf, lam, x0, interval, std::move(nodes), std::move(eta),
                                std::move(deta), c.name);
        p.lambda = lambda_hat;
        sol.pair = std::move(p);
        sol.eigenfunction_source = "dirichlet-fallback";
    }
    sol.residual_max = residual_on_interior(sol.pair, cf, interval);
    return sol;
}

PointwiseResult pointwise_test(const CovarianceField& c, Interval interval, int grid_size) {
    check_interval(interval);
    const ScalarFn& cf = scalar_of(c);
    if (grid_size < 256) throw PreconditionError(kModule, "grid_size must be >= 256");
    PointwiseResult r;
    r.orders = endpoint_orders(c, interval.alpha, interval.beta);

    const double w = interval.width();
    const int half = grid_size / 2;
    double sup_s = 0.0;
    bool finite = true;
    for (int i = 0; i < half; ++i) {
        const double frac = 1e-12 * std::pow(0.5 / 1e-12, static_cast<double>(i) / (half - 1));
        for (double x : {interval.alpha + frac * w, interval.beta - frac * w}) {
            const double cx = cf(x);
            const double s = (x - interval.alpha) * (x - interval.alpha) * (interval.beta - x) *
                             (interval.beta - x) / cx;
            if (!std::isfinite(s) || !(cx > 0.0)) {
                finite = false;
                continue;
            }
            sup_s = std::max(sup_s, s);
        }
    }
    r.sup_s = sup_s;
    if (!r.orders) return r;
    const double pa = r.orders->alpha, pb = r.orders->beta;
    if (pa > 2.0 + kOrderTolerance || pb > 2.0 + kOrderTolerance) {
        r.verdict = LambdaSign::zero;
    } else if (finite && sup_s > 0.0) {
        r.verdict = LambdaSign::positive;
        r.lower_bound = w * w / (8.0 * sup_s);
    }
    return r;
}

IntegralResult integral_test(const CovarianceField& c, Interval interval, double quad_tol) {
    check_interval(interval);
    const ScalarFn& cf = scalar_of(c);
    IntegralResult r;
    r.orders = endpoint_orders(c, interval.alpha, interval.beta);
    if (!r.orders) {
        throw PreconditionError(kModule, "integral_test needs endpoint orders (declared or estimable)");
    }
    r.interior_value =
        integrate([&](double x) { return (x - interval.alpha) * (interval.beta - x) / cf(x); },
                  interval.alpha + 0.01 * interval.width(), interval.beta - 0.01 * interval.width(),
                  quad_tol, quad_tol)
            .value;
    const double pa = r.orders->alpha, pb = r.orders->beta;
    if (pa >= 3.0 - kOrderTolerance || pb >= 3.0 - kOrderTolerance) {
        r.verdict = LambdaSign::zero;
    } else if (pa < 2.0 - kOrderTolerance && pb < 2.0 - kOrderTolerance) {
        r.verdict = LambdaSign::positive;
    }
    return r;
}

ExplosionResult explosion_test(const CovarianceField& c, Interval interval, double x0) {
    check_interval(interval);
    const ScalarFn& cf = scalar_of(c);
    if (!(x0 > interval.alpha && x0 < interval.beta)) {
        throw PreconditionError(kModule, "x0 must lie inside the interval");
    }
    const auto orders = endpoint_orders(c, interval.alpha, interval.beta);
    if (!orders) {
        throw PreconditionError(kModule, "explosion_test needs endpoint orders (declared or estimable)");
    }
    ExplosionResult r;
    const double inner_a = interval.alpha + 0.01 * (x0 - interval.alpha);
    const double inner_b = interval.beta - 0.01 * (interval.beta - x0);
    r.interior_alpha =
        integrate([&](double x) { return (x - interval.alpha) / cf(x); }, inner_a, x0).value;
    r.interior_beta =
        integrate([&](double x) { return (interval.beta - x) / cf(x); }, x0, inner_b).value;
    r.to_alpha = orders->alpha < 2.0 - kOrderTolerance;
    r.to_beta = orders->beta < 2.0 - kOrderTolerance;
    return r;
}

std::optional<std::pair<double, double>> eta_endpoint_orders(const Eigenpair& pair,
                                                             Interval interval) {
    check_interval(interval);
    if (!pair.eta1) throw PreconditionError(kModule, "eigenpair must be one-dimensional");
    const auto ra = fit_log_slope(pair.eta1, interval.alpha, interval.beta, true);
    const auto rb = fit_log_slope(pair.eta1, interval.alpha, interval.beta, false);
    if (!ra || !rb) return std::nullopt;
    return std::make_pair(*ra, *rb);
}

RecurrenceResult recurrence_class(const Eigenpair& pair, const CovarianceField& c,
                                  Interval interval) {
    check_interval(interval);
    const ScalarFn& cf = scalar_of(c);
    RecurrenceResult r;
    const auto eta_orders = eta_endpoint_orders(pair, interval);
    const auto c_orders = endpoint_orders(c, interval.alpha, interval.beta);
    if (!eta_orders || !c_orders) return r;
    r.eta_order_alpha = eta_orders->first;
    r.eta_order_beta = eta_orders->second;
    r.inverse_square_finite_alpha = 2.0 * r.eta_order_alpha < 1.0 - kOrderTolerance;
    r.inverse_square_finite_beta = 2.0 * r.eta_order_beta < 1.0 - kOrderTolerance;
    r.speed_finite = 2.0 * r.eta_order_alpha - c_orders->alpha > -1.0 + kOrderTolerance &&
                     2.0 * r.eta_order_beta - c_orders->beta > -1.0 + kOrderTolerance;
    try {
        r.interior_inverse_square = inner_integral(
            [&](double x) {
                const double e = pair.eta1(x);
                return 1.0 / (e * e);
            },
            interval);
        r.interior_speed = inner_integral(
            [&](double x) {
                const double e = pair.eta1(x);
                return e * e / cf(x);
            },
            interval);
    } catch (const QuadratureError&) {
        return r;
    }
    if (r.inverse_square_finite_alpha && r.inverse_square_finite_beta) {
        r.cls = RecurrenceClass::transient_to_both;
    } else if (r.inverse_square_finite_alpha) {
        r.cls = RecurrenceClass::transient_to_alpha;
    } else if (r.inverse_square_finite_beta) {
        r.cls = RecurrenceClass::transient_to_beta;
    } else {
        r.cls = r.speed_finite ? RecurrenceClass::positive_recurrent
                               : RecurrenceClass::null_recurrent;
    }
    return r;
}

InvariantDensity invariant_density(const Eigenpair& pair, const CovarianceField& c,
                                   Interval interval) {
    check_interval(interval);
    const ScalarFn& cf = scalar_of(c);
    if (!pair.eta1) throw PreconditionError(kModule, "eigenpair must be one-dimensional");
    InvariantDensity d;
    if (pair.table) {
        d.x = pair.table->nodes();
    } else {
        const double e = 1e-4 * interval.width();
        d.x = chebyshev_nodes(interval.alpha + e, interval.beta - e, 4096);
    }
    d.density.resize(d.x.size());
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double e = pair.eta1(d.x[i]);
        d.density[i] = e * e / cf(d.x[i]);
    }
    d.normalizer = trapezoid(d.x, d.density);
    if (!(d.normalizer > 0.0) || !std::isfinite(d.normalizer)) {
        throw ContradictionError(kModule, "invariant density is not normalizable");
    }
    for (double& v : d.density) v /= d.normalizer;

    // Mass in the outermost decade next to each endpoint; a normalizable density
    // leaves a vanishing share there.
    const double lo = std::min(d.x.front() - interval.alpha, interval.beta - d.x.back());
    std::vector<double> xs, ys;
    double outer = 0.0;
    for (bool left : {true, false}) {
        xs.clear();
        ys.clear();
        for (std::size_t i = 0; i < d.x.size(); ++i) {
            const double dist = left ? d.x[i] - interval.alpha : interval.beta - d.x[i];
            if (dist <= 10.0 * lo) {
                xs.push_back(d.x[i]);
                ys.push_back(d.density[i]);
            }
        }
        if (xs.size() >= 2) outer += trapezoid(xs, ys);
    }
    if (outer > 0.01) {
        throw ContradictionError(kModule,
                                 "invariant density does not converge toward the endpoints "
                                 "(recurrence class is not positive)");
    }
    return d;
}

ClassificationReport classify(const CovarianceField& c, Interval interval, double x0,
                              const Eigenpair* pair) {
    ClassificationReport rep;
    const PointwiseResult pw = pointwise_test(c, interval);
    rep.evidence.push_back({"pointwise", pw.verdict == LambdaSign::positive ? pw.lower_bound : pw.sup_s,
                            verdict_name(pw.verdict)});
    const IntegralResult in = integral_test(c, interval);
    rep.evidence.push_back({"integral", in.interior_value, verdict_name(in.verdict)});
    const ExplosionResult ex = explosion_test(c, interval, x0);
    rep.explosion = {ex.to_alpha, ex.to_beta};
    rep.evidence.push_back({"explosion_alpha", ex.interior_alpha, ex.to_alpha ? "finite" : "infinite"});
    rep.evidence.push_back({"explosion_beta", ex.interior_beta, ex.to_beta ? "finite" : "infinite"});

    const bool any_pos = pw.verdict == LambdaSign::positive || in.verdict == LambdaSign::positive;
    const bool any_zero = pw.verdict == LambdaSign::zero || in.verdict == LambdaSign::zero;
    if (any_pos && any_zero) {
        throw ContradictionError(kModule, "pointwise and integral tests disagree on the sign of lambda");
    }
    rep.lambda_sign = any_pos ? LambdaSign::positive
                              : (any_zero ? LambdaSign::zero : LambdaSign::inconclusive);
    if (pair) {
        const RecurrenceResult rr = recurrence_class(*pair, c, interval);
        rep.recurrence = rr.cls;
        rep.evidence.push_back({"recurrence", rr.interior_speed, to_string(rr.cls)});
    }
    return rep;
}

}  // namespace eigengrowth
