#include "eigengrowth/closedform.hpp"

#include "eigengrowth/error.hpp"
#include "eigengrowth/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace eigengrowth {

namespace {

constexpr const char* kModule = "closedform";

void require_spd(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw PreconditionError(kModule, std::string(what) + " must be square and non-empty");
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw PreconditionError(kModule, std::string(what) + " must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
        throw NotPositiveDefiniteError(kModule, std::string(what) + " is not positive definite");
    }
}

double halton(std::size_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

GBMSpec GBMSpec::from_matrix(const Eigen::MatrixXd& A) {
    require_spd(A, "A");
    GBMSpec s;
    s.A = A;
    s.A_hat = A.diagonal();
    s.B_hat = 0.5 * A.llt().solve(s.A_hat);
    return s;
}

SimplexSpec SimplexSpec::from_matrix(const Eigen::MatrixXd& A) {
    require_spd(A, "A");
    const Eigen::Index d = A.rows();
    if (d < 2) throw PreconditionError(kModule, "simplex model requires d >= 2");
    SimplexSpec s;
    s.A = A;
    s.reduced.resize(d - 1, d - 1);
    for (Eigen::Index i = 0; i < d - 1; ++i)
        for (Eigen::Index j = 0; j < d - 1; ++j)
            s.reduced(i, j) = A(i, j) - A(i, d - 1) - A(j, d - 1) + A(d - 1, d - 1);
    require_spd(s.reduced, "reduced matrix");
    s.reduced_hat = s.reduced.diagonal();
    s.B_hat = 0.5 * s.reduced.llt().solve(s.reduced_hat);
    return s;
}

CovarianceField gbm_covariance(const GBMSpec& spec) {
    const std::size_t d = static_cast<std::size_t>(spec.A.rows());
    const Eigen::MatrixXd A = spec.A;
    const Eigen::MatrixXd root = sqrt_spd(A);
    auto c = [A, d](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) out[i * d + j] = x[i] * x[j] * A(i, j);
    };
    // σ = diag(x)·A^{1/2} satisfies σσ' = c.
    auto factor = [root, d](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) out[i * d + j] = x[i] * root(i, j);
    };
    return CovarianceField::matrix("gbm", d, c, factor);
}

CovarianceField simplex_covariance(const SimplexSpec& spec) {
    const std::size_t m = static_cast<std::size_t>(spec.reduced.rows());
    const Eigen::MatrixXd R = spec.reduced;
    auto c = [R, m](std::span<const double> x, std::span<double> out) {
        Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(m));
        const Eigen::VectorXd rx = R * xv;
        const double quad = xv.dot(rx);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                out[i * m + j] = x[i] * x[j] * (R(i, j) - rx(i) - rx(j) + quad);
    };
    return CovarianceField::matrix("simplex", m, c);
}

ClosedFormPair gbm_eigenpair(const GBMSpec& spec, const Point& x0) {
    const std::size_t d = static_cast<std::size_t>(spec.A.rows());
    DomainSpec domain = DomainSpec::orthant(static_cast<int>(d));
    if (!domain.contains(x0)) throw PreconditionError(kModule, "x0 must lie in the open orthant");
    const Eigen::VectorXd b = spec.B_hat;
    const double lambda = spec.A_hat.dot(spec.A.llt().solve(spec.A_hat)) / 8.0;
    auto raw = [b, d](std::span<const double> x) {
        double log_eta = 0.0;
        for (std::size_t i = 0; i < d; ++i) log_eta += b(i) * std::log(x[i]);
        return std::exp(log_eta);
    };
    auto grad = [b, d](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < d; ++i) out[i] = b(i) / x[i];
    };
    return {Eigenpair::multi_dimensional(lambda, x0, raw, grad, "gbm"), gbm_covariance(spec),
            domain};
}

ClosedFormPair simplex_eigenpair(const SimplexSpec& spec, const Point& x0) {
    const std::size_t m = static_cast<std::size_t>(spec.reduced.rows());
    DomainSpec domain = DomainSpec::simplex(static_cast<int>(m + 1));
    if (!domain.contains(x0)) throw PreconditionError(kModule, "x0 must lie in the open simplex");
    const Eigen::VectorXd b = spec.B_hat;
    const double last = 1.0 - b.sum();
    const double lambda = spec.reduced_hat.dot(spec.reduced.llt().solve(spec.reduced_hat)) / 8.0;
    auto raw = [b, m, last](std::span<const double> x) {
        double log_eta = 0.0;
        double rest = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            log_eta += b(i) * std::log(x[i]);
            rest -= x[i];
        }
        return std::exp(log_eta + last * std::log(rest));
    };
    auto grad = [b, m, last](std::span<const double> x, std::span<double> out) {
        double rest = 1.0;
        for (std::size_t i = 0; i < m; ++i) rest -= x[i];
        for (std::size_t i = 0; i < m; ++i) out[i] = b(i) / x[i] - last / rest;
    };
    return {Eigenpair::multi_dimensional(lambda, x0, raw, grad, "simplex"),
            simplex_covariance(spec), domain};
}

double pde_residual(const Eigenpair& pair, const CovarianceField& c, const DomainSpec& domain,
                    const std::vector<Point>& grid, double h) {
    const std::size_t d = c.dim;
    std::vector<double> cm(d * d);
    double worst = 0.0;
    Point y;
    for (const Point& x : grid) {
        if (x.size() != d) throw PreconditionError(kModule, "grid point has wrong dimension");
        if (!domain.contains(x) || !(domain.boundary_distance(x) > 2.0 * h)) {
            throw GeometryError(kModule, "grid point closer than 2h to the boundary");
        }
        const double e0 = pair.eta(x);
        c.eval(x, cm);
        double acc = 0.0;
        y = x;
        for (std::size_t i = 0; i < d; ++i) {
            y[i] = x[i] + h;
            const double ep = pair.eta(y);
            y[i] = x[i] - h;
            const double em = pair.eta(y);
            y[i] = x[i];
            acc += 0.5 * cm[i * d + i] * (ep - 2.0 * e0 + em) / (h * h);
            for (std::size_t j = i + 1; j < d; ++j) {
                y[i] = x[i] + h;
                y[j] = x[j] + h;
                const double pp = pair.eta(y);
                y[j] = x[j] - h;
                const double pm = pair.eta(y);
                y[i] = x[i] - h;
                const double mm = pair.eta(y);
                y[j] = x[j] + h;
                const double mp = pair.eta(y);
                y[i] = x[i];
                y[j] = x[j];
                const double mixed = (pp - pm - mp + mm) / (4.0 * h * h);
                // c symmetric: ½(c_ij + c_ji) ∂_ij η
                acc += 0.5 * (cm[i * d + j] + cm[j * d + i]) * mixed;
            }
        }
        const double r = std::abs(acc + pair.lambda * e0) / e0;
        worst = std::max(worst, r);
    }
    return worst;
}

double hopf_q(const Eigenpair& pair, const CovarianceField& c, std::span<const double> x) {
    const std::size_t d = c.dim;
    if (d == 1 && pair.dlog1 && c.scalar) {
        const double g = pair.dlog1(x[0]);
        return 0.5 * c.scalar(x[0]) * g * g;
    }
    std::vector<double> g(d), cm(d * d);
    pair.grad_log_eta(x, g);
    c.eval(x, cm);
    double q = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) q += g[i] * cm[i * d + j] * g[j];
    return 0.5 * q;
}

HopfStatistic hopf_statistic(const Eigenpair& pair, const CovarianceField& c,
                             const DomainSpec& domain, int n, std::size_t sample) {
    if (n < 0 || n >= domain.exhaustion_count()) {
        throw RangeError(kModule, "hopf_statistic: exhaustion index out of range");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    HopfStatistic st{inf, -inf, inf, -inf, inf, -inf, 0};
    auto take = [&](double q, int side) {
        if (!std::isfinite(q)) return;
        st.inf = std::min(st.inf, q);
        st.sup = std::max(st.sup, q);
        if (side < 0) {
            st.inf_alpha = std::min(st.inf_alpha, q);
            st.sup_alpha = std::max(st.sup_alpha, q);
        } else if (side > 0) {
            st.inf_beta = std::min(st.inf_beta, q);
            st.sup_beta = std::max(st.sup_beta, q);
        }
        ++st.samples;
    };

    if (domain.kind() == DomainKind::interval) {
        const std::size_t per_side = std::max<std::size_t>(sample / 2, 2);
        constexpr double kDecades = 6.0;
        const double a = domain.alpha();
        const double gap = domain.interval_gap(n);
        for (std::size_t i = 0; i < per_side; ++i) {
            const double u = std::pow(10.0, -kDecades * static_cast<double>(i) / (per_side - 1));
            const double x = a + gap * u;
            take(hopf_q(pair, c, std::span<const double>(&x, 1)), -1);
        }
        if (std::isfinite(domain.beta())) {
            const double b = domain.beta();
            for (std::size_t i = 0; i < per_side; ++i) {
                const double u =
                    std::pow(10.0, -kDecades * static_cast<double>(i) / (per_side - 1));
                const double x = b - gap * u;
                take(hopf_q(pair, c, std::span<const double>(&x, 1)), +1);
            }
        } else {
            const double start = a + std::ldexp(1.0, n + 2);
            for (std::size_t i = 0; i < per_side; ++i) {
                const double u = std::pow(10.0, kDecades * static_cast<double>(i) / (per_side - 1));
                const double x = start * u;
                take(hopf_q(pair, c, std::span<const double>(&x, 1)), +1);
            }
        }
        return st;
    }

    const std::size_t d = domain.dim();
    if (d > std::size(kPrimes)) throw PreconditionError(kModule, "hopf_statistic: dimension too large");
    const double box = domain.kind() == DomainKind::orthant ? 2.0 * std::max(n, 1) : 1.0;
    Point x(d);
    std::size_t accepted = 0;
    for (std::size_t k = 1; accepted < sample && k < sample * 1000; ++k) {
        for (std::size_t i = 0; i < d; ++i) x[i] = box * halton(k, kPrimes[i]);
        if (!domain.contains(x) || domain.member(n, x)) continue;
        take(hopf_q(pair, c, x), 0);
        ++accepted;
    }
    return st;
}

Eigen::MatrixXd reference_gbm_matrix() {
    Eigen::MatrixXd A(3, 3);
    A << 5.0 / 3.0, 3.0, 0.0, 3.0, 7.0, 0.0, 0.0, 0.0, 1.0;
    return A;
}

std::vector<std::string> example_names() {
    return {"ex-6.1.1", "ex-6.1.2", "ex-6.1.3", "ex-6.1.4",
            "ex-6.1.5", "gbm-6.2.1", "simplex-6.2.1", "bessel-4.3"};
}

namespace {

std::function<std::vector<Point>()> uniform_grid_1d(double lo, double hi, std::size_t n) {
    return [lo, hi, n] {
        std::vector<Point> g;
        g.reserve(n);
        for (std::size_t i = 0; i < n; ++i) g.push_back({lo + (hi - lo) * (i + 0.5) / n});
        return g;
    };
}

ExampleEntry power_example(const std::string& name, int power, double lambda, ScalarFn eta,
                           ScalarFn dlog, std::string description) {
    ExampleEntry e;
    e.name = name;
    e.description = std::move(description);
    e.domain = DomainSpec::interval(0.0, 1.0);
    const double p = power;
    e.c = CovarianceField::one_dimensional(
        name, [p](double x) { return std::pow(x * (1.0 - x), p); },
        EndpointOrders{p, p, true});
    e.pair = Eigenpair::one_dimensional(lambda, 0.5, std::move(eta), std::move(dlog), name);
    e.residual_grid = uniform_grid_1d(0.01, 0.99, 1000);
    return e;
}

}  // namespace

ExampleEntry make_example(const std::string& name) {
    if (name == "ex-6.1.1") {
        return power_example(
            name, 1, 1.0, [](double x) { return x * (1.0 - x); },
            [](double x) { return (1.0 - 2.0 * x) / (x * (1.0 - x)); },
            "Wright-Fisher covariance x(1-x) on (0,1); eta = x(1-x), lambda = 1");
    }
    if (name == "ex-6.1.2") {
        return power_example(
            name, 2, 0.125, [](double x) { return std::sqrt(x * (1.0 - x)); },
            [](double x) { return 0.5 * (1.0 - 2.0 * x) / (x * (1.0 - x)); },
            "covariance x^2(1-x)^2 on (0,1); eta = sqrt(x(1-x)), lambda = 1/8, null recurrent");
    }
    if (name == "ex-6.1.3") {
        return power_example(
            name, 3, 0.0, [](double) { return 1.0; }, [](double) { return 0.0; },
            "covariance x^3(1-x)^3 on (0,1); lambda = 0 with affine eta (eta = 1 shipped)");
    }
    if (name == "ex-6.1.4") {
        const double xhat = loglog_integral_root();
        ExampleEntry e;
        e.name = name;
        e.description =
            "c = -2x log(x) * int_0^x log(-log y) dy on (0, xhat); eta = that integral, lambda = 1";
        e.domain = DomainSpec::interval(0.0, xhat);
        e.c = CovarianceField::one_dimensional(
            name, [](double x) { return -2.0 * x * std::log(x) * loglog_integral(x); });
        e.pair = Eigenpair::one_dimensional(
            1.0, 0.5 * xhat, [](double x) { return loglog_integral(x); },
            [](double x) { return std::log(-std::log(x)) / loglog_integral(x); }, name);
        e.residual_grid = uniform_grid_1d(0.05, xhat - 0.05, 1000);
        return e;
    }
    if (name == "ex-6.1.5") {
        ExampleEntry e;
        e.name = name;
        e.description =
            "oscillating covariance on (0,inf); eta = int_0^x cos(y^-1/2) dy + 4 sqrt(x) - x, "
            "lambda = 1";
        e.domain = DomainSpec::interval(0.0, std::numeric_limits<double>::infinity());
        auto eta = [](double x) { return cos_rsqrt_integral(x) + 4.0 * std::sqrt(x) - x; };
        e.c = CovarianceField::one_dimensional(name, [](double x) {
            const double num = x * std::sqrt(x) * cos_rsqrt_integral(x) + 4.0 * x * x -
                               x * x * std::sqrt(x);
            return 4.0 * num / (2.0 - std::sin(1.0 / std::sqrt(x)));
        });
        e.pair = Eigenpair::one_dimensional(
            1.0, 1.0, eta,
            [eta](double x) {
                return (std::cos(1.0 / std::sqrt(x)) + 2.0 / std::sqrt(x) - 1.0) / eta(x);
            },
            name);
        // c grows like x^2, so a 1e-4 stencil is dominated by rounding near x = 50
        e.h = 1e-3;
        e.residual_threshold = 1e-4;
        e.residual_grid = uniform_grid_1d(0.5, 50.0, 1000);
        return e;
    }
    if (name == "bessel-4.3") {
        ExampleEntry e;
        e.name = name;
        e.description =
            "Brownian motion on (0,inf) (outer boundary 1e6); eta = x, lambda = 0, "
            "tilted law is the 3-d Bessel process";
        e.domain = DomainSpec::interval(0.0, 1e6);
        e.c = CovarianceField::one_dimensional(name, [](double) { return 1.0; },
                                               EndpointOrders{0.0, 0.0, true});
        e.pair = Eigenpair::one_dimensional(
            0.0, 1.0, [](double x) { return x; }, [](double x) { return 1.0 / x; }, name);
        e.residual_grid = uniform_grid_1d(0.1, 100.0, 1000);
        return e;
    }
    if (name == "gbm-6.2.1") {
        ExampleEntry e;
        e.name = name;
        e.description = "correlated GBM on (0,inf)^3 with the shipped 3x3 matrix; lambda = 19/12";
        const auto cf = gbm_eigenpair(GBMSpec::from_matrix(reference_gbm_matrix()), {1.0, 1.0, 1.0});
        e.domain = cf.domain;
        e.c = cf.c;
        e.pair = cf.pair;
        e.residual_grid = [] {
            std::mt19937_64 gen(20240601);
            std::uniform_real_distribution<double> u(0.5, 2.0);
            std::vector<Point> g(1000);
            for (auto& p : g) p = {u(gen), u(gen), u(gen)};
            return g;
        };
        return e;
    }
    if (name == "simplex-6.2.1") {
        ExampleEntry e;
        e.name = name;
        e.description =
            "relative capitalizations of the shipped GBM on the 2-simplex; eta = y(1-x-y)/x, "
            "lambda = 4/3";
        const auto cf = simplex_eigenpair(SimplexSpec::from_matrix(reference_gbm_matrix()),
                                          {1.0 / 3.0, 1.0 / 3.0});
        e.domain = cf.domain;
        e.c = cf.c;
        e.pair = cf.pair;
        e.residual_grid = [] {
            std::mt19937_64 gen(20240602);
            std::uniform_real_distribution<double> u(0.05, 0.9);
            std::vector<Point> g;
            while (g.size() < 1000) {
                Point p{u(gen), u(gen)};
                if (1.0 - p[0] - p[1] > 0.05) g.push_back(p);
            }
            return g;
        };
        return e;
    }
    std::string known;
    for (const auto& n : example_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("closedform", "unknown example '" + name + "'; known: " + known);
}

}  // namespace eigengrowth
