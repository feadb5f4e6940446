#include "eigengrowth/model.hpp"

#include "eigengrowth/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace eigengrowth {

namespace {

constexpr const char* kModule = "model";

void check_count(int exhaustion_count) {
    if (exhaustion_count < 1) {
        throw PreconditionError(kModule, "exhaustion_count must be >= 1");
    }
}

}  // namespace

DomainSpec DomainSpec::interval(double alpha, double beta, int exhaustion_count) {
    check_count(exhaustion_count);
    if (!std::isfinite(alpha) || !(alpha < beta)) {
        throw PreconditionError(kModule, "interval requires finite alpha < beta");
    }
    DomainSpec d;
    d.kind_ = DomainKind::interval;
    d.alpha_ = alpha;
    d.beta_ = beta;
    d.d_ = 1;
    d.exhaustion_count_ = exhaustion_count;
    return d;
}

DomainSpec DomainSpec::orthant(int d, int exhaustion_count) {
    check_count(exhaustion_count);
    if (d < 1) throw PreconditionError(kModule, "orthant requires d >= 1");
    DomainSpec s;
    s.kind_ = DomainKind::orthant;
    s.d_ = d;
    s.alpha_ = 0.0;
    s.beta_ = std::numeric_limits<double>::infinity();
    s.exhaustion_count_ = exhaustion_count;
    return s;
}

DomainSpec DomainSpec::simplex(int d, int exhaustion_count) {
    check_count(exhaustion_count);
    if (d < 2) throw PreconditionError(kModule, "simplex requires d >= 2");
    DomainSpec s;
    s.kind_ = DomainKind::simplex;
    s.d_ = d;
    s.alpha_ = 0.0;
    s.beta_ = 1.0;
    s.exhaustion_count_ = exhaustion_count;
    return s;
}

std::size_t DomainSpec::dim() const noexcept {
    switch (kind_) {
        case DomainKind::interval: return 1;
        case DomainKind::orthant: return static_cast<std::size_t>(d_);
        case DomainKind::simplex: return static_cast<std::size_t>(d_ - 1);
    }
    return 1;
}

bool DomainSpec::bounded() const noexcept {
    return kind_ == DomainKind::simplex || (kind_ == DomainKind::interval && std::isfinite(beta_));
}

bool DomainSpec::contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    switch (kind_) {
        case DomainKind::interval:
            return x[0] > alpha_ && x[0] < beta_;
        case DomainKind::orthant:
            return std::all_of(x.begin(), x.end(),
                               [](double v) { return v > 0.0 && std::isfinite(v); });
        case DomainKind::simplex: {
            double sum = 0.0;
            for (double v : x) {
                if (!(v > 0.0)) return false;
                sum += v;
            }
            return sum < 1.0;
        }
    }
    return false;
}

double DomainSpec::interval_gap(int n) const {
    if (std::isfinite(beta_)) return std::ldexp(beta_ - alpha_, -(n + 2));
    return std::ldexp(1.0, -(n + 2));
}

bool DomainSpec::member(int n, std::span<const double> x) const {
    if (n < 0 || n >= exhaustion_count_) {
        throw RangeError(kModule, "exhaustion index " + std::to_string(n) +
                                      " outside [0, " + std::to_string(exhaustion_count_) + ")");
    }
    if (x.size() != dim()) return false;
    switch (kind_) {
        case DomainKind::interval: {
            const double h = interval_gap(n);
            const double upper = std::isfinite(beta_) ? beta_ - h : alpha_ + std::ldexp(1.0, n + 2);
            return x[0] > alpha_ + h && x[0] < upper;
        }
        case DomainKind::orthant: {
            if (n == 0) return false;
            const double lo = 1.0 / n;
            const double hi = static_cast<double>(n);
            return std::all_of(x.begin(), x.end(), [&](double v) { return v > lo && v < hi; });
        }
        case DomainKind::simplex: {
            const double gap = 1.0 / (n + d_);
            double sum = 0.0;
            for (double v : x) {
                if (!(v > gap)) return false;
                sum += v;
            }
            return sum < 1.0 - gap;
        }
    }
    return false;
}

double DomainSpec::boundary_distance(std::span<const double> x) const {
    switch (kind_) {
        case DomainKind::interval:
            return std::min(x[0] - alpha_, beta_ - x[0]);
        case DomainKind::orthant:
            return *std::min_element(x.begin(), x.end());
        case DomainKind::simplex: {
            const double sum = std::accumulate(x.begin(), x.end(), 0.0);
            const double face = (1.0 - sum) / std::sqrt(static_cast<double>(x.size()));
            return std::min(*std::min_element(x.begin(), x.end()), face);
        }
    }
    return 0.0;
}

std::string DomainSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case DomainKind::interval: os << "interval(" << alpha_ << "," << beta_ << ")"; break;
        case DomainKind::orthant: os << "orthant(" << d_ << ")"; break;
        case DomainKind::simplex: os << "simplex(" << d_ << ")"; break;
    }
    return os.str();
}

bool exhaustion_member(const DomainSpec& domain, int n, std::span<const double> x) {
    return domain.member(n, x);
}

CovarianceField CovarianceField::one_dimensional(std::string name, ScalarFn c,
                                                 std::optional<EndpointOrders> orders) {
    CovarianceField f;
    f.dim = 1;
    f.name = std::move(name);
    f.scalar = c;
    f.eval = [c](std::span<const double> x, std::span<double> out) { out[0] = c(x[0]); };
    f.endpoint_orders = orders;
    return f;
}

CovarianceField CovarianceField::matrix(std::string name, std::size_t dim, VectorFn c,
                                        VectorFn factor) {
    CovarianceField f;
    f.dim = dim;
    f.name = std::move(name);
    f.eval = std::move(c);
    f.factor = std::move(factor);
    if (dim == 1) {
        auto e = f.eval;
        f.scalar = [e](double x) {
            double out = 0.0;
            e(std::span<const double>(&x, 1), std::span<double>(&out, 1));
            return out;
        };
    }
    return f;
}

Eigen::MatrixXd CovarianceField::at(std::span<const double> x) const {
    Eigen::MatrixXd m(dim, dim);
    std::vector<double> buf(dim * dim);
    eval(x, buf);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = buf[i * dim + j];
    return m;
}

CovarianceField CovarianceField::scaled(double k) const {
    CovarianceField f = *this;
    f.name = name + "*" + std::to_string(k);
    auto e = eval;
    f.eval = [e, k](std::span<const double> x, std::span<double> out) {
        e(x, out);
        for (double& v : out) v *= k;
    };
    if (scalar) {
        auto s = scalar;
        f.scalar = [s, k](double x) { return k * s(x); };
    }
    if (factor) {
        auto fa = factor;
        const double r = std::sqrt(k);
        f.factor = [fa, r](std::span<const double> x, std::span<double> out) {
            fa(x, out);
            for (double& v : out) v *= r;
        };
    }
    return f;
}

DriftField DriftField::one_dimensional(std::string name, ScalarFn b) {
    DriftField f;
    f.dim = 1;
    f.name = std::move(name);
    f.scalar = b;
    f.eval = [b](std::span<const double> x, std::span<double> out) { out[0] = b(x[0]); };
    return f;
}

DriftField DriftField::zero(std::size_t dim) {
    DriftField f;
    f.dim = dim;
    f.name = "zero";
    f.eval = [](std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    };
    if (dim == 1) f.scalar = [](double) { return 0.0; };
    return f;
}

Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& c, double tolerance) {
    if (c.rows() != c.cols() || c.rows() == 0) {
        throw PreconditionError(kModule, "sqrt_spd requires a non-empty square matrix");
    }
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw PreconditionError(kModule, "sqrt_spd requires a symmetric matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    if (es.info() != Eigen::Success) {
        throw NotPositiveDefiniteError(kModule, "eigendecomposition failed");
    }
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (!(ev.minCoeff() > tolerance)) {
        throw NotPositiveDefiniteError(
            kModule, "covariance not positive definite (smallest eigenvalue " +
                         std::to_string(ev.minCoeff()) + ")");
    }
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::MatrixXd s = v * ev.cwiseSqrt().asDiagonal() * v.transpose();
    return 0.5 * (s + s.transpose());
}

std::optional<EndpointOrders> estimate_endpoint_orders(const ScalarFn& c, double alpha,
                                                       double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) return std::nullopt;
    const double width = beta - alpha;
    constexpr int kPoints = 32;
    constexpr double kLo = 1e-9;
    constexpr double kHi = 1e-2;

    auto fit = [&](bool left) -> std::optional<double> {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int i = 0; i < kPoints; ++i) {
            const double frac = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kPoints - 1));
            const double delta = frac * width;
            const double x = left ? alpha + delta : beta - delta;
            const double v = c(x);
            if (!(v > 0.0) || !std::isfinite(v)) continue;
            const double lx = std::log(delta);
            const double ly = std::log(v);
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
    };

    auto pa = fit(true);
    auto pb = fit(false);
    if (!pa || !pb) return std::nullopt;
    return EndpointOrders{*pa, *pb, false};
}

std::optional<EndpointOrders> endpoint_orders(const CovarianceField& c, double alpha,
                                              double beta) {
    if (c.endpoint_orders) return c.endpoint_orders;
    if (!c.scalar) return std::nullopt;
    return estimate_endpoint_orders(c.scalar, alpha, beta);
}

}  // namespace eigengrowth
