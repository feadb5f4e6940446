#include "eigengrowth/eigenpair.hpp"

#include "eigengrowth/error.hpp"

#include <algorithm>
#include <cmath>

namespace eigengrowth {

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                           std::vector<double> d2y, double alpha, double beta)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)), d2y_(std::move(d2y)),
      alpha_(alpha), beta_(beta) {
    if (x_.size() < 2 || y_.size() != x_.size() || dy_.size() != x_.size() ||
        d2y_.size() != x_.size()) {
        throw PreconditionError("eigen1d", "tabulation needs >= 2 nodes with matching data");
    }
}

HermiteTable::Eval HermiteTable::eval(double x) const {
    if (x < x_.front() || x > x_.back()) {
        // power-law extension toward the nearer endpoint
        const bool left = x < x_.front();
        const std::size_t i = left ? 0 : x_.size() - 1;
        const double edge = left ? alpha_ : beta_;
        const double dist0 = std::abs(x_[i] - edge);
        const double dist = std::abs(x - edge);
        const double sign = left ? 1.0 : -1.0;
        const double r = sign * dist0 * dy_[i] / y_[i];
        const double v = y_[i] * std::pow(dist / dist0, r);
        return {v, sign * r * v / dist};
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = it == x_.end() ? x_.size() - 2 : static_cast<std::size_t>(it - x_.begin()) - 1;
    k = std::min(k, x_.size() - 2);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double h3 = 10 * t3 - 15 * t4 + 6 * t5;
    const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h5 = 0.5 * t3 - t4 + 0.5 * t5;
    const double g0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double g1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double g2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    const double g3 = 30 * t2 - 60 * t3 + 30 * t4;
    const double g4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double g5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    const double v = h0 * y_[k] + h1 * h * dy_[k] + h2 * h * h * d2y_[k] + h3 * y_[k + 1] +
                     h4 * h * dy_[k + 1] + h5 * h * h * d2y_[k + 1];
    const double d = (g0 * y_[k] + g1 * h * dy_[k] + g2 * h * h * d2y_[k] + g3 * y_[k + 1] +
                      g4 * h * dy_[k + 1] + g5 * h * h * d2y_[k + 1]) /
                     h;
    return {v, d};
}

double HermiteTable::value(double x) const { return eval(x).v; }
double HermiteTable::derivative(double x) const { return eval(x).d; }
double HermiteTable::log_derivative(double x) const {
    const Eval e = eval(x);
    return e.d / e.v;
}

Eigenpair Eigenpair::one_dimensional(double lambda, double x0, ScalarFn raw_eta, ScalarFn dlog,
                                     std::string label) {
    const double norm = raw_eta(x0);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("eigen1d", "eta must be positive and finite at the anchor x0");
    }
    Eigenpair p;
    p.lambda = lambda;
    p.dim = 1;
    p.x0 = {x0};
    p.label = std::move(label);
    p.eta1 = [raw_eta, norm](double x) { return raw_eta(x) / norm; };
    p.dlog1 = std::move(dlog);
    auto e1 = p.eta1;
    auto d1 = p.dlog1;
    p.eta = [e1](std::span<const double> x) { return e1(x[0]); };
    p.grad_log_eta = [d1](std::span<const double> x, std::span<double> out) { out[0] = d1(x[0]); };
    return p;
}

Eigenpair Eigenpair::multi_dimensional(double lambda, Point x0, PointFn raw_eta,
                                       VectorFn grad_log, std::string label) {
    const double norm = raw_eta(x0);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("closedform", "eta must be positive and finite at the anchor x0");
    }
    Eigenpair p;
    p.lambda = lambda;
    p.dim = x0.size();
    p.x0 = std::move(x0);
    p.label = std::move(label);
    p.eta = [raw_eta, norm](std::span<const double> x) { return raw_eta(x) / norm; };
    p.grad_log_eta = std::move(grad_log);
    if (p.dim == 1) {
        auto e = p.eta;
        auto g = p.grad_log_eta;
        p.eta1 = [e](double x) { return e(std::span<const double>(&x, 1)); };
        p.dlog1 = [g](double x) {
            double out = 0.0;
            g(std::span<const double>(&x, 1), std::span<double>(&out, 1));
            return out;
        };
    }
    return p;
}

Eigenpair Eigenpair::rescaled(double k) const {
    if (!(k > 0.0)) throw PreconditionError("eigen1d", "rescale factor must be positive");
    Eigenpair p = *this;
    auto e = eta;
    auto raw = [e, k](std::span<const double> x) { return k * e(x); };
    const double norm = raw(x0);
    p.eta = [raw, norm](std::span<const double> x) { return raw(x) / norm; };
    if (eta1) {
        auto e1 = eta1;
        const double n1 = k * e1(x0[0]);
        p.eta1 = [e1, k, n1](double x) { return k * e1(x) / n1; };
    }
    return p;
}

}  // namespace eigengrowth
