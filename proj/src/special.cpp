#include "eigengrowth/special.hpp"

#include "eigengrowth/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace eigengrowth {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double cosine_integral(double z) {
    if (!(z > 0.0)) throw DomainError("special", "cosine integral requires z > 0");
    if (z <= 4.0) {
        // Ci(z) = γ + ln z + Σ_{k≥1} (−z²)^k / (2k (2k)!)
        const double z2 = z * z;
        double term = 1.0;
        double sum = 0.0;
        for (int k = 1; k < 60; ++k) {
            term *= -z2 / ((2.0 * k - 1.0) * (2.0 * k));
            const double add = term / (2.0 * k);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return std::numbers::egamma + std::log(z) + sum;
    }
    // Continued fraction for E1(iz), evaluated by the modified Lentz method.
    using cd = std::complex<double>;
    constexpr double kTiny = 1e-300;
    cd b(1.0, z);
    cd c(1.0 / kTiny, 0.0);
    cd d = 1.0 / b;
    cd h = d;
    for (int i = 2; i < 100000; ++i) {
        const double a = -static_cast<double>((i - 1) * (i - 1));
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cd del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
    }
    h *= cd(std::cos(z), -std::sin(z));
    return -h.real();
}

double loglog_integral(double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("special", "loglog integral requires 0 < x < 1");
    const double a = -std::log(x);
    // E1(a) = −Ei(−a)
    const double e1 = -std::expint(-a);
    return x * std::log(a) + e1;
}

double cos_rsqrt_integral(double x) {
    if (!(x > 0.0)) throw DomainError("special", "cos(y^-1/2) integral requires x > 0");
    const double u = 1.0 / std::sqrt(x);
    return x * std::cos(u) - std::sqrt(x) * std::sin(u) + cosine_integral(u);
}

double loglog_integral_root() {
    // loglog_integral is positive on (0, 0.5] and negative at 0.9.
    double lo = 0.5;
    double hi = 0.9;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (loglog_integral(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace eigengrowth
