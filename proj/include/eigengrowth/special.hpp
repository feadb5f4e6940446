#pragma once

namespace eigengrowth {

/// Standard normal CDF.
double normal_cdf(double z);

/// Cosine integral Ci(z) = −∫_z^∞ cos(t)/t dt, z > 0.
double cosine_integral(double z);

/// ∫_0^x log(−log y) dy for x ∈ (0, 1), via x·log(−log x) + E1(−log x).
double loglog_integral(double x);

/// ∫_0^x cos(y^{−1/2}) dy for x > 0, via x cos(u) − √x sin(u) + Ci(u), u = x^{−1/2}.
double cos_rsqrt_integral(double x);

/// Smallest positive root of loglog_integral, bisected to 1e-12.
double loglog_integral_root();

}  // namespace eigengrowth
