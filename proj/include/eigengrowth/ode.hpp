#pragma once

#include "eigengrowth/error.hpp"

#include <array>
#include <cmath>
#include <span>
#include <string>

namespace eigengrowth {

using State2 = std::array<double, 2>;

/// Dormand–Prince 5(4) for a two-component system, integrating from x_begin to
/// x_end (either direction). The mixed error norm per component is
/// |err_i| / (tol·(1 + |y_i|)).
///
/// `stops` must be monotone in the integration direction; the integrator lands
/// exactly on each and calls on_stop(index, y). on_step(x, y) sees every accepted
/// step and may return false to stop early.
template <class Rhs, class OnStep, class OnStop>
State2 dopri45(Rhs&& rhs, double x_begin, State2 y, double x_end, double tol,
               std::span<const double> stops, OnStep&& on_step, OnStop&& on_stop) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span_len = std::abs(x_end - x_begin);
    if (span_len == 0.0) return y;
    const double dir = x_end > x_begin ? 1.0 : -1.0;
    double x = x_begin;
    double h = dir * span_len * 1e-4;
    std::size_t next_stop = 0;
    while (next_stop < stops.size() && dir * (stops[next_stop] - x) <= 0.0) {
        on_stop(next_stop, y);
        ++next_stop;
    }

    State2 k1 = rhs(x, y);
    const double hmin_rel = 1e-14;
    while (dir * (x_end - x) > 0.0) {
        double target = x_end;
        if (next_stop < stops.size()) target = stops[next_stop];
        bool lands = false;
        if (dir * (x + h - target) >= 0.0) {
            h = target - x;
            lands = true;
        }
        if (std::abs(h) < hmin_rel * std::max(1.0, std::abs(x))) {
            throw SingularityError("eigen1d", "ODE step underflow near x = " + std::to_string(x) +
                                                  " (coefficient singular; increase epsilon)");
        }
        State2 yt, k2, k3, k4, k5, k6, k7;
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
        k2 = rhs(x + c2 * h, yt);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(x + c3 * h, yt);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(x + c4 * h, yt);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(x + c5 * h, yt);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                a65 * k5[i]);
        k6 = rhs(x + h, yt);
        State2 ynew;
        for (int i = 0; i < 2; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = rhs(x + h, ynew);
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
            err = std::max(err, std::abs(ei) / sc);
        }
        if (!std::isfinite(err)) {
            h *= 0.25;
            continue;
        }
        if (err <= 1.0) {
            x = lands ? target : x + h;
            y = ynew;
            k1 = k7;
            if (!on_step(x, y)) return y;
            while (next_stop < stops.size() && dir * (stops[next_stop] - x) <= 0.0) {
                on_stop(next_stop, y);
                ++next_stop;
            }
            const double fac = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
            h *= fac;
        } else {
            h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
        }
    }
    return y;
}

}  // namespace eigengrowth
