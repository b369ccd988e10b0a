#pragma once

#include <array>
#include <cmath>

#include "lgi/core/types.hpp"

namespace lgi {

namespace detail {

// Rybicki's sampling-theorem sum; h = 0.2 makes the aliasing error ~exp(-(pi/2h)^2).
inline double dawson_rybicki(double ax) {
    constexpr double h = 0.2;
    constexpr int nmax = 24;
    static const std::array<double, nmax> c = [] {
        std::array<double, nmax> out{};
        for (int i = 0; i < nmax; ++i) {
            const double t = (2.0 * i + 1.0) * h;
            out[static_cast<std::size_t>(i)] = std::exp(-t * t);
        }
        return out;
    }();
    const int n0 = 2 * static_cast<int>(std::lround(0.5 * ax / h));
    const double xp = ax - n0 * h;
    double e1 = std::exp(2.0 * xp * h);
    const double e2 = e1 * e1;
    double d1 = n0 + 1.0;
    double d2 = d1 - 2.0;
    double sum = 0.0;
    for (int i = 0; i < nmax; ++i) {
        sum += c[static_cast<std::size_t>(i)] * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    return std::exp(-xp * xp) * sum / kSqrtPi;
}

}  // namespace detail

/// Dawson function F(x) = exp(-x^2) * integral_0^x exp(t^2) dt.
inline double dawson(double x) {
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    double f = 0.0;
    if (ax < 1.0) {
        const double x2 = ax * ax;
        double term = ax;
        double sum = ax;
        for (int n = 1; n < 64; ++n) {
            term *= x2 / n;
            const double add = term / (2.0 * n + 1.0);
            sum += add;
            if (add < 1e-17 * sum) break;
        }
        f = std::exp(-x2) * sum;
    } else if (ax <= 10.0) {
        f = detail::dawson_rybicki(ax);
    } else if (std::isinf(ax)) {
        f = 0.0;
    } else {
        // F(x) ~ 1/(2x) * sum (2n-1)!! / (2x^2)^n
        const double inv = 1.0 / (2.0 * ax * ax);
        double term = 1.0;
        double sum = 1.0;
        for (int n = 1; n < 40; ++n) {
            const double next = term * (2.0 * n - 1.0) * inv;
            if (next > term) break;
            term = next;
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        f = sum / (2.0 * ax);
    }
    return x < 0 ? -f : f;
}

/// exp(-x^2) * erfi(x), bounded for all real x.
inline double erfi_damped(double x) { return 2.0 * dawson(x) / kSqrtPi; }

}  // namespace lgi
