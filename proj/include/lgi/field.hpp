#pragma once

// Two-time quasi-probability for a Gaussian-windowed local mode of a chiral massless
// scalar field in its vacuum. Everything is expressed in the dimensionless pair
// (omega * ell, t21 / ell); the window is w_q(k) = 2 (ell^6/pi)^{1/4} exp(-ell^2 k^2 / 2).

#include <array>
#include <cmath>
#include <complex>

#include "lgi/core/error.hpp"
#include "lgi/core/gaussian_integral.hpp"
#include "lgi/core/quadrature.hpp"
#include "lgi/core/special.hpp"
#include "lgi/core/types.hpp"
#include "lgi/oscillator.hpp"

namespace lgi::field {

struct LocalMode {
    double ell = 1.0;
    double eps_over_ell = 0.0;
    double x_a = 0.0;

    void validate() const {
        if (!(ell > 0.0) || !std::isfinite(ell)) throw InvalidArgument("local mode: ell must be positive");
        if (!(eps_over_ell >= 0.0) || !std::isfinite(eps_over_ell))
            throw InvalidArgument("local mode: eps/ell must be >= 0");
        if (!std::isfinite(x_a)) throw InvalidArgument("local mode: x_A must be finite");
    }
};

struct FieldScenario {
    double omega_ell = 1.0;
    Complex beta{};
    double tau = 0.0;  // t21 / ell

    void validate() const {
        if (!(omega_ell > 0.0) || !std::isfinite(omega_ell)) throw InvalidArgument("field: omega*ell must be positive");
        if (!is_finite(beta)) throw InvalidArgument("field: beta must be finite");
        if (!std::isfinite(tau)) throw InvalidArgument("field: tau must be finite");
    }
};

inline double window_fourier(double k, double ell) {
    if (k < 0.0) throw InvalidArgument("window_fourier: k must be >= 0");
    return 2.0 * std::pow(std::pow(ell, 6) / kPi, 0.25) * std::exp(-0.5 * ell * ell * k * k);
}

/// Position-space window; window_fourier is its transform with the 1/sqrt(2 pi) convention.
inline double window_position(double x, double ell) {
    return 2.0 * std::pow(ell * ell / kPi, 0.25) * std::exp(-x * x / (2.0 * ell * ell));
}

struct LocalCovariances {
    double qq = 0.0;
    double pp = 0.0;
    double nu = 0.0;
};

/// Vacuum <q^2>, <p^2> of the local mode with exp(-eps k) damping.
inline LocalCovariances local_covariances(const LocalMode& mode) {
    mode.validate();
    const double ell = mode.ell;
    const double eps = mode.eps_over_ell * ell;
    const double pref = 2.0 * ell * ell * ell / kSqrtPi;
    auto moment = [&](int power) {
        return pref * semi_infinite_quadrature(
                          [&](double k) { return std::pow(k, power) * std::exp(-eps * k - ell * ell * k * k); }, 1.0 / ell);
    };
    LocalCovariances out;
    out.qq = moment(1);
    out.pp = moment(3);
    out.nu = std::sqrt(out.qq * out.pp);
    return out;
}

/// Quadrature variances of the local mode in units where the vacuum of b has variance 1/2.
struct ModeVariances {
    double x;  // sqrt(omega) q
    double p;  // p / sqrt(omega)
};

inline ModeVariances mode_variances(double omega_ell) {
    return {omega_ell / kSqrtPi, 1.0 / (kSqrtPi * omega_ell)};
}

/// integral d^2z exp(-|z|^2/2 - conj(beta) z + beta conj(z)) <g| D_b(z) |g>.
inline Complex single_time_I(Complex beta, double omega_ell) {
    FieldScenario{omega_ell, beta, 0.0}.validate();
    const auto v = mode_variances(omega_ell);
    if (beta.imag() == 0.0) {
        const double br = beta.real();
        return kPi / (std::sqrt(0.5 + v.p) * std::sqrt(0.5 + v.x)) * std::exp(-br * br / (0.5 + v.x));
    }
    QuadraticForm<2> f;
    f.m[0][0] = 1.0 + 2.0 * v.p;
    f.m[1][1] = 1.0 + 2.0 * v.x;
    f.b = {Complex{0.0, 2.0 * beta.imag()}, Complex{0.0, -2.0 * beta.real()}};
    return gaussian_integral(f);
}

/// Tr[rho M_+] from the local thermal covariance and the vacuum covariance of the projector.
inline double single_time_probability(Complex beta, double omega_ell) {
    FieldScenario{omega_ell, beta, 0.0}.validate();
    const auto v = mode_variances(omega_ell);
    const double sx = v.x + 0.5;
    const double sp = v.p + 0.5;
    return std::exp(-beta.real() * beta.real() / sx - beta.imag() * beta.imag() / sp) / std::sqrt(sx * sp);
}

/// j_n(tau) = integral_0^inf u^n exp(-u^2 - i u tau) du for n = 0..3.
inline std::array<Complex, 4> window_moments(double tau) {
    const bool flip = tau < 0.0;
    const double t = std::abs(tau);
    std::array<Complex, 4> j{};
    if (t < 15.0) {
        const Complex half_it{0.0, 0.5 * t};
        j[0] = Complex{0.5 * kSqrtPi * std::exp(-0.25 * t * t), -dawson(0.5 * t)};
        j[1] = 0.5 - half_it * j[0];
        j[2] = 0.5 * j[0] - half_it * j[1];
        j[3] = j[1] - half_it * j[2];
    } else {
        // sum_p (-1)^p (n+2p)! / (p! (i t)^{n+2p+1}); the exp(-t^2/4) remainder is below 1e-24.
        const Complex it{0.0, t};
        for (int n = 0; n < 4; ++n) {
            Complex sum{};
            double fact_ratio = std::tgamma(n + 1.0);  // (n+2p)!/p! at p = 0
            Complex pw = std::pow(it, n + 1);
            double prev = INFINITY;
            for (int p = 0; p < 200; ++p) {
                const Complex term = (p % 2 == 0 ? 1.0 : -1.0) * fact_ratio / pw;
                const double mag = std::abs(term);
                if (mag > prev) break;
                sum += term;
                if (mag < 1e-18 * std::abs(sum)) break;
                prev = mag;
                fact_ratio *= (n + 2.0 * p + 1.0) * (n + 2.0 * p + 2.0) / (p + 1.0);
                pw *= it * it;
            }
            j[static_cast<std::size_t>(n)] = sum;
        }
    }
    if (flip)
        for (auto& x : j) x = std::conj(x);
    return j;
}

/// I4 as a quadratic form in v = (x1, y1, x2, y2): I4(v) = quadratic_value(form, v) = 1/2 v^T M v.
inline QuadraticForm<4> i4_form(double tau, double omega_ell) {
    FieldScenario{omega_ell, {}, tau}.validate();
    const auto j = window_moments(tau);
    const double wl = omega_ell;
    QuadraticForm<4> f;
    // M = 2 Q with I4 = v^T Q v.
    f.m[0][0] = f.m[2][2] = 2.0 / (kSqrtPi * wl);
    f.m[1][1] = f.m[3][3] = 2.0 * wl / kSqrtPi;
    f.add_symmetric(0, 2, 4.0 * j[3] / (kSqrtPi * wl));
    f.add_symmetric(0, 3, Complex{0.0, -4.0} * j[2] / kSqrtPi);
    f.add_symmetric(1, 2, Complex{0.0, 4.0} * j[2] / kSqrtPi);
    f.add_symmetric(1, 3, 4.0 * wl * j[1] / kSqrtPi);
    return f;
}

namespace detail {

inline void add_measurement_weights(QuadraticForm<4>& f, Complex beta) {
    for (std::size_t off : {0U, 2U}) {
        f.m[off][off] += 1.0;
        f.m[off + 1][off + 1] += 1.0;
        f.b[off] += Complex{0.0, 2.0 * beta.imag()};
        f.b[off + 1] += Complex{0.0, -2.0 * beta.real()};
    }
}

}  // namespace detail

/// Full exponent of I3: measurement weights for z1, z2 minus I4.
inline QuadraticForm<4> i3_form(const FieldScenario& sc) {
    sc.validate();
    QuadraticForm<4> f = i4_form(sc.tau, sc.omega_ell);
    detail::add_measurement_weights(f, sc.beta);
    return f;
}

inline Complex i3(const FieldScenario& sc) { return gaussian_integral(i3_form(sc)); }

inline double assemble_q(Complex i1, Complex i2, Complex i3v, Outcome s1, Outcome s2) {
    const double a = value(s1);
    const double b = value(s2);
    return (1 - a) * (1 - b) / 4 + (1 - b) * a * i1.real() / (2.0 * kPi) + (1 - a) * b * i2.real() / (2.0 * kPi) +
           a * b * i3v.real() / (kPi * kPi);
}

inline double qp_field(const FieldScenario& sc, Outcome s1, Outcome s2) {
    sc.validate();
    const Complex i1 = single_time_I(sc.beta, sc.omega_ell);
    return assemble_q(i1, i1, i3(sc), s1, s2);
}

/// All four outcomes with the covariance-route marginal at t2.
inline QuasiProbTable qp_field_table(const FieldScenario& sc) {
    sc.validate();
    const Complex i1 = single_time_I(sc.beta, sc.omega_ell);
    const Complex i3v = i3(sc);
    QuasiProbTable out;
    for (const auto s : kAllOutcomePairs) out.q[s.index()] = assemble_q(i1, i1, i3v, s.first, s.second);
    out.p2_plus = single_time_probability(sc.beta, sc.omega_ell);
    out.sum_check = out.q[0] + out.q[1] + out.q[2] + out.q[3] - 1.0;
    return out;
}

/// Product-form value with I3 replaced by I1 I2, the large-tau limit.
inline double qp_field_asymptotic(const FieldScenario& sc, Outcome s1, Outcome s2) {
    sc.validate();
    const Complex i1 = single_time_I(sc.beta, sc.omega_ell);
    return assemble_q(i1, i1, i1 * i1, s1, s2);
}

}  // namespace lgi::field
