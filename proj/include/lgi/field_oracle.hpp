#pragma once

// Quadrature references for the field module: I4 straight from its defining k-integral
// over the k-mode displacements Z_k, and I3 by tensor Gauss-Hermite quadrature.

#include <array>
#include <cmath>
#include <vector>

#include "lgi/core/gaussian_integral.hpp"
#include "lgi/core/quadrature.hpp"
#include "lgi/field.hpp"

namespace lgi::field::oracle {

/// Physical-units description of the two measurements.
struct PhysicalSetup {
    double omega = 1.0;
    double ell = 1.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double x_a = 0.0;
};

/// Z_k(z, t) = i k w_q(k) (z cosh r_k - conj(z) sinh r_k) e^{i k (t + x_A)}, exp(r_k) = sqrt(omega / k).
inline Complex mode_displacement(double k, Complex z, double t, const PhysicalSetup& p) {
    const double er = std::sqrt(p.omega / k);
    const double c = 0.5 * (er + 1.0 / er);
    const double s = 0.5 * (er - 1.0 / er);
    return Complex{0.0, k * window_fourier(k, p.ell)} * (z * c - std::conj(z) * s) * std::polar(1.0, k * (t + p.x_a));
}

/// integral_0^inf dk [ |Z1|^2 / 2 + |Z2|^2 / 2 + conj(Z2) Z1 ].
inline Complex i4_quadrature(const PhysicalSetup& p, Complex z1, Complex z2) {
    auto f = [&](double k) -> Complex {
        if (k == 0.0) return 0.0;
        const Complex a = mode_displacement(k, z1, p.t1, p);
        const Complex b = mode_displacement(k, z2, p.t2, p);
        return 0.5 * std::norm(a) + 0.5 * std::norm(b) + std::conj(b) * a;
    };
    return semi_infinite_quadrature(f, 1.0 / p.ell, 1e-11);
}

/// i4_form rebuilt from ten evaluations of the k-integral at unit vectors and their pairwise sums.
inline QuadraticForm<4> i4_form_by_quadrature(const PhysicalSetup& p) {
    auto eval = [&](const std::array<double, 4>& v) {
        return i4_quadrature(p, Complex{v[0], v[1]}, Complex{v[2], v[3]});
    };
    std::array<Complex, 4> diag{};
    for (std::size_t i = 0; i < 4; ++i) {
        std::array<double, 4> e{};
        e[i] = 1.0;
        diag[i] = eval(e);
    }
    QuadraticForm<4> f;
    for (std::size_t i = 0; i < 4; ++i) {
        f.m[i][i] = 2.0 * diag[i];
        for (std::size_t j = i + 1; j < 4; ++j) {
            std::array<double, 4> e{};
            e[i] = 1.0;
            e[j] = 1.0;
            const Complex qij = 0.5 * (eval(e) - diag[i] - diag[j]);
            f.add_symmetric(i, j, 2.0 * qij);
        }
    }
    return f;
}

/// Tensor Gauss-Hermite quadrature of exp(-1/2 v^T M v + b^T v + c) after whitening by the
/// real Cholesky factor of Re M. Independent of the LDL^T / branch logic of gaussian_integral.
template <std::size_t Dim>
Complex gauss_hermite_integral(const QuadraticForm<Dim>& form, std::size_t nodes) {
    validate(form);
    // Re M = L L^T; v = sqrt2 L^{-T} u turns the real quadratic part into u^T u.
    std::array<std::array<double, Dim>, Dim> l{};
    for (std::size_t j = 0; j < Dim; ++j) {
        double d = form.m[j][j].real();
        for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
        if (!(d > 0.0)) throw NotPositiveDefinite("gauss_hermite_integral: Re M not positive definite");
        l[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < Dim; ++i) {
            double s = form.m[i][j].real();
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            l[i][j] = s / l[j][j];
        }
    }
    // T = sqrt2 L^{-T}: solve L^T T = sqrt2 I column by column.
    std::array<std::array<double, Dim>, Dim> t{};
    double det_l = 1.0;
    for (std::size_t i = 0; i < Dim; ++i) det_l *= l[i][i];
    for (std::size_t col = 0; col < Dim; ++col) {
        for (std::size_t i = Dim; i-- > 0;) {
            double s = (i == col) ? std::sqrt(2.0) : 0.0;
            for (std::size_t k = i + 1; k < Dim; ++k) s -= l[k][i] * t[k][col];
            t[i][col] = s / l[i][i];
        }
    }
    // Remaining exponent in u: sum_ij A_ij u_i u_j + g^T u + c, with A = -(i/2) T^T Im(M) T.
    std::array<std::array<Complex, Dim>, Dim> a{};
    std::array<Complex, Dim> g{};
    for (std::size_t i = 0; i < Dim; ++i) {
        for (std::size_t j = 0; j < Dim; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < Dim; ++p)
                for (std::size_t q = 0; q < Dim; ++q) acc += t[p][i] * form.m[p][q].imag() * t[q][j];
            a[i][j] = Complex{0.0, -0.5 * acc};
        }
        for (std::size_t p = 0; p < Dim; ++p) g[i] += t[p][i] * form.b[p];
    }
    const auto rule = gauss_hermite(nodes);
    const double jac = std::pow(2.0, 0.5 * static_cast<double>(Dim)) / det_l;

    // Odometer over the tensor grid with the exponent accumulated level by level.
    std::array<std::size_t, Dim> idx{};
    std::array<Complex, Dim + 1> partial{};
    std::array<double, Dim + 1> weight{};
    partial[0] = 0.0;
    weight[0] = 1.0;
    auto refresh = [&](std::size_t level) {
        for (std::size_t d = level; d < Dim; ++d) {
            const double u = rule.nodes[idx[d]];
            Complex e = a[d][d] * u * u + g[d] * u;
            for (std::size_t k = 0; k < d; ++k) e += 2.0 * a[k][d] * rule.nodes[idx[k]] * u;
            partial[d + 1] = partial[d] + e;
            weight[d + 1] = weight[d] * rule.weights[idx[d]];
        }
    };
    refresh(0);
    Complex sum{};
    for (;;) {
        sum += weight[Dim] * std::exp(partial[Dim]);
        std::size_t d = Dim;
        while (d > 0) {
            --d;
            if (++idx[d] < nodes) break;
            idx[d] = 0;
            if (d == 0) return jac * sum * std::exp(form.c);
        }
        refresh(d);
    }
}

/// I3 by 4D Gauss-Hermite with the I4 coefficients supplied by the caller.
inline Complex i3_quadrature(Complex beta, const QuadraticForm<4>& i4, std::size_t nodes) {
    QuadraticForm<4> f = i4;
    field::detail::add_measurement_weights(f, beta);
    return gauss_hermite_integral(f, nodes);
}

/// I1 by 2D Gauss-Hermite.
inline Complex i1_quadrature(Complex beta, double omega_ell, std::size_t nodes) {
    const auto v = mode_variances(omega_ell);
    QuadraticForm<2> f;
    f.m[0][0] = 1.0 + 2.0 * v.p;
    f.m[1][1] = 1.0 + 2.0 * v.x;
    f.b = {Complex{0.0, 2.0 * beta.imag()}, Complex{0.0, -2.0 * beta.real()}};
    return gauss_hermite_integral(f, nodes);
}

/// Full quadrature pipeline for q: I4 from the k-integral, I1 and I3 by Gauss-Hermite.
inline double qp_field_quadrature(const FieldScenario& sc, Outcome s1, Outcome s2, std::size_t nodes) {
    sc.validate();
    const PhysicalSetup p{sc.omega_ell, 1.0, 0.0, sc.tau, 0.0};
    const auto i4 = i4_form_by_quadrature(p);
    const Complex i1 = i1_quadrature(sc.beta, sc.omega_ell, nodes);
    return assemble_q(i1, i1, i3_quadrature(sc.beta, i4, nodes), s1, s2);
}

}  // namespace lgi::field::oracle
