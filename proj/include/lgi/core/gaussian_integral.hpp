#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "lgi/core/error.hpp"
#include "lgi/core/tolerances.hpp"
#include "lgi/core/types.hpp"

namespace lgi {

/// Exponent -1/2 v^T M v + b^T v + c over real v in R^Dim. M is complex symmetric.
template <std::size_t Dim>
struct QuadraticForm {
    static_assert(Dim >= 1);
    static constexpr std::size_t dim = Dim;

    std::array<std::array<Complex, Dim>, Dim> m{};
    std::array<Complex, Dim> b{};
    Complex c{};

    /// Adds w to both (i, j) and (j, i), or once to the diagonal.
    void add_symmetric(std::size_t i, std::size_t j, Complex w) {
        m[i][j] += w;
        if (i != j) m[j][i] += w;
    }
};

/// Value of the negated exponent, 1/2 v^T M v - b^T v - c.
template <std::size_t Dim>
Complex quadratic_value(const QuadraticForm<Dim>& form, const std::array<double, Dim>& v) {
    Complex acc{};
    for (std::size_t i = 0; i < Dim; ++i) {
        Complex row{};
        for (std::size_t j = 0; j < Dim; ++j) row += form.m[i][j] * v[j];
        acc += 0.5 * v[i] * row - form.b[i] * v[i];
    }
    return acc - form.c;
}

template <std::size_t Dim>
void validate(const QuadraticForm<Dim>& form) {
    for (std::size_t i = 0; i < Dim; ++i) {
        if (!is_finite(form.b[i])) throw InvalidArgument("quadratic form: non-finite linear term");
        for (std::size_t j = 0; j < Dim; ++j) {
            if (!is_finite(form.m[i][j])) throw InvalidArgument("quadratic form: non-finite matrix entry");
            const double scale = 1.0 + std::abs(form.m[i][j]);
            if (std::abs(form.m[i][j] - form.m[j][i]) > tol::symmetry * scale)
                throw InvalidArgument("quadratic form: matrix is not symmetric at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
    }
    if (!is_finite(form.c)) throw InvalidArgument("quadratic form: non-finite constant");
}

/// log of integral_{R^Dim} exp(-1/2 v^T M v + b^T v + c) dv.
///
/// The determinant enters as a product of principal square roots of the LDL^T pivots.
/// With Re M positive definite every pivot has positive real part, so this product is the
/// analytic continuation of det(M)^(-1/2) from real M, independent of variable ordering.
template <std::size_t Dim>
Complex log_gaussian_integral(const QuadraticForm<Dim>& form) {
    validate(form);

    // Cholesky test of Re M.
    {
        std::array<std::array<double, Dim>, Dim> l{};
        for (std::size_t j = 0; j < Dim; ++j) {
            double d = form.m[j][j].real();
            for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
            if (!(d > 0.0)) throw NotPositiveDefinite("Re M is not positive definite (pivot " + std::to_string(j) + ")");
            l[j][j] = std::sqrt(d);
            for (std::size_t i = j + 1; i < Dim; ++i) {
                double s = form.m[i][j].real();
                for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
                l[i][j] = s / l[j][j];
            }
        }
    }

    // Complex symmetric LDL^T without pivoting.
    std::array<std::array<Complex, Dim>, Dim> l{};
    std::array<Complex, Dim> d{};
    for (std::size_t j = 0; j < Dim; ++j) {
        Complex dj = form.m[j][j];
        for (std::size_t k = 0; k < j; ++k) dj -= l[j][k] * l[j][k] * d[k];
        d[j] = dj;
        l[j][j] = 1.0;
        for (std::size_t i = j + 1; i < Dim; ++i) {
            Complex s = form.m[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k] * d[k];
            l[i][j] = s / dj;
        }
    }

    double log_abs_det = 0.0;
    Complex half_log_det{};
    for (std::size_t k = 0; k < Dim; ++k) {
        log_abs_det += std::log(std::abs(d[k]));
        half_log_det += 0.5 * std::log(d[k]);
    }
    if (log_abs_det < std::log(tol::singular_determinant)) throw SingularForm("|det M| below singularity threshold");

    // y = M^{-1} b
    std::array<Complex, Dim> y = form.b;
    for (std::size_t i = 0; i < Dim; ++i)
        for (std::size_t k = 0; k < i; ++k) y[i] -= l[i][k] * y[k];
    for (std::size_t i = 0; i < Dim; ++i) y[i] /= d[i];
    for (std::size_t i = Dim; i-- > 0;)
        for (std::size_t k = i + 1; k < Dim; ++k) y[i] -= l[k][i] * y[k];

    Complex bmb{};
    for (std::size_t i = 0; i < Dim; ++i) bmb += form.b[i] * y[i];

    return 0.5 * static_cast<double>(Dim) * std::log(2.0 * kPi) - half_log_det + 0.5 * bmb + form.c;
}

template <std::size_t Dim>
Complex gaussian_integral(const QuadraticForm<Dim>& form) {
    return std::exp(log_gaussian_integral(form));
}

}  // namespace lgi
