#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "lgi/core/gaussian_integral.hpp"

namespace {

using lgi::Complex;
using lgi::QuadraticForm;

QuadraticForm<4> random_form(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    QuadraticForm<4> f;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) {
            const Complex w{0.3 * g(rng), 2.0 * g(rng)};
            f.add_symmetric(i, j, w);
        }
        f.m[i][i] += 4.0;  // keeps Re M diagonally dominant
        f.b[i] = {g(rng), g(rng)};
    }
    f.c = {0.1 * g(rng), g(rng)};
    return f;
}

TEST(GaussianIntegral, DiagonalRealForm) {
    QuadraticForm<2> f;
    f.m[0][0] = 2.0;
    f.m[1][1] = 0.5;
    f.b = {1.0, -2.0};
    const double expect = 2 * M_PI / std::sqrt(1.0) * std::exp(0.5 * (1.0 / 2.0 + 4.0 / 0.5));
    EXPECT_NEAR(lgi::gaussian_integral(f).real(), expect, 1e-12 * expect);
    EXPECT_NEAR(lgi::gaussian_integral(f).imag(), 0.0, 1e-12);
}

TEST(GaussianIntegral, BranchFollowsPivotsNotTheDeterminant) {
    // Four identical factors with arg(1 + 10i) ~ 1.47: arg det ~ 5.9 wraps past pi, so
    // sqrt(det M) would land on the wrong sheet. The separable answer is the product.
    QuadraticForm<4> f;
    const Complex a{1.0, 10.0};
    for (std::size_t i = 0; i < 4; ++i) f.m[i][i] = a;
    const Complex one = std::sqrt(2 * M_PI / a);
    const Complex expect = one * one * one * one;
    const Complex got = lgi::gaussian_integral(f);
    EXPECT_NEAR(std::abs(got - expect), 0.0, 1e-12 * std::abs(expect));
}

TEST(GaussianIntegral, OneDimensionalComplexCase) {
    QuadraticForm<1> f;
    f.m[0][0] = Complex{1.5, -0.7};
    f.b[0] = Complex{0.2, 1.3};
    f.c = Complex{0.0, 0.4};
    const Complex a = f.m[0][0];
    const Complex expect = std::sqrt(2 * M_PI / a) * std::exp(f.b[0] * f.b[0] / (2.0 * a) + f.c);
    EXPECT_NEAR(std::abs(lgi::gaussian_integral(f) - expect), 0.0, 1e-13);
}

TEST(GaussianIntegral, InvariantUnderVariablePermutation) {
    std::mt19937_64 rng(11);
    const std::size_t perm[4] = {2, 0, 3, 1};
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_form(rng);
        QuadraticForm<4> p;
        for (std::size_t i = 0; i < 4; ++i) {
            p.b[i] = f.b[perm[i]];
            for (std::size_t j = 0; j < 4; ++j) p.m[i][j] = f.m[perm[i]][perm[j]];
        }
        p.c = f.c;
        const Complex a = lgi::gaussian_integral(f);
        const Complex b = lgi::gaussian_integral(p);
        EXPECT_NEAR(std::abs(a - b), 0.0, 1e-11 * std::abs(a)) << "trial " << trial;
    }
}

TEST(GaussianIntegral, LogFormMatchesDirectForm) {
    std::mt19937_64 rng(3);
    const auto f = random_form(rng);
    EXPECT_NEAR(std::abs(std::exp(lgi::log_gaussian_integral(f)) - lgi::gaussian_integral(f)), 0.0, 1e-14);
}

TEST(GaussianIntegral, RejectsIndefiniteRealPart) {
    QuadraticForm<2> f;
    f.m[0][0] = 1.0;
    f.m[1][1] = Complex{-0.1, 3.0};
    EXPECT_THROW(lgi::gaussian_integral(f), lgi::NotPositiveDefinite);
}

TEST(GaussianIntegral, RejectsAsymmetricAndNonFinite) {
    QuadraticForm<2> f;
    f.m[0][0] = f.m[1][1] = 1.0;
    f.m[0][1] = 0.1;
    EXPECT_THROW(lgi::gaussian_integral(f), lgi::InvalidArgument);
    f.m[1][0] = 0.1;
    f.b[1] = Complex{NAN, 0.0};
    EXPECT_THROW(lgi::gaussian_integral(f), lgi::InvalidArgument);
}

TEST(GaussianIntegral, SingularDeterminant) {
    QuadraticForm<4> f;
    for (std::size_t i = 0; i < 4; ++i) f.m[i][i] = 1e-80;
    EXPECT_THROW(lgi::gaussian_integral(f), lgi::SingularForm);
}

TEST(GaussianIntegral, QuadraticValueConvention) {
    QuadraticForm<2> f;
    f.m[0][0] = 2.0;
    f.m[1][1] = 4.0;
    f.add_symmetric(0, 1, Complex{0.0, 1.0});
    f.b = {1.0, Complex{0.0, 2.0}};
    f.c = 0.5;
    // 1/2 (2 x^2 + 4 y^2 + 2 i x y) - x - 2 i y - 0.5 at (1, 2)
    const Complex expect = 0.5 * (2.0 + 16.0 + Complex{0.0, 4.0}) - 1.0 - Complex{0.0, 4.0} - 0.5;
    EXPECT_NEAR(std::abs(lgi::quadratic_value(f, {1.0, 2.0}) - expect), 0.0, 1e-15);
}

}  // namespace
