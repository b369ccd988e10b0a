#include <cmath>

#include <gtest/gtest.h>

#include "lgi/core/special.hpp"

namespace {

// Reference values from 40-digit arbitrary-precision evaluation of sqrt(pi)/2 exp(-x^2) erfi(x).
struct DawsonCase {
    double x;
    double f;
};

constexpr DawsonCase kDawson[] = {
    {0.25, 0.23983916356289821}, {0.5, 0.4244363835020223},  {1.0, 0.53807950691276842},
    {2.0, 0.30134038892379197},  {3.5, 0.14962159308075648}, {7.5, 0.067275811644630616},
    {9.9, 0.050766750651804698}, {12.0, 0.04181287645398826}, {40.0, 0.012503909917843973},
};

TEST(Dawson, MatchesHighPrecisionReference) {
    for (const auto& c : kDawson) {
        EXPECT_NEAR(lgi::dawson(c.x), c.f, 2e-15 * c.f) << "x=" << c.x;
        EXPECT_DOUBLE_EQ(lgi::dawson(-c.x), -lgi::dawson(c.x));
    }
}

TEST(Dawson, ContinuousAcrossBranchSwitches) {
    for (double x : {1.0, 10.0}) {
        const double lo = lgi::dawson(std::nextafter(x, 0.0));
        const double hi = lgi::dawson(x);
        EXPECT_NEAR(lo, hi, 1e-14) << "x=" << x;
    }
}

TEST(Dawson, SmallAndLargeLimits) {
    EXPECT_EQ(lgi::dawson(0.0), 0.0);
    EXPECT_NEAR(lgi::dawson(1e-8), 1e-8, 1e-22);
    EXPECT_NEAR(lgi::dawson(1e6) * 2e6, 1.0, 1e-12);
    EXPECT_EQ(lgi::dawson(INFINITY), 0.0);
}

TEST(Dawson, SatisfiesItsOdeOnAGrid) {
    // F' = 1 - 2 x F
    for (double x = 0.05; x < 20.0; x += 0.173) {
        const double h = 1e-5;
        const double deriv = (lgi::dawson(x + h) - lgi::dawson(x - h)) / (2 * h);
        EXPECT_NEAR(deriv, 1.0 - 2.0 * x * lgi::dawson(x), 1e-8) << "x=" << x;
    }
}

TEST(ErfiDamped, IsTwoOverRootPiTimesDawson) {
    EXPECT_NEAR(lgi::erfi_damped(1.0), 2.0 / std::sqrt(M_PI) * 0.53807950691276842, 1e-15);
    // 1/(sqrt(pi) x) (1 + 1/(2x^2) + 3/(4x^4) + ...); the next term is below 1e-10 here.
    EXPECT_NEAR(lgi::erfi_damped(30.0), 1.0 / (std::sqrt(M_PI) * 30.0) * (1 + 1 / 1800.0 + 3.0 / 3240000.0), 1e-10);
}

}  // namespace
