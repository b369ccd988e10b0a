#pragma once

#include <cmath>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lgi/core/error.hpp"
#include "lgi/core/tolerances.hpp"
#include "lgi/core/types.hpp"

namespace lgi {

/// integral_0^inf f(k) dk for a smooth integrand decaying on the scale `decay_scale`.
/// Throws NoConvergence when the Gauss-Kronrod error estimate exceeds the absolute tolerance.
template <class F>
auto semi_infinite_quadrature(F&& f, double decay_scale, double abs_tol = tol::quadrature_absolute) {
    using R = std::decay_t<decltype(f(0.0))>;
    if (!(decay_scale > 0.0) || !std::isfinite(decay_scale))
        throw InvalidArgument("semi_infinite_quadrature: decay scale must be positive and finite");
    auto g = [&](double u) -> R { return decay_scale * f(decay_scale * u); };
    double err = 0.0;
    double l1 = 0.0;
    const R value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        g, 0.0, std::numeric_limits<double>::infinity(), 30, 1e-14, &err, &l1);
    if (!(err <= abs_tol)) throw NoConvergence("semi-infinite quadrature", err);
    return value;
}

/// Nodes and weights for integral exp(-x^2) f(x) dx over the real line.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Golub-Welsch: eigen-decomposition of the Hermite Jacobi matrix.
inline GaussHermiteRule gauss_hermite(std::size_t n) {
    if (n == 0) throw InvalidArgument("gauss_hermite: need at least one node");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k < n; ++k) {
        const double off = std::sqrt(0.5 * static_cast<double>(k));
        jac(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = off;
        jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        rule.nodes[i] = es.eigenvalues()(ii);
        const double v0 = es.eigenvectors()(0, ii);
        rule.weights[i] = kSqrtPi * v0 * v0;
    }
    return rule;
}

}  // namespace lgi
