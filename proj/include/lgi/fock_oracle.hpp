#pragma once

// Brute-force reference in a truncated Fock space. Shares no formula with the closed forms:
// states are built by exponentiating the truncated ladder-operator generators.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lgi/core/error.hpp"
#include "lgi/core/tolerances.hpp"
#include "lgi/core/types.hpp"
#include "lgi/oscillator.hpp"

namespace lgi::fock {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix annihilation(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

/// exp(alpha a^dagger - conj(alpha) a), dense.
inline Matrix displacement(Complex alpha, std::size_t dim) {
    const Matrix a = annihilation(dim);
    const Matrix g = alpha * a.adjoint() - std::conj(alpha) * a;
    return g.exp();
}

/// exp(zeta/2 a^dagger^2 - conj(zeta)/2 a^2), dense.
inline Matrix squeeze(Complex zeta, std::size_t dim) {
    const Matrix a = annihilation(dim);
    const Matrix a2 = a * a;
    const Matrix g = 0.5 * zeta * a2.adjoint() - 0.5 * std::conj(zeta) * a2;
    return g.exp();
}

/// Gaussian generator alpha a^dagger - conj(alpha) a + zeta/2 a^dagger^2 - conj(zeta)/2 a^2.
struct Generator {
    Complex alpha{};
    Complex zeta{};

    // Y = G X, column by column, in the truncated space.
    void apply(const Matrix& x, Matrix& y) const {
        const Eigen::Index n = x.rows();
        y.resize(n, x.cols());
        for (Eigen::Index col = 0; col < x.cols(); ++col) {
            for (Eigen::Index k = 0; k < n; ++k) {
                const double dk = static_cast<double>(k);
                Complex acc{};
                if (k >= 1) acc += alpha * std::sqrt(dk) * x(k - 1, col);
                if (k + 1 < n) acc -= std::conj(alpha) * std::sqrt(dk + 1.0) * x(k + 1, col);
                if (k >= 2) acc += 0.5 * zeta * std::sqrt(dk * (dk - 1.0)) * x(k - 2, col);
                if (k + 2 < n) acc -= 0.5 * std::conj(zeta) * std::sqrt((dk + 1.0) * (dk + 2.0)) * x(k + 2, col);
                y(k, col) = acc;
            }
        }
    }

    [[nodiscard]] double norm_bound(std::size_t dim) const {
        const double d = static_cast<double>(dim);
        return 2.0 * std::abs(alpha) * std::sqrt(d) + std::abs(zeta) * d;
    }
};

/// exp(G) X by substepped Taylor series.
inline Matrix expm_action(const Generator& g, Matrix x) {
    const auto dim = static_cast<std::size_t>(x.rows());
    const double bound = g.norm_bound(dim);
    const int steps = std::max(1, static_cast<int>(std::ceil(bound / 0.5)));
    const Generator h{g.alpha / static_cast<double>(steps), g.zeta / static_cast<double>(steps)};
    Matrix term(x.rows(), x.cols());
    Matrix next(x.rows(), x.cols());
    for (int s = 0; s < steps; ++s) {
        Matrix sum = x;
        term = x;
        for (int k = 1; k < 60; ++k) {
            h.apply(term, next);
            term = next / static_cast<double>(k);
            sum += term;
            if (term.norm() <= 1e-17 * sum.norm()) break;
        }
        x = std::move(sum);
    }
    return x;
}

inline Vector basis(std::size_t k, std::size_t dim) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return v;
}

/// D(gamma) S(zeta) |0> in the truncated space.
inline Vector squeezed_coherent(const SqueezedCoherent& s, std::size_t dim) {
    Matrix v = basis(0, dim);
    v = expm_action({Complex{}, s.zeta}, v);
    v = expm_action({s.gamma, Complex{}}, v);
    return v.col(0);
}

/// Dense rho = D(alpha) diag(p_n) D(alpha)^dagger.
inline Matrix thermal_coherent_density(const OscillatorState& state, std::size_t dim) {
    state.validate();
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::VectorXd p(n);
    const double ea = state.boltzmann_ratio();
    double w = state.ground_population();
    for (Eigen::Index k = 0; k < n; ++k) {
        p(k) = w;
        w *= ea;
    }
    const Matrix d = displacement(state.alpha, dim);
    return d * p.cast<Complex>().asDiagonal() * d.adjoint();
}

/// Dense M_s at time t.
inline Matrix projector_matrix(const GaussianProjector& proj, double t, Outcome s, std::size_t dim) {
    const auto ps = projector_state(proj, t);
    const Vector psi = displacement(ps.gamma, dim) * squeeze(ps.zeta, dim) * basis(0, dim);
    const double sv = value(s);
    const auto n = static_cast<Eigen::Index>(dim);
    return (1.0 - sv) / 2.0 * Matrix::Identity(n, n) + sv * psi * psi.adjoint();
}

struct OracleTable {
    std::array<double, 4> q{};    // canonical order ++, +-, -+, --
    std::array<double, 4> p12{};  // Tr[M2 M1 rho M1]
    std::size_t dim = 0;          // truncation at which the values were accepted
    double delta = 0.0;           // max |value(dim) - value(dim / 2)|
    bool truncation_warning = false;
};

/// Heuristic: a truncation of `dim` comfortably holds the state and both projector states.
inline bool truncation_adequate(const OscillatorState& state, const GaussianProjector& proj, std::size_t dim) {
    const double sh = std::sinh(proj.r);
    const double nproj = std::norm(proj.gamma()) + sh * sh;
    const double nstate = std::norm(state.alpha) + (state.nu - 0.5);
    const double nbar = std::max(nproj, nstate) + std::norm(proj.gamma() - state.alpha);
    return static_cast<double>(dim) >= nbar + 10.0 * std::sqrt(nbar + 1.0) + 20.0 &&
           state.nu < static_cast<double>(dim) / 40.0;
}

namespace detail {

inline OracleTable table_at(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2,
                            std::size_t dim) {
    const Vector psi1 = squeezed_coherent(projector_state(proj, t1), dim);
    const Vector psi2 = squeezed_coherent(projector_state(proj, t2), dim);

    const double ea = state.boltzmann_ratio();
    std::size_t kth = 1;
    if (ea > 0.0) kth = static_cast<std::size_t>(std::ceil(std::log(1e-17) / std::log(ea))) + 1;
    kth = std::min(kth, dim / 2);
    Eigen::VectorXd p(static_cast<Eigen::Index>(kth));
    double w = 1.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        p(k) = w;
        w *= ea;
    }
    p /= p.sum();

    const Matrix phi = expm_action({state.alpha, Complex{}},
                                   Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(kth)));

    auto apply_projector = [](const Vector& psi, double s, const Matrix& x) -> Matrix {
        const Eigen::RowVectorXcd proj = psi.adjoint() * x;
        return (1.0 - s) / 2.0 * x + s * psi * proj;
    };

    OracleTable out;
    out.dim = dim;
    for (const auto s : kAllOutcomePairs) {
        const Matrix m1 = apply_projector(psi1, value(s.first), phi);
        const Matrix m2m1 = apply_projector(psi2, value(s.second), m1);
        double q = 0.0;
        double p12 = 0.0;
        for (Eigen::Index k = 0; k < p.size(); ++k) {
            q += p(k) * phi.col(k).dot(m2m1.col(k)).real();
            p12 += p(k) * m1.col(k).dot(m2m1.col(k)).real();
        }
        out.q[s.index()] = q;
        out.p12[s.index()] = p12;
    }
    return out;
}

}  // namespace detail

/// q and p12 for all outcome pairs. Starts at `dim0` and doubles until two successive
/// truncations agree to tol::truncation_stability; throws NoConvergence past `max_dim`.
inline OracleTable oracle_table(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2,
                                std::size_t dim0 = 120, std::size_t max_dim = 1920) {
    state.validate();
    proj.validate();
    if (!std::isfinite(t1) || !std::isfinite(t2)) throw InvalidArgument("times must be finite");
    if (dim0 < 8) throw InvalidArgument("oracle truncation must be at least 8");
    const bool warn = !truncation_adequate(state, proj, dim0);
    OracleTable prev = detail::table_at(state, proj, t1, t2, dim0);
    for (std::size_t dim = 2 * dim0; dim <= max_dim; dim *= 2) {
        OracleTable cur = detail::table_at(state, proj, t1, t2, dim);
        double delta = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            delta = std::max(delta, std::abs(cur.q[i] - prev.q[i]));
            delta = std::max(delta, std::abs(cur.p12[i] - prev.p12[i]));
        }
        cur.delta = delta;
        cur.truncation_warning = warn;
        if (delta < tol::truncation_stability) return cur;
        prev = std::move(cur);
    }
    throw NoConvergence("Fock oracle did not stabilise under truncation doubling", prev.delta);
}

inline double qp_oracle(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2, Outcome s1,
                        Outcome s2, std::size_t dim0 = 120) {
    return oracle_table(state, proj, t1, t2, dim0).q[OutcomePair{s1, s2}.index()];
}

/// Tr[M2 M1 rho M1], the sequential two-time probability.
inline double p12_oracle(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2, Outcome s1,
                         Outcome s2, std::size_t dim0 = 120) {
    return oracle_table(state, proj, t1, t2, dim0).p12[OutcomePair{s1, s2}.index()];
}

}  // namespace lgi::fock
