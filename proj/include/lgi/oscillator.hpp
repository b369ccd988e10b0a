#pragma once

// Two-time quasi-probabilities for a harmonic oscillator (unit frequency) prepared in a
// thermal-coherent state and probed twice with a Gaussian-state projector
// M_s = (1 - s)/2 + s |psi(t)><psi(t)|.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "lgi/core/error.hpp"
#include "lgi/core/gaussian_integral.hpp"
#include "lgi/core/tolerances.hpp"
#include "lgi/core/types.hpp"

namespace lgi {

/// Displaced thermal state D(alpha) rho_th D(alpha)^dagger with <X^2> = <P^2> = nu (vacuum: nu = 1/2).
struct OscillatorState {
    Complex alpha{};
    double nu = 0.5;

    void validate() const {
        if (!is_finite(alpha)) throw InvalidArgument("state: alpha must be finite");
        if (!std::isfinite(nu) || nu < 0.5) throw InvalidArgument("state: nu must be finite and >= 1/2");
    }
    /// exp(-A) = (nu - 1/2)/(nu + 1/2), the Boltzmann ratio of successive Fock populations.
    [[nodiscard]] double boltzmann_ratio() const { return (nu - 0.5) / (nu + 0.5); }
    /// 1 - exp(-A) = 1/(nu + 1/2), the ground-state population.
    [[nodiscard]] double ground_population() const { return 1.0 / (nu + 0.5); }
};

/// Projector onto the squeezed coherent state of the b-mode, b = cosh(r) a + sinh(r) a^dagger,
/// with b-amplitude beta. r = 0 is a plain coherent-state projector.
struct GaussianProjector {
    Complex beta{};
    double r = 0.0;

    void validate() const {
        if (!is_finite(beta)) throw InvalidArgument("projector: beta must be finite");
        if (!std::isfinite(r)) throw InvalidArgument("projector: r must be finite");
    }
    /// a-mode displacement gamma = beta cosh r - conj(beta) sinh r.
    [[nodiscard]] Complex gamma() const { return beta * std::cosh(r) - std::conj(beta) * std::sinh(r); }
};

/// |gamma, zeta> = D(gamma) S(zeta) |0>, S(zeta) = exp(zeta/2 a^dagger^2 - conj(zeta)/2 a^2).
struct SqueezedCoherent {
    Complex gamma{};
    Complex zeta{};
};

/// The projector state after free evolution for time t.
inline SqueezedCoherent projector_state(const GaussianProjector& proj, double t) {
    return {std::polar(1.0, t) * proj.gamma(), std::polar(proj.r, 2.0 * t + kPi)};
}

namespace detail {

inline void check_time(double t, const char* name) {
    if (!std::isfinite(t)) throw InvalidArgument(std::string(name) + " must be finite");
}

// Polar pieces (r, e^{i phi}) of zeta with r allowed negative as long as it matches the projector.
struct SqueezePolar {
    double r;
    Complex phase;
};

inline SqueezePolar polar_of(Complex zeta) {
    const double r = std::abs(zeta);
    return {r, r > 0 ? zeta / r : Complex{1.0, 0.0}};
}

}  // namespace detail

/// <0 | gamma, zeta>.
inline Complex vacuum_overlap(const SqueezedCoherent& s) {
    const auto [r, ph] = detail::polar_of(s.zeta);
    const Complex gc = std::conj(s.gamma);
    return std::exp(-0.5 * std::norm(s.gamma) + 0.5 * ph * gc * gc * std::tanh(r)) / std::sqrt(std::cosh(r));
}

/// <g1, z1 | g2, z2> for two states sharing the squeeze modulus |z1| = |z2|.
inline Complex squeezed_overlap(const SqueezedCoherent& s1, const SqueezedCoherent& s2) {
    const auto p1 = detail::polar_of(s1.zeta);
    const auto p2 = detail::polar_of(s2.zeta);
    if (std::abs(p1.r - p2.r) > 1e-12 * (1.0 + p1.r))
        throw InvalidArgument("squeezed_overlap: squeeze moduli differ");
    const double c = std::cosh(p1.r);
    const double s = std::sinh(p1.r);
    const Complex b1 = s1.gamma;
    const Complex b2 = s2.gamma;
    // Re(sigma) >= 1, so the principal root is continuous in the phases.
    const Complex sigma = c * c - p2.phase * std::conj(p1.phase) * s * s;
    const Complex eta21 = (b2 - b1) * c - std::conj(b2 - b1) * p2.phase * s;
    const Complex eta12 = (b1 - b2) * c - std::conj(b1 - b2) * p1.phase * s;
    const Complex expo = eta21 * std::conj(eta12) / (2.0 * sigma) + 0.5 * (b2 * std::conj(b1) - std::conj(b2) * b1);
    return std::exp(expo) / std::sqrt(sigma);
}

/// Probability of the + outcome of a projector at time t, from Gaussian covariance matrices.
inline double single_time_probability(const OscillatorState& state, const GaussianProjector& proj, double t) {
    state.validate();
    proj.validate();
    detail::check_time(t, "t");
    const auto ps = projector_state(proj, t);
    const auto [r, ph] = detail::polar_of(ps.zeta);
    const double phi = std::arg(ph);
    const double ch = std::cosh(2.0 * r);
    const double sh = std::sinh(2.0 * r);
    // Quadratures X = (a + a^dagger)/sqrt2, P = (a - a^dagger)/(i sqrt2).
    const double sxx = state.nu + 0.5 * (ch + sh * std::cos(phi));
    const double spp = state.nu + 0.5 * (ch - sh * std::cos(phi));
    const double sxp = 0.5 * sh * std::sin(phi);
    const double det = sxx * spp - sxp * sxp;
    const Complex d = ps.gamma - state.alpha;
    const double dx = std::sqrt(2.0) * d.real();
    const double dp = std::sqrt(2.0) * d.imag();
    const double quad = (spp * dx * dx - 2.0 * sxp * dx * dp + sxx * dp * dp) / det;
    return std::exp(-0.5 * quad) / std::sqrt(det);
}

inline double single_time_probability(const OscillatorState& state, const GaussianProjector& proj, double t,
                                      Outcome s) {
    const double p = single_time_probability(state, proj, t);
    return s == Outcome::plus ? p : 1.0 - p;
}

/// Vacuum state, coherent projector.
inline double qp_vacuum_coherent(Complex beta, double t1, double t2, Outcome s1, Outcome s2) {
    if (!is_finite(beta)) throw InvalidArgument("beta must be finite");
    detail::check_time(t1, "t1");
    detail::check_time(t2, "t2");
    const double a = value(s1);
    const double b = value(s2);
    const Complex b1 = std::polar(1.0, t1) * beta;
    const Complex b2 = std::polar(1.0, t2) * beta;
    const double n1 = std::norm(b1);
    const double n2 = std::norm(b2);
    return (1 - a) * (1 - b) / 4 + a * (1 - b) / 2 * std::exp(-n1) + b * (1 - a) / 2 * std::exp(-n2) +
           a * b * std::exp(-n1 - n2) * std::exp(std::conj(b2) * b1).real();
}

/// Thermal-coherent state, coherent projector. Rejects squeezed projectors.
inline double qp_thermal_coherent(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2,
                                  Outcome s1, Outcome s2) {
    state.validate();
    proj.validate();
    if (proj.r != 0.0) throw InvalidProjector("thermal-coherent closed form needs a coherent projector (r = 0)");
    detail::check_time(t1, "t1");
    detail::check_time(t2, "t2");
    const double a = value(s1);
    const double b = value(s2);
    const double cg = state.ground_population();
    const double ea = state.boltzmann_ratio();
    const Complex d1 = std::polar(1.0, t1) * proj.beta - state.alpha;
    const Complex d2 = std::polar(1.0, t2) * proj.beta - state.alpha;
    const double n1 = std::norm(d1);
    const double n2 = std::norm(d2);
    const double cross = std::exp(-n1 - n2 + std::conj(d2) * d1 + ea * d2 * std::conj(d1)).real();
    return (1 - a) * (1 - b) / 4 +
           cg * (a * (1 - b) / 2 * std::exp(-cg * n1) + b * (1 - a) / 2 * std::exp(-cg * n2) + a * b * cross);
}

/// |<0|gamma, zeta>|^2 for the projector state; independent of time.
inline double squeezed_vacuum_overlap(const GaussianProjector& proj) {
    proj.validate();
    const Complex g = proj.gamma();
    return std::exp(-std::norm(g) - (std::conj(g) * std::conj(g)).real() * std::tanh(proj.r)) / std::cosh(proj.r);
}

/// Vacuum state, squeezed projector.
inline double qp_vacuum_squeezed(const GaussianProjector& proj, double t1, double t2, Outcome s1, Outcome s2) {
    proj.validate();
    detail::check_time(t1, "t1");
    detail::check_time(t2, "t2");
    const double a = value(s1);
    const double b = value(s2);
    const auto p1 = projector_state(proj, t1);
    const auto p2 = projector_state(proj, t2);
    // <0|psi(t)> does not depend on t, so the vacuum phases cancel in the cross term.
    const double p = squeezed_vacuum_overlap(proj);
    return (1 - a) * (1 - b) / 4 +
           p * (a * (1 - b) / 2 + b * (1 - a) / 2 + a * b * squeezed_overlap(p2, p1).real());
}

/// Fock amplitudes <n | gamma, zeta> for n < count, by the three-term recursion.
inline std::vector<Complex> fock_amplitudes(const SqueezedCoherent& s, std::size_t count) {
    std::vector<Complex> c(count);
    if (count == 0) return c;
    const auto [r, ph] = detail::polar_of(s.zeta);
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    const Complex kappa = s.gamma * ch - std::conj(s.gamma) * ph * sh;
    c[0] = vacuum_overlap(s);
    if (count > 1) c[1] = kappa * c[0] / ch;
    for (std::size_t n = 1; n + 1 < count; ++n) {
        const double dn = static_cast<double>(n);
        c[n + 1] = (kappa * c[n] + ph * sh * std::sqrt(dn) * c[n - 1]) / (ch * std::sqrt(dn + 1.0));
    }
    return c;
}

/// Thermal-coherent state, squeezed projector: Fock-basis series over the thermal populations,
/// evaluated in the frame displaced by -alpha. Exact for nu = 1/2 after one term.
inline double qp_thermal_squeezed(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2,
                                  Outcome s1, Outcome s2) {
    state.validate();
    proj.validate();
    detail::check_time(t1, "t1");
    detail::check_time(t2, "t2");
    const double a = value(s1);
    const double b = value(s2);
    auto ps1 = projector_state(proj, t1);
    auto ps2 = projector_state(proj, t2);
    ps1.gamma -= state.alpha;
    ps2.gamma -= state.alpha;

    const double ea = state.boltzmann_ratio();
    std::size_t terms = 1;
    if (ea > 0.0) {
        // populations C e^{-An}; |amplitudes| <= 1 bounds the tail by e^{-A terms}
        terms = static_cast<std::size_t>(std::ceil(std::log(tol::series_tail) / std::log(ea))) + 1;
        if (terms > 5'000'000) throw NoConvergence("thermal-squeezed series: temperature too high", ea);
    }
    const auto c1 = fock_amplitudes(ps1, terms);
    const auto c2 = fock_amplitudes(ps2, terms);
    const double cg = state.ground_population();
    double w = cg;
    double p1 = 0.0;
    double p2 = 0.0;
    Complex cross{};
    for (std::size_t n = 0; n < terms; ++n) {
        p1 += w * std::norm(c1[n]);
        p2 += w * std::norm(c2[n]);
        cross += w * c2[n] * std::conj(c1[n]);
        w *= ea;
    }
    const Complex ov21 = squeezed_overlap(ps2, ps1);
    return (1 - a) * (1 - b) / 4 + a * (1 - b) / 2 * p1 + b * (1 - a) / 2 * p2 + a * b * (cross * ov21).real();
}

/// Routes to the cheapest exact evaluator for the scenario.
inline double quasi_probability(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2,
                                Outcome s1, Outcome s2) {
    if (proj.r == 0.0) return qp_thermal_coherent(state, proj, t1, t2, s1, s2);
    if (state.nu == 0.5 && state.alpha == Complex{}) {
        proj.validate();
        return qp_vacuum_squeezed(proj, t1, t2, s1, s2);
    }
    return qp_thermal_squeezed(state, proj, t1, t2, s1, s2);
}

/// All four outcome pairs plus the independent single-time marginal at t2.
struct QuasiProbTable {
    std::array<double, 4> q{};  // canonical order ++, +-, -+, --
    double p2_plus = 0.0;
    double sum_check = 0.0;  // sum(q) - 1

    [[nodiscard]] double at(OutcomePair s) const { return q[s.index()]; }
    [[nodiscard]] double marginal_residual(Outcome s2) const {
        const double lhs = q[OutcomePair{Outcome::plus, s2}.index()] + q[OutcomePair{Outcome::minus, s2}.index()];
        const double rhs = s2 == Outcome::plus ? p2_plus : 1.0 - p2_plus;
        return lhs - rhs;
    }
    [[nodiscard]] double minimum() const {
        double m = q[0];
        for (double x : q) m = x < m ? x : m;
        return m;
    }
};

inline QuasiProbTable qp_table(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2) {
    QuasiProbTable out;
    for (const auto s : kAllOutcomePairs) out.q[s.index()] = quasi_probability(state, proj, t1, t2, s.first, s.second);
    out.p2_plus = single_time_probability(state, proj, t2);
    out.sum_check = out.q[0] + out.q[1] + out.q[2] + out.q[3] - 1.0;
    return out;
}

namespace detail {

// Z(t, z) = e^{it}(z cosh r - conj(z) sinh r) = e^{it}(x e^{-r} + i y e^{r}) as a linear map of (x, y).
inline std::array<Complex, 2> displacement_row(double r, double t) {
    const Complex ph = std::polar(1.0, t);
    return {ph * std::exp(-r), ph * Complex{0.0, std::exp(r)}};
}

// Adds |sum_k a_k v_k|^2 * weight to the -1/2 v^T M v convention (so M += 2 weight Re(conj(a) a^T)).
template <std::size_t Dim>
void add_modulus_squared(QuadraticForm<Dim>& f, const std::array<Complex, Dim>& a, double weight) {
    for (std::size_t i = 0; i < Dim; ++i)
        for (std::size_t j = 0; j < Dim; ++j) f.m[i][j] += 2.0 * weight * (std::conj(a[i]) * a[j]).real();
}

// Linear term Z conj(alpha) - conj(Z) alpha of the displacement characteristic function.
template <std::size_t Dim>
void add_alpha_linear(QuadraticForm<Dim>& f, const std::array<Complex, Dim>& a, Complex alpha) {
    for (std::size_t i = 0; i < Dim; ++i) f.b[i] += a[i] * std::conj(alpha) - std::conj(a[i]) * alpha;
}

// Weight exp(-|z|^2/2 - conj(beta) z + beta conj(z)) on the block starting at `offset`.
template <std::size_t Dim>
void add_projector_weight(QuadraticForm<Dim>& f, std::size_t offset, Complex beta) {
    f.m[offset][offset] += 1.0;
    f.m[offset + 1][offset + 1] += 1.0;
    f.b[offset] += Complex{0.0, 2.0 * beta.imag()};
    f.b[offset + 1] += Complex{0.0, -2.0 * beta.real()};
}

}  // namespace detail

/// Independent evaluation that writes each projector as a phase-space integral over displacement
/// operators and the thermal-coherent expectation of D(Z2) D(Z1) as a Gaussian; the resulting
/// 2- and 4-dimensional Gaussian integrals are done exactly.
inline double qp_displacement_route(const OscillatorState& state, const GaussianProjector& proj, double t1, double t2,
                                    Outcome s1, Outcome s2) {
    state.validate();
    proj.validate();
    detail::check_time(t1, "t1");
    detail::check_time(t2, "t2");
    const double a = value(s1);
    const double b = value(s2);
    const auto r1 = detail::displacement_row(proj.r, t1);
    const auto r2 = detail::displacement_row(proj.r, t2);

    auto single = [&](const std::array<Complex, 2>& row) {
        QuadraticForm<2> f;
        detail::add_projector_weight(f, 0, proj.beta);
        detail::add_modulus_squared(f, row, state.nu);
        detail::add_alpha_linear(f, row, state.alpha);
        return gaussian_integral(f);
    };

    QuadraticForm<4> f;
    detail::add_projector_weight(f, 0, proj.beta);
    detail::add_projector_weight(f, 2, proj.beta);
    const std::array<Complex, 4> z1{r1[0], r1[1], 0.0, 0.0};
    const std::array<Complex, 4> z2{0.0, 0.0, r2[0], r2[1]};
    std::array<Complex, 4> sum{};
    for (std::size_t i = 0; i < 4; ++i) sum[i] = z1[i] + z2[i];
    detail::add_modulus_squared(f, sum, state.nu);
    detail::add_alpha_linear(f, sum, state.alpha);
    // 1/2 (Z2 conj(Z1) - conj(Z2) Z1), symmetrised into M with the -1/2 convention.
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const Complex bij = 0.5 * (z2[i] * std::conj(z1[j]) - std::conj(z2[i]) * z1[j]);
            const Complex bji = 0.5 * (z2[j] * std::conj(z1[i]) - std::conj(z2[j]) * z1[i]);
            f.m[i][j] -= bij + bji;
        }

    double q = (1 - a) * (1 - b) / 4;
    if (a * (1 - b) != 0.0) q += a * (1 - b) * single(r1).real() / (2.0 * kPi);
    if (b * (1 - a) != 0.0) q += b * (1 - a) * single(r2).real() / (2.0 * kPi);
    q += a * b * gaussian_integral(f).real() / (kPi * kPi);
    return q;
}

}  // namespace lgi
