#pragma once

// Every numerical threshold the library and its acceptance suite rely on.

namespace lgi::tol {

inline constexpr double symmetry = 1e-12;             // |M_ij - M_ji| for quadratic forms
inline constexpr double singular_determinant = 1e-300;
inline constexpr double quadrature_absolute = 1e-10;  // semi-infinite k-integrals
inline constexpr double series_tail = 1e-14;          // Fock-series truncation bound

inline constexpr double luders_bound = -0.125;
inline constexpr double luders_slack = 1e-9;
inline constexpr double sum_rule = 1e-12;       // sum over all four outcomes
inline constexpr double marginal_rule = 1e-10;  // sum over s1 against p2(s2)
inline constexpr double field_sum_rule = 1e-9;

inline constexpr double oracle_agreement = 1e-6;
inline constexpr double truncation_stability = 1e-8;  // |q_N - q_2N|
inline constexpr double negativity_threshold = -1e-6;

}  // namespace lgi::tol
