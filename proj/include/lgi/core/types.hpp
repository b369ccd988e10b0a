#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lgi {

/// Dimensionless complex number used for displacements, amplitudes and overlaps.
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;

/// Dichotomic measurement outcome s = +1 or s = -1.
enum class Outcome : int { plus = 1, minus = -1 };

constexpr double value(Outcome s) noexcept { return static_cast<double>(static_cast<int>(s)); }

inline Outcome outcome_from_int(int s) {
    if (s == 1) return Outcome::plus;
    if (s == -1) return Outcome::minus;
    throw std::invalid_argument("outcome must be +1 or -1, got " + std::to_string(s));
}

/// Ordered pair (s1, s2) of outcomes at the two measurement times.
struct OutcomePair {
    Outcome first = Outcome::plus;
    Outcome second = Outcome::plus;

    friend constexpr bool operator==(OutcomePair, OutcomePair) = default;

    /// Position in the canonical (++, +-, -+, --) ordering.
    [[nodiscard]] constexpr std::size_t index() const noexcept {
        return (first == Outcome::plus ? 0U : 2U) + (second == Outcome::plus ? 0U : 1U);
    }
    /// "pp", "pm", "mp" or "mm".
    [[nodiscard]] std::string label() const {
        return std::string{first == Outcome::plus ? 'p' : 'm'} + (second == Outcome::plus ? 'p' : 'm');
    }
    /// "++", "+-", "-+" or "--".
    [[nodiscard]] std::string symbol() const {
        return std::string{first == Outcome::plus ? '+' : '-'} + (second == Outcome::plus ? '+' : '-');
    }
};

inline constexpr std::array<OutcomePair, 4> kAllOutcomePairs{{
    {Outcome::plus, Outcome::plus},
    {Outcome::plus, Outcome::minus},
    {Outcome::minus, Outcome::plus},
    {Outcome::minus, Outcome::minus},
}};

/// Accepts "++", "+-", "-+", "--" and the spelled forms "pp", "pm", "mp", "mm".
inline OutcomePair parse_outcome_pair(std::string_view text) {
    auto one = [&](char c) {
        if (c == '+' || c == 'p') return Outcome::plus;
        if (c == '-' || c == 'm') return Outcome::minus;
        throw std::invalid_argument("bad outcome pair '" + std::string(text) + "'");
    };
    if (text.size() != 2) throw std::invalid_argument("bad outcome pair '" + std::string(text) + "'");
    return {one(text[0]), one(text[1])};
}

inline bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace lgi
