#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lgi/core/error.hpp"
#include "lgi/core/types.hpp"
#include "lgi/explorer/parallel.hpp"
#include "lgi/field.hpp"
#include "lgi/oscillator.hpp"
#include "lgi/version.hpp"

namespace lgi::explorer {

enum class System { oscillator, field };

inline const char* to_string(System s) { return s == System::oscillator ? "oscillator" : "field"; }

/// Uniform axis. n = 1 with lo == hi is a single fixed value.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 2;

    [[nodiscard]] double at(std::size_t i) const {
        if (n == 1) return lo;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    [[nodiscard]] bool degenerate() const { return n == 1; }

    void validate(const std::string& name) const {
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument(name + ": range must be finite");
        if (n == 1) {
            if (lo != hi) throw InvalidArgument(name + ": a single-point axis needs lo == hi");
            return;
        }
        if (n < 2) throw InvalidArgument(name + ": need at least 2 points");
        if (!(lo < hi)) throw InvalidArgument(name + ": need lo < hi");
    }
};

/// Fixed parameters of an oscillator scan; x is theta = t2 - t1, y is beta (real).
struct OscillatorContext {
    OscillatorState state{};
    double r = 0.0;
    double t1 = 0.0;
};

/// Fixed parameters of a field scan; x is tau = t21 / ell, y is beta (real).
struct FieldContext {
    double omega_ell = 1.0;
};

struct ScanSpec {
    System system = System::oscillator;
    OscillatorContext oscillator{};
    FieldContext field{};
    Axis x{0.0, 2.0 * kPi, 200};
    Axis y{0.0, 3.0, 200};
    std::vector<OutcomePair> outcomes{kAllOutcomePairs.begin(), kAllOutcomePairs.end()};

    void validate() const {
        x.validate(system == System::oscillator ? "theta axis" : "tau axis");
        y.validate("beta axis");
        if (outcomes.empty()) throw InvalidArgument("scan: at least one outcome pair is required");
        if (system == System::oscillator) {
            oscillator.state.validate();
            if (!std::isfinite(oscillator.r) || !std::isfinite(oscillator.t1))
                throw InvalidArgument("scan: r and t1 must be finite");
        } else {
            if (!(field.omega_ell > 0.0) || !std::isfinite(field.omega_ell))
                throw InvalidArgument("scan: omega*ell must be > 0");
            if (x.lo < 0.0) throw InvalidArgument("scan: tau must be >= 0");
        }
    }
};

/// All four quasi-probabilities and the single-time marginal at one (x, y) point.
inline QuasiProbTable evaluate_point(const ScanSpec& spec, double x, double y) {
    if (spec.system == System::oscillator) {
        const auto& c = spec.oscillator;
        return qp_table(c.state, GaussianProjector{Complex{y, 0.0}, c.r}, c.t1, c.t1 + x);
    }
    return field::qp_field_table(field::FieldScenario{spec.field.omega_ell, Complex{y, 0.0}, x});
}

inline double evaluate_point(const ScanSpec& spec, double x, double y, OutcomePair s) {
    return evaluate_point(spec, x, y).at(s);
}

struct GridExtremum {
    double value = std::numeric_limits<double>::infinity();
    std::size_t ix = 0;
    std::size_t iy = 0;
    double x = 0.0;
    double y = 0.0;
};

class ScanError : public Error {
public:
    ScanError(const std::string& what, std::size_t ix, std::size_t iy)
        : Error("grid point (" + std::to_string(ix) + ", " + std::to_string(iy) + "): " + what), ix_(ix), iy_(iy) {}
    [[nodiscard]] std::size_t ix() const noexcept { return ix_; }
    [[nodiscard]] std::size_t iy() const noexcept { return iy_; }

private:
    std::size_t ix_;
    std::size_t iy_;
};

/// Row-major grids (x fastest) for every outcome pair plus the independent marginal p2(+).
struct ScanResult {
    ScanSpec spec;
    std::array<std::vector<double>, 4> q;
    std::vector<double> p2_plus;
    std::array<GridExtremum, 4> minimum;
    std::string code_version = kVersion;
    std::string timestamp;  // left empty by grid_scan; callers stamp it

    [[nodiscard]] std::size_t nx() const { return spec.x.n; }
    [[nodiscard]] std::size_t ny() const { return spec.y.n; }
    [[nodiscard]] std::size_t flat(std::size_t ix, std::size_t iy) const { return iy * nx() + ix; }
    [[nodiscard]] double at(OutcomePair s, std::size_t ix, std::size_t iy) const { return q[s.index()][flat(ix, iy)]; }
    [[nodiscard]] const GridExtremum& min_of(OutcomePair s) const { return minimum[s.index()]; }
};

inline ScanResult grid_scan(const ScanSpec& spec, unsigned threads = 0) {
    spec.validate();
    ScanResult out;
    out.spec = spec;
    const std::size_t nx = spec.x.n;
    const std::size_t ny = spec.y.n;
    for (auto& g : out.q) g.assign(nx * ny, 0.0);
    out.p2_plus.assign(nx * ny, 0.0);

    // One task per row keeps the per-task overhead small.
    parallel_for(
        ny,
        [&](std::size_t iy) {
            const double y = spec.y.at(iy);
            for (std::size_t ix = 0; ix < nx; ++ix) {
                QuasiProbTable t;
                try {
                    t = evaluate_point(spec, spec.x.at(ix), y);
                } catch (const Error& e) {
                    throw ScanError(e.what(), ix, iy);
                }
                const std::size_t k = iy * nx + ix;
                for (std::size_t s = 0; s < 4; ++s) {
                    if (!std::isfinite(t.q[s])) throw ScanError("non-finite quasi-probability", ix, iy);
                    out.q[s][k] = t.q[s];
                }
                out.p2_plus[k] = t.p2_plus;
            }
        },
        threads);

    for (std::size_t s = 0; s < 4; ++s) {
        auto& m = out.minimum[s];
        for (std::size_t k = 0; k < nx * ny; ++k) {
            if (out.q[s][k] < m.value) {
                m.value = out.q[s][k];
                m.ix = k % nx;
                m.iy = k / nx;
            }
        }
        m.x = spec.x.at(m.ix);
        m.y = spec.y.at(m.iy);
    }
    return out;
}

/// Largest violations of the sum rules and the Lueders bound over a scan.
struct InvariantReport {
    double sum_rule = 0.0;       // max |sum q - 1|
    double marginal_rule = 0.0;  // max |sum_{s1} q - p2(s2)|
    double minimum = 0.0;        // min over all outcomes
};

inline InvariantReport check_invariants(const ScanResult& r) {
    InvariantReport rep;
    rep.minimum = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.p2_plus.size(); ++k) {
        const double pp = r.q[0][k], pm = r.q[1][k], mp = r.q[2][k], mm = r.q[3][k];
        rep.sum_rule = std::max(rep.sum_rule, std::abs(pp + pm + mp + mm - 1.0));
        rep.marginal_rule = std::max(rep.marginal_rule, std::abs(pp + mp - r.p2_plus[k]));
        rep.marginal_rule = std::max(rep.marginal_rule, std::abs(pm + mm - (1.0 - r.p2_plus[k])));
        rep.minimum = std::min({rep.minimum, pp, pm, mp, mm});
    }
    return rep;
}

}  // namespace lgi::explorer
