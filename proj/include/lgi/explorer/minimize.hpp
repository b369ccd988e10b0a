#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lgi/core/error.hpp"
#include "lgi/core/types.hpp"
#include "lgi/explorer/parallel.hpp"
#include "lgi/explorer/scan.hpp"
#include "lgi/field.hpp"
#include "lgi/oscillator.hpp"

namespace lgi::explorer {

using Params = std::array<double, 3>;

struct NelderMeadOptions {
    std::size_t max_iterations = 2000;
    double f_tol = 1e-15;
    double x_tol = 1e-10;  // relative to each box width
    int polish_passes = 3;
};

struct NelderMeadResult {
    Params x{};
    double f = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

/// Box-constrained Nelder-Mead: trial points are projected onto [lo, hi]; coordinates with
/// lo == hi stay pinned. After convergence the simplex is rebuilt around the best point and
/// the search repeated while that still improves.
inline NelderMeadResult nelder_mead(const std::function<double(const Params&)>& f, Params start, const Params& lo,
                                    const Params& hi, const NelderMeadOptions& opt = {}) {
    std::vector<std::size_t> free;
    for (std::size_t d = 0; d < 3; ++d)
        if (hi[d] > lo[d]) free.push_back(d);
    auto clamp = [&](Params p) {
        for (std::size_t d = 0; d < 3; ++d) p[d] = std::clamp(p[d], lo[d], hi[d]);
        return p;
    };
    start = clamp(start);
    NelderMeadResult res;
    res.x = start;
    res.f = f(start);
    if (free.empty()) {
        res.converged = true;
        return res;
    }
    const std::size_t k = free.size();

    auto run = [&](const Params& x0, double step_fraction, NelderMeadResult& out) {
        std::vector<Params> pts(k + 1, x0);
        std::vector<double> fv(k + 1);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t d = free[i];
            const double step = step_fraction * (hi[d] - lo[d]);
            pts[i + 1][d] = x0[d] + step <= hi[d] ? x0[d] + step : x0[d] - step;
        }
        for (std::size_t i = 0; i <= k; ++i) fv[i] = f(pts[i]);
        std::vector<std::size_t> order(k + 1);
        bool converged = false;
        std::size_t it = 0;
        for (; it < opt.max_iterations; ++it) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second = order[k - 1];

            double spread = 0.0;
            for (std::size_t i = 0; i <= k; ++i)
                for (std::size_t d : free)
                    spread = std::max(spread, std::abs(pts[i][d] - pts[best][d]) / (hi[d] - lo[d]));
            if (fv[worst] - fv[best] <= opt.f_tol * (1.0 + std::abs(fv[best])) && spread <= opt.x_tol) {
                converged = true;
                break;
            }

            Params centroid = pts[best];
            for (std::size_t d : free) {
                double s = 0.0;
                for (std::size_t i = 0; i <= k; ++i)
                    if (i != worst) s += pts[i][d];
                centroid[d] = s / static_cast<double>(k);
            }
            auto along = [&](double t) {
                Params p = centroid;
                for (std::size_t d : free) p[d] = centroid[d] + t * (pts[worst][d] - centroid[d]);
                return clamp(p);
            };
            const Params xr = along(-1.0);
            const double fr = f(xr);
            if (fr < fv[best]) {
                const Params xe = along(-2.0);
                const double fe = f(xe);
                if (fe < fr) {
                    pts[worst] = xe;
                    fv[worst] = fe;
                } else {
                    pts[worst] = xr;
                    fv[worst] = fr;
                }
            } else if (fr < fv[second]) {
                pts[worst] = xr;
                fv[worst] = fr;
            } else {
                const Params xc = fr < fv[worst] ? along(-0.5) : along(0.5);
                const double fc = f(xc);
                if (fc < std::min(fr, fv[worst])) {
                    pts[worst] = xc;
                    fv[worst] = fc;
                } else {
                    for (std::size_t i = 0; i <= k; ++i) {
                        if (i == best) continue;
                        for (std::size_t d : free) pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
                        fv[i] = f(pts[i]);
                    }
                }
            }
        }
        const std::size_t best =
            static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
        out.iterations += it;
        out.converged = converged;
        if (fv[best] <= out.f) {
            out.f = fv[best];
            out.x = pts[best];
        }
    };

    run(start, 0.1, res);
    for (int pass = 0; pass < opt.polish_passes && res.converged; ++pass) {
        const double before = res.f;
        run(res.x, 0.02, res);
        if (!(res.f < before - 1e-15)) break;
    }
    return res;
}

/// Halton point i (i >= 1) in bases 2, 3, 5.
inline Params halton(std::uint64_t i) {
    constexpr std::array<std::uint64_t, 3> bases{2, 3, 5};
    Params out{};
    for (std::size_t d = 0; d < 3; ++d) {
        double f = 1.0;
        double v = 0.0;
        for (std::uint64_t n = i; n > 0; n /= bases[d]) {
            f /= static_cast<double>(bases[d]);
            v += f * static_cast<double>(n % bases[d]);
        }
        out[d] = v;
    }
    return out;
}

/// Halton set with a Cranley-Patterson rotation drawn from mt19937_64(seed).
inline std::vector<Params> start_points(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Params shift{};
    for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::vector<Params> pts(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Params h = halton(i + 1);
        for (std::size_t d = 0; d < 3; ++d) pts[i][d] = std::fmod(h[d] + shift[d], 1.0);
    }
    return pts;
}

struct OptimizeSpec {
    System system = System::oscillator;
    OutcomePair outcome{Outcome::minus, Outcome::minus};
    // oscillator: (r, beta, theta); field: (omega_ell, beta, tau)
    Params lo{0.0, 0.0, 0.0};
    Params hi{1.0, 2.0, 2.0 * kPi};
    std::size_t restarts = 16;
    std::uint64_t seed = 0;
    OscillatorContext oscillator{};  // r in the context is ignored; it is the first parameter
    NelderMeadOptions options{};

    void validate() const {
        if (restarts < 1) throw InvalidArgument("optimize: restarts must be >= 1");
        for (std::size_t d = 0; d < 3; ++d) {
            if (!std::isfinite(lo[d]) || !std::isfinite(hi[d])) throw InvalidArgument("optimize: bounds must be finite");
            if (lo[d] > hi[d]) throw InvalidArgument("optimize: lower bound above upper bound");
        }
        if (system == System::field) {
            if (!(lo[0] > 0.0)) throw InvalidArgument("optimize: omega*ell lower bound must be > 0");
            if (lo[2] < 0.0) throw InvalidArgument("optimize: tau must be >= 0");
        } else {
            oscillator.state.validate();
        }
    }
};

struct RestartReport {
    std::size_t index = 0;
    Params start{};
    Params params{};
    double q = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
    std::string error;
};

struct OptimizeResult {
    Params params{};
    double q = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::size_t winning_restart = 0;
    std::vector<RestartReport> restarts;
};

inline double objective(const OptimizeSpec& spec, const Params& p) {
    if (spec.system == System::oscillator) {
        const auto& c = spec.oscillator;
        return quasi_probability(c.state, GaussianProjector{Complex{p[1], 0.0}, p[0]}, c.t1, c.t1 + p[2],
                                 spec.outcome.first, spec.outcome.second);
    }
    return field::qp_field(field::FieldScenario{p[0], Complex{p[1], 0.0}, p[2]}, spec.outcome.first,
                           spec.outcome.second);
}

/// Multi-start Nelder-Mead. Restarts that throw or run out of iterations are reported and
/// skipped; if no restart converges NoConvergence is thrown. The winner is the lowest q, ties broken by restart index.
inline OptimizeResult minimize_q(const OptimizeSpec& spec, unsigned threads = 0) {
    spec.validate();
    const auto unit = start_points(spec.restarts, spec.seed);
    OptimizeResult out;
    out.restarts.resize(spec.restarts);
    auto f = [&](const Params& p) { return objective(spec, p); };
    parallel_for(
        spec.restarts,
        [&](std::size_t i) {
            auto& rep = out.restarts[i];
            rep.index = i;
            for (std::size_t d = 0; d < 3; ++d) rep.start[d] = spec.lo[d] + unit[i][d] * (spec.hi[d] - spec.lo[d]);
            try {
                const auto r = nelder_mead(f, rep.start, spec.lo, spec.hi, spec.options);
                rep.params = r.x;
                rep.q = r.f;
                rep.iterations = r.iterations;
                rep.converged = r.converged;
                if (!std::isfinite(rep.q)) {
                    rep.converged = false;
                    rep.error = "non-finite objective";
                }
            } catch (const std::exception& e) {
                rep.error = e.what();
            }
        },
        threads);

    bool any = false;
    for (const auto& rep : out.restarts) {
        out.iterations += rep.iterations;
        if (!rep.error.empty() || !rep.converged) continue;
        if (!any || rep.q < out.q) {
            out.q = rep.q;
            out.params = rep.params;
            out.winning_restart = rep.index;
            any = true;
        }
    }
    if (!any) throw NoConvergence("optimize: no restart converged", static_cast<double>(out.restarts.size()));
    return out;
}

}  // namespace lgi::explorer
