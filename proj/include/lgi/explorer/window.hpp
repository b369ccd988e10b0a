#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lgi/core/error.hpp"
#include "lgi/core/tolerances.hpp"
#include "lgi/explorer/minimize.hpp"
#include "lgi/explorer/scan.hpp"

namespace lgi::explorer {

struct WindowOptions {
    double lo = 0.05;
    double hi = 50.0;
    std::size_t points = 31;  // log-spaced; omega_ell = 1 is always added
    Axis beta{0.0, 3.0, 61};
    Axis tau{0.0, 12.0, 97};
    OutcomePair outcome{Outcome::minus, Outcome::minus};
    double threshold = tol::negativity_threshold;
    bool refine = true;  // polish the best grid point with Nelder-Mead
};

struct WindowReport {
    std::vector<double> omega_ell;
    std::vector<double> minimum;
    std::vector<bool> negative;
    bool contiguous = false;
    bool contains_one = false;
    bool bounded = false;  // neither grid end is negative
    double lo = std::numeric_limits<double>::quiet_NaN();  // smallest negative omega_ell
    double hi = std::numeric_limits<double>::quiet_NaN();  // largest negative omega_ell
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t n, bool include_one) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw InvalidArgument("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    if (include_one && lo <= 1.0 && hi >= 1.0 && std::find(g.begin(), g.end(), 1.0) == g.end()) {
        g.push_back(1.0);
        std::sort(g.begin(), g.end());
    }
    return g;
}

/// Scan minimum of one outcome over the (tau, beta) grid at fixed omega_ell, optionally polished.
inline double field_scan_minimum(double omega_ell, const WindowOptions& opt, unsigned threads = 0) {
    ScanSpec spec;
    spec.system = System::field;
    spec.field.omega_ell = omega_ell;
    spec.x = opt.tau;
    spec.y = opt.beta;
    spec.outcomes = {opt.outcome};
    const auto scan = grid_scan(spec, threads);
    const auto& m = scan.min_of(opt.outcome);
    double best = m.value;
    if (opt.refine) {
        OptimizeSpec os;
        os.system = System::field;
        os.outcome = opt.outcome;
        const Params lo{omega_ell, opt.beta.lo, opt.tau.lo};
        const Params hi{omega_ell, opt.beta.hi, opt.tau.hi};
        auto f = [&](const Params& p) { return objective(os, p); };
        const auto r = nelder_mead(f, Params{omega_ell, m.y, m.x}, lo, hi);
        best = std::min(best, r.f);
    }
    return best;
}

/// Which omega_ell values on a log grid admit a negative quasi-probability.
inline WindowReport omega_ell_window(const WindowOptions& opt = {}, unsigned threads = 0) {
    if (opt.lo > 0.05 || opt.hi < 50.0) throw InvalidArgument("omega_ell_window: grid must span at least [0.05, 50]");
    WindowReport rep;
    rep.omega_ell = log_grid(opt.lo, opt.hi, opt.points, true);
    rep.minimum.resize(rep.omega_ell.size());
    for (std::size_t i = 0; i < rep.omega_ell.size(); ++i)
        rep.minimum[i] = field_scan_minimum(rep.omega_ell[i], opt, threads);
    rep.negative.resize(rep.minimum.size());
    std::size_t first = rep.minimum.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < rep.minimum.size(); ++i) {
        rep.negative[i] = rep.minimum[i] < opt.threshold;
        if (rep.negative[i]) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first < rep.minimum.size()) {
        rep.lo = rep.omega_ell[first];
        rep.hi = rep.omega_ell[last];
        rep.contiguous = std::all_of(rep.negative.begin() + static_cast<std::ptrdiff_t>(first),
                                     rep.negative.begin() + static_cast<std::ptrdiff_t>(last) + 1, [](bool b) { return b; });
        rep.contains_one = rep.lo <= 1.0 && 1.0 <= rep.hi &&
                           rep.negative[static_cast<std::size_t>(
                               std::find(rep.omega_ell.begin(), rep.omega_ell.end(), 1.0) - rep.omega_ell.begin())];
        rep.bounded = !rep.negative.front() && !rep.negative.back();
    }
    return rep;
}

}  // namespace lgi::explorer
