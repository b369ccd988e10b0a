#pragma once

// Zero level set of a sampled field by marching squares. Samples with v < 0 are "negative";
// everything else, including exact zeros, is "non-negative".

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "lgi/core/error.hpp"
#include "lgi/explorer/scan.hpp"

namespace lgi::explorer {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Polyline {
    std::vector<Point> vertices;
    bool closed = false;  // open polylines start and end on the grid boundary
};

struct NegativeRegion {
    std::vector<Polyline> polylines;
    std::size_t enclosed_cells = 0;  // negative samples belonging to the region
    double minimum = 0.0;
    Point argmin;
};

/// Row-major samples values[iy * xs.size() + ix].
struct GridView {
    std::span<const double> xs;
    std::span<const double> ys;
    std::span<const double> values;
};

/// Value at a cell centre, used to decide saddle cells.
using MidpointFn = std::function<double(double x, double y)>;

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }
    // The smaller index becomes the root, so roots are stable across runs.
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace detail

inline std::vector<NegativeRegion> negative_regions(const GridView& grid, const MidpointFn& midpoint = {}) {
    const std::size_t nx = grid.xs.size();
    const std::size_t ny = grid.ys.size();
    if (grid.values.size() != nx * ny) throw InvalidArgument("negative_regions: grid shape mismatch");
    auto val = [&](std::size_t ix, std::size_t iy) { return grid.values[iy * nx + ix]; };
    auto neg = [&](std::size_t ix, std::size_t iy) { return val(ix, iy) < 0.0; };

    detail::DisjointSets sets(nx * ny);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            if (!neg(ix, iy)) continue;
            if (ix + 1 < nx && neg(ix + 1, iy)) sets.unite(iy * nx + ix, iy * nx + ix + 1);
            if (iy + 1 < ny && neg(ix, iy + 1)) sets.unite(iy * nx + ix, (iy + 1) * nx + ix);
        }

    // Edge ids: horizontal (ix,iy)-(ix+1,iy) first, then vertical (ix,iy)-(ix,iy+1).
    const std::size_t nh = nx > 0 ? (nx - 1) * ny : 0;
    auto hid = [&](std::size_t ix, std::size_t iy) { return iy * (nx - 1) + ix; };
    auto vid = [&](std::size_t ix, std::size_t iy) { return nh + iy * nx + ix; };
    const std::size_t nedges = nh + (ny > 0 ? nx * (ny - 1) : 0);

    auto endpoints = [&](std::size_t e) {
        struct Ends {
            std::size_t ax, ay, bx, by;
        };
        if (e < nh) return Ends{e % (nx - 1), e / (nx - 1), e % (nx - 1) + 1, e / (nx - 1)};
        const std::size_t k = e - nh;
        return Ends{k % nx, k / nx, k % nx, k / nx + 1};
    };
    auto crossing = [&](std::size_t e) {
        const auto p = endpoints(e);
        const double va = val(p.ax, p.ay);
        const double vb = val(p.bx, p.by);
        const double t = va / (va - vb);
        return Point{grid.xs[p.ax] + t * (grid.xs[p.bx] - grid.xs[p.ax]),
                     grid.ys[p.ay] + t * (grid.ys[p.by] - grid.ys[p.ay])};
    };
    auto negative_end = [&](std::size_t e) {
        const auto p = endpoints(e);
        return neg(p.ax, p.ay) ? p.ay * nx + p.ax : p.by * nx + p.bx;
    };

    struct Segment {
        std::size_t a, b;
    };
    std::vector<Segment> segments;
    std::vector<std::vector<std::size_t>> at_edge(nedges);
    auto add = [&](std::size_t a, std::size_t b) {
        at_edge[a].push_back(segments.size());
        at_edge[b].push_back(segments.size());
        segments.push_back({a, b});
    };

    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
        for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
            // corners 0:(ix,iy) 1:(ix+1,iy) 2:(ix+1,iy+1) 3:(ix,iy+1); edges bottom, right, top, left
            const bool c[4] = {neg(ix, iy), neg(ix + 1, iy), neg(ix + 1, iy + 1), neg(ix, iy + 1)};
            const std::size_t e[4] = {hid(ix, iy), vid(ix + 1, iy), hid(ix, iy + 1), vid(ix, iy)};
            const bool cut[4] = {c[0] != c[1], c[1] != c[2], c[2] != c[3], c[3] != c[0]};
            const int ncut = cut[0] + cut[1] + cut[2] + cut[3];
            if (ncut == 2) {
                std::size_t first = 4;
                for (std::size_t k = 0; k < 4; ++k) {
                    if (!cut[k]) continue;
                    if (first == 4) {
                        first = k;
                    } else {
                        add(e[first], e[k]);
                    }
                }
            } else if (ncut == 4) {
                const double xm = 0.5 * (grid.xs[ix] + grid.xs[ix + 1]);
                const double ym = 0.5 * (grid.ys[iy] + grid.ys[iy + 1]);
                const double centre = midpoint ? midpoint(xm, ym)
                                               : 0.25 * (val(ix, iy) + val(ix + 1, iy) + val(ix + 1, iy + 1) +
                                                         val(ix, iy + 1));
                const bool centre_neg = centre < 0.0;
                if (centre_neg) {
                    if (c[0]) {
                        sets.unite(iy * nx + ix, (iy + 1) * nx + ix + 1);
                    } else {
                        sets.unite(iy * nx + ix + 1, (iy + 1) * nx + ix);
                    }
                }
                // Corners whose sign differs from the centre are cut off on their own.
                // corner k touches edges k and (k + 3) % 4
                for (std::size_t k = 0; k < 4; ++k)
                    if (c[k] != centre_neg) add(e[k], e[(k + 3) % 4]);
            }
        }
    }

    // Chain segments into polylines: open chains start at edges used once (grid boundary).
    std::vector<bool> used(segments.size(), false);
    std::vector<std::pair<std::size_t, Polyline>> lines;  // (owning component root, polyline)
    auto walk = [&](std::size_t start_edge, std::size_t seg) {
        Polyline pl;
        std::size_t edge = start_edge;
        pl.vertices.push_back(crossing(edge));
        for (;;) {
            used[seg] = true;
            edge = segments[seg].a == edge ? segments[seg].b : segments[seg].a;
            if (edge == start_edge) {
                pl.closed = true;
                break;
            }
            pl.vertices.push_back(crossing(edge));
            std::size_t next = segments.size();
            for (std::size_t s : at_edge[edge])
                if (!used[s]) next = s;
            if (next == segments.size()) break;
            seg = next;
        }
        lines.emplace_back(sets.find(negative_end(start_edge)), std::move(pl));
    };
    for (std::size_t e = 0; e < nedges; ++e)
        if (at_edge[e].size() == 1 && !used[at_edge[e][0]]) walk(e, at_edge[e][0]);
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (!used[s]) walk(segments[s].a, s);

    // Regions in order of their smallest sample index.
    std::vector<NegativeRegion> regions;
    std::vector<std::size_t> region_of(nx * ny, std::numeric_limits<std::size_t>::max());
    for (std::size_t k = 0; k < nx * ny; ++k) {
        if (!(grid.values[k] < 0.0)) continue;
        const std::size_t root = sets.find(k);
        if (region_of[root] == std::numeric_limits<std::size_t>::max()) {
            region_of[root] = regions.size();
            NegativeRegion r;
            r.minimum = std::numeric_limits<double>::infinity();
            regions.push_back(std::move(r));
        }
        auto& r = regions[region_of[root]];
        ++r.enclosed_cells;
        if (grid.values[k] < r.minimum) {
            r.minimum = grid.values[k];
            r.argmin = {grid.xs[k % nx], grid.ys[k / nx]};
        }
    }
    for (auto& [root, pl] : lines) regions[region_of[root]].polylines.push_back(std::move(pl));
    return regions;
}

/// Regions of one outcome's grid; saddles are resolved by evaluating q at the cell centre.
inline std::vector<NegativeRegion> negative_regions(const ScanResult& result, OutcomePair s, bool evaluate_midpoints = true) {
    std::vector<double> xs(result.nx());
    std::vector<double> ys(result.ny());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = result.spec.x.at(i);
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = result.spec.y.at(i);
    MidpointFn mid;
    if (evaluate_midpoints) mid = [&](double x, double y) { return evaluate_point(result.spec, x, y, s); };
    return negative_regions(GridView{xs, ys, result.q[s.index()]}, mid);
}

}  // namespace lgi::explorer
