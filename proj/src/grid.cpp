#include "nclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace nclab {

DyadicGrid::DyadicGrid(int d_, int K_, Boundary b_, int n_)
    : d(d_), K(K_), boundary(b_), matdim(n_) {
    if (d != 1 && d != 2)
        throw InvalidConfig("DyadicGrid: dimension must be 1 or 2");
    if (K < 1 || K > (d == 1 ? 14 : 7))
        throw InvalidConfig("DyadicGrid: level K out of supported range");
    if (matdim < 1 || matdim > 64)
        throw InvalidConfig("DyadicGrid: matrix dimension out of supported range");
}

long cell_index(const DyadicGrid& g, const Coord& c) {
    if (g.d == 1) return c[0];
    return static_cast<long>(c[0]) * g.side() + c[1];
}

Coord cell_coord(const DyadicGrid& g, long index) {
    if (g.d == 1) return {static_cast<int>(index), 0};
    return {static_cast<int>(index / g.side()), static_cast<int>(index % g.side())};
}

long cube_of_cell(const DyadicGrid& g, int level, long cell) {
    const Coord c     = cell_coord(g, cell);
    const int   shift = g.K - level;
    if (g.d == 1) return c[0] >> shift;
    return (static_cast<long>(c[0] >> shift) << level) + (c[1] >> shift);
}

std::vector<long> cube_cells(const DyadicGrid& g, int level, long cube) {
    const int         shift = g.K - level;
    const int         w     = 1 << shift;
    std::vector<long> cells;
    cells.reserve(g.cells_per_cube(level));
    if (g.d == 1) {
        const int base = static_cast<int>(cube) << shift;
        for (int i = 0; i < w; ++i) cells.push_back(base + i);
    } else {
        const int cx = static_cast<int>(cube >> level) << shift;
        const int cy = static_cast<int>(cube & ((1L << level) - 1)) << shift;
        for (int i = 0; i < w; ++i)
            for (int j = 0; j < w; ++j)
                cells.push_back(cell_index(g, {cx + i, cy + j}));
    }
    return cells;
}

void check_level(const DyadicGrid& g, int k, const char* who) {
    if (k < 0 || k > g.K)
        throw LevelOutOfRange(std::string(who) + ": level out of [0, K]");
}

namespace {

// Center distance of an offset, in units of the grid spacing h.
double offset_norm_cells(const DyadicGrid& g, const Coord& o) {
    double acc = 0.0;
    for (int a = 0; a < g.d; ++a) {
        double da = std::abs(static_cast<double>(o[a]));
        if (g.boundary == Boundary::torus)
            da = std::min(da, g.side() - da);
        acc += da * da;
    }
    return std::sqrt(acc);
}

long pack_offset(const Coord& o, int span) {
    // injective packing for membership lookups; offsets lie in (-span, span)
    return (static_cast<long>(o[0]) + span) * (2 * span + 1) +
           (static_cast<long>(o[1]) + span);
}

} // namespace

BallStencil ball_stencil(const DyadicGrid& g, int k) {
    check_level(g, k, "ball_stencil");
    const int    side    = g.side();
    const double radius  = static_cast<double>(1 << (g.K - k)); // 2^{-k} / h
    BallStencil  st;
    st.k = k;

    if (g.boundary == Boundary::torus) {
        // one representative per residue class
        if (g.d == 1) {
            for (int r = 0; r < side; ++r)
                if (offset_norm_cells(g, {r, 0}) < radius) st.offsets.push_back({r, 0});
        } else {
            for (int r0 = 0; r0 < side; ++r0)
                for (int r1 = 0; r1 < side; ++r1)
                    if (offset_norm_cells(g, {r0, r1}) < radius)
                        st.offsets.push_back({r0, r1});
        }
    } else {
        const int R = static_cast<int>(std::ceil(radius));
        if (g.d == 1) {
            for (int o = -R; o <= R; ++o)
                if (offset_norm_cells(g, {o, 0}) < radius) st.offsets.push_back({o, 0});
        } else {
            for (int o0 = -R; o0 <= R; ++o0)
                for (int o1 = -R; o1 <= R; ++o1)
                    if (offset_norm_cells(g, {o0, o1}) < radius)
                        st.offsets.push_back({o0, o1});
        }
    }

    std::sort(st.offsets.begin(), st.offsets.end());
    st.volume = static_cast<double>(st.offsets.size()) * g.cell_volume();

    // sphere = member cells with a non-member axis neighbor
    const int span = 2 * side + 2;
    std::unordered_set<long> members;
    members.reserve(st.offsets.size() * 2);
    for (const auto& o : st.offsets) members.insert(pack_offset(o, span));

    st.sphere.resize(st.offsets.size(), 0);
    for (size_t i = 0; i < st.offsets.size(); ++i) {
        for (int a = 0; a < g.d && !st.sphere[i]; ++a) {
            for (int s = -1; s <= 1; s += 2) {
                Coord nb = st.offsets[i];
                nb[a] += s;
                if (g.boundary == Boundary::torus)
                    nb[a] = (nb[a] % side + side) % side;
                if (!members.count(pack_offset(nb, span))) {
                    st.sphere[i] = 1;
                    break;
                }
            }
        }
    }
    return st;
}

std::vector<Coord> annulus_stencil(const DyadicGrid& g, int j, int m) {
    if (j >= m)
        throw LevelOrderViolation("annulus_stencil: requires j < m");
    check_level(g, j, "annulus_stencil");
    check_level(g, m, "annulus_stencil");

    const auto   ball   = ball_stencil(g, j);
    const auto   sphere = ball.sphere_offsets();
    const double thresh = std::sqrt(static_cast<double>(g.d)) *
                          static_cast<double>(1 << (g.K - m)); // sqrt(d) 2^{-m} / h
    std::vector<Coord> annulus;
    if (sphere.empty()) return annulus;

    auto near_sphere = [&](const Coord& c) {
        for (const auto& s : sphere) {
            double acc = 0.0;
            for (int a = 0; a < g.d; ++a) {
                double da = std::abs(static_cast<double>(c[a] - s[a]));
                if (g.boundary == Boundary::torus)
                    da = std::min(da, g.side() - da);
                acc += da * da;
            }
            if (std::sqrt(acc) <= thresh) return true;
        }
        return false;
    };

    if (g.boundary == Boundary::torus) {
        const int side = g.side();
        if (g.d == 1) {
            for (int r = 0; r < side; ++r)
                if (near_sphere({r, 0})) annulus.push_back({r, 0});
        } else {
            for (int r0 = 0; r0 < side; ++r0)
                for (int r1 = 0; r1 < side; ++r1)
                    if (near_sphere({r0, r1})) annulus.push_back({r0, r1});
        }
    } else {
        int lo[2] = {0, 0}, hi[2] = {0, 0};
        const int pad = static_cast<int>(std::ceil(thresh)) + 1;
        for (int a = 0; a < g.d; ++a) {
            lo[a] = sphere.front()[a];
            hi[a] = sphere.front()[a];
            for (const auto& s : sphere) {
                lo[a] = std::min(lo[a], s[a]);
                hi[a] = std::max(hi[a], s[a]);
            }
            lo[a] -= pad;
            hi[a] += pad;
        }
        if (g.d == 1) {
            for (int o = lo[0]; o <= hi[0]; ++o)
                if (near_sphere({o, 0})) annulus.push_back({o, 0});
        } else {
            for (int o0 = lo[0]; o0 <= hi[0]; ++o0)
                for (int o1 = lo[1]; o1 <= hi[1]; ++o1)
                    if (near_sphere({o0, o1})) annulus.push_back({o0, o1});
        }
    }
    std::sort(annulus.begin(), annulus.end());
    return annulus;
}

long resolve_offset(const DyadicGrid& g, const Coord& base, const Coord& offset) {
    Coord t = {0, 0};
    for (int a = 0; a < g.d; ++a) {
        t[a] = base[a] + offset[a];
        if (g.boundary == Boundary::torus) {
            t[a] = (t[a] % g.side() + g.side()) % g.side();
        } else if (t[a] < 0 || t[a] >= g.side()) {
            return -1;
        }
    }
    return cell_index(g, t);
}

} // namespace nclab
