#include "nclab/reference.hpp"

#include <algorithm>

#include "nclab/errors.hpp"

namespace nclab::ref {

namespace {

inline int floor_div(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline Coord shifted(const DyadicGrid& g, const Coord& base, const Coord& offset) {
    Coord t = {0, 0};
    for (int a = 0; a < g.d; ++a) {
        t[a] = base[a] + offset[a];
        if (g.boundary == Boundary::torus)
            t[a] = (t[a] % g.side() + g.side()) % g.side();
    }
    return t;
}

inline bool in_domain(const DyadicGrid& g, const Coord& c) {
    if (g.boundary == Boundary::torus) return true;
    for (int a = 0; a < g.d; ++a)
        if (c[a] < 0 || c[a] >= g.side()) return false;
    return true;
}

inline long cube_id(const DyadicGrid& g, int n, const Coord& abs_c) {
    const int w = 1 << (g.K - n);
    long      id = floor_div(abs_c[0], w);
    if (g.d == 2) id = id * 4L * (1L << n) + floor_div(abs_c[1], w); // injective
    return id;
}

} // namespace

MatrixField cond_expectation(const MatrixField& f, int k) {
    const auto& g = f.grid();
    check_level(g, k, "ref::cond_expectation");
    MatrixField out(g);
    for (long q = 0; q < g.cube_count(k); ++q) {
        const auto cells = cube_cells(g, k, q);
        Matrix     avg   = Matrix::Zero(g.matdim, g.matdim);
        for (long c : cells) avg += f.cell(c);
        avg /= static_cast<double>(cells.size());
        for (long c : cells) out.cell(c) = avg;
    }
    return out;
}

MatrixField ball_average(const MatrixField& f, int k) {
    const auto& g = f.grid();
    check_level(g, k, "ref::ball_average");
    const auto  st = ball_stencil(g, k);
    MatrixField out(g);
    for (long i = 0; i < f.cell_count(); ++i) {
        const Coord base = cell_coord(g, i);
        Matrix      acc  = Matrix::Zero(g.matdim, g.matdim);
        for (const auto& o : st.offsets) {
            const Coord t = shifted(g, base, o);
            if (in_domain(g, t)) acc += f.cell(cell_index(g, t));
        }
        out.cell(i) = acc / static_cast<double>(st.offsets.size());
    }
    return out;
}

MatrixField truncated_average(const MatrixField& u, int k, int n) {
    const auto& g = u.grid();
    if (k >= n) throw LevelOrderViolation("ref::truncated_average: requires k < n");
    check_level(g, k, "ref::truncated_average");
    check_level(g, n, "ref::truncated_average");
    const auto st     = ball_stencil(g, k);
    const auto sphere = st.sphere_offsets();
    MatrixField out(g);
    for (long i = 0; i < u.cell_count(); ++i) {
        const Coord base = cell_coord(g, i);
        std::vector<long> marked;
        for (const auto& s : sphere) marked.push_back(cube_id(g, n, shifted(g, base, s)));
        std::sort(marked.begin(), marked.end());
        Matrix acc = Matrix::Zero(g.matdim, g.matdim);
        for (const auto& o : st.offsets) {
            const Coord t = shifted(g, base, o);
            if (!std::binary_search(marked.begin(), marked.end(), cube_id(g, n, t)))
                continue;
            if (in_domain(g, t)) acc += u.cell(cell_index(g, t));
        }
        out.cell(i) = acc / static_cast<double>(st.offsets.size());
    }
    return out;
}

MatrixField tilde_average(const MatrixField& v, int j, int m) {
    const auto& g = v.grid();
    if (j >= m) throw LevelOrderViolation("ref::tilde_average: requires j < m");
    check_level(g, j, "ref::tilde_average");
    check_level(g, m, "ref::tilde_average");
    const auto ball    = ball_stencil(g, j);
    const auto annulus = annulus_stencil(g, j, m);
    MatrixField out(g);
    for (long i = 0; i < v.cell_count(); ++i) {
        const Coord base = cell_coord(g, i);
        Matrix      acc  = Matrix::Zero(g.matdim, g.matdim);
        for (const auto& o : annulus) {
            const Coord t = shifted(g, base, o);
            if (in_domain(g, t)) acc += v.cell(cell_index(g, t));
        }
        out.cell(i) = acc / static_cast<double>(ball.offsets.size());
    }
    return out;
}

} // namespace nclab::ref
