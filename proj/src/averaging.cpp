#include "nclab/averaging.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "nclab/errors.hpp"
#include "nclab/spectral.hpp"

namespace nclab {

MatrixField cond_expectation(const MatrixField& f, int k) {
    const auto& g = f.grid();
    check_level(g, k, "cond_expectation");
    MatrixField out(g);
    const long  cubes = g.cube_count(k);

#pragma omp parallel for schedule(static)
    for (long q = 0; q < cubes; ++q) {
        const auto cells = cube_cells(g, k, q);
        Matrix     avg   = Matrix::Zero(g.matdim, g.matdim);
        for (long c : cells) avg += f.cell(c);
        avg /= static_cast<double>(cells.size());
        for (long c : cells) out.cell(c) = avg;
    }
    return out;
}

Matrix ball_average_at(const MatrixField& f, const BallStencil& st, long cell) {
    const auto& g    = f.grid();
    const Coord base = cell_coord(g, cell);
    Matrix      acc  = Matrix::Zero(g.matdim, g.matdim);
    for (const auto& o : st.offsets) {
        const long t = resolve_offset(g, base, o);
        if (t >= 0) acc += f.cell(t);
    }
    return acc / static_cast<double>(st.offsets.size());
}

MatrixField ball_average(const MatrixField& f, int k) {
    const auto& g = f.grid();
    check_level(g, k, "ball_average");
    const BallStencil st = ball_stencil(g, k);
    MatrixField       out(g);

#pragma omp parallel for schedule(static)
    for (long i = 0; i < f.cell_count(); ++i)
        out.cell(i) = ball_average_at(f, st, i);
    return out;
}

namespace {

// floor division for possibly-negative lattice coordinates (zero mode)
inline int floor_div(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// Level-n cube key of an absolute (possibly out-of-domain) cell coordinate.
// Zero mode shifts by one domain width so keys stay nonnegative.
inline long cube_key(const DyadicGrid& g, int n, const Coord& abs_c) {
    const int w = 1 << (g.K - n);
    if (g.boundary == Boundary::torus) {
        long key = abs_c[0] >> (g.K - n);
        if (g.d == 2) key = (key << n) + (abs_c[1] >> (g.K - n));
        return key;
    }
    const long stride = 3L << n; // coords range over [-2^n, 2*2^n)
    long key = floor_div(abs_c[0], w) + (1 << n);
    if (g.d == 2) key = key * stride + (floor_div(abs_c[1], w) + (1 << n));
    return key;
}

inline Coord abs_coord(const DyadicGrid& g, const Coord& base, const Coord& offset) {
    Coord t = {0, 0};
    for (int a = 0; a < g.d; ++a) {
        t[a] = base[a] + offset[a];
        if (g.boundary == Boundary::torus)
            t[a] = (t[a] % g.side() + g.side()) % g.side();
    }
    return t;
}

} // namespace

MatrixField truncated_average(const MatrixField& u, int k, int n) {
    const auto& g = u.grid();
    if (k >= n)
        throw LevelOrderViolation("truncated_average: requires k < n");
    check_level(g, k, "truncated_average");
    check_level(g, n, "truncated_average");

    const BallStencil st     = ball_stencil(g, k);
    const auto        sphere = st.sphere_offsets();
    const long        nkeys  = (g.boundary == Boundary::torus)
                                   ? g.cube_count(n)
                                   : (g.d == 1 ? (3L << n) : (3L << n) * (3L << n));
    MatrixField out(g);

#pragma omp parallel
    {
        std::vector<char> marked(static_cast<size_t>(nkeys), 0);
#pragma omp for schedule(static)
        for (long i = 0; i < u.cell_count(); ++i) {
            const Coord base = cell_coord(g, i);
            std::fill(marked.begin(), marked.end(), 0);
            for (const auto& s : sphere)
                marked[static_cast<size_t>(cube_key(g, n, abs_coord(g, base, s)))] = 1;

            Matrix acc = Matrix::Zero(g.matdim, g.matdim);
            for (const auto& o : st.offsets) {
                if (!marked[static_cast<size_t>(cube_key(g, n, abs_coord(g, base, o)))])
                    continue;
                const long t = resolve_offset(g, base, o);
                if (t >= 0) acc += u.cell(t);
            }
            out.cell(i) = acc / static_cast<double>(st.offsets.size());
        }
    }
    return out;
}

Matrix tilde_average_at(const MatrixField& v, const BallStencil& ball_of_j,
                        const std::vector<Coord>& annulus, long cell) {
    const auto& g    = v.grid();
    const Coord base = cell_coord(g, cell);
    Matrix      acc  = Matrix::Zero(g.matdim, g.matdim);
    for (const auto& o : annulus) {
        const long t = resolve_offset(g, base, o);
        if (t >= 0) acc += v.cell(t);
    }
    return acc / static_cast<double>(ball_of_j.offsets.size());
}

MatrixField tilde_average(const MatrixField& v, int j, int m) {
    const auto& g = v.grid();
    if (j >= m)
        throw LevelOrderViolation("tilde_average: requires j < m");
    check_level(g, j, "tilde_average");
    check_level(g, m, "tilde_average");

    const BallStencil        ball    = ball_stencil(g, j);
    const std::vector<Coord> annulus = annulus_stencil(g, j, m);
    MatrixField              out(g);

#pragma omp parallel for schedule(static)
    for (long i = 0; i < v.cell_count(); ++i)
        out.cell(i) = tilde_average_at(v, ball, annulus, i);
    return out;
}

Complex tensor_trace(const MatrixField& f) {
    Complex acc{0.0, 0.0};
    for (long i = 0; i < f.cell_count(); ++i) acc += f.cell(i).trace();
    return acc * f.grid().cell_volume();
}

double tensor_trace_re(const MatrixField& f) { return tensor_trace(f).real(); }

double field_lp_norm(const MatrixField& f, double p) {
    const bool inf = std::isinf(p) && p > 0;
    if (!inf && p < 1.0)
        throw InvalidExponent("field_lp_norm: p must satisfy p >= 1 or p = inf");
    double acc = 0.0;
    for (long i = 0; i < f.cell_count(); ++i) {
        Eigen::JacobiSVD<Matrix> svd(f.cell(i));
        const auto&              sv = svd.singularValues();
        if (inf) {
            if (sv.size() > 0) acc = std::max(acc, sv.maxCoeff());
        } else {
            for (int s = 0; s < sv.size(); ++s) acc += std::pow(sv[s], p);
        }
    }
    if (inf) return acc;
    return std::pow(acc * f.grid().cell_volume(), 1.0 / p);
}

double field_distribution(const MatrixField& f, double lambda) {
    double acc = 0.0;
    for (long i = 0; i < f.cell_count(); ++i) acc += distribution_at(f.cell(i), lambda);
    return acc * f.grid().cell_volume();
}

double field_weak_l1(const MatrixField& f) {
    // d(lambda) is a right-continuous step function; lambda * d(lambda) is
    // maximized approaching a singular value from below, where the count
    // includes that value. Sorting descending makes the sweep exact.
    std::vector<double> sv;
    sv.reserve(static_cast<size_t>(f.cell_count()) * f.grid().matdim);
    for (long i = 0; i < f.cell_count(); ++i) {
        Eigen::JacobiSVD<Matrix> svd(f.cell(i));
        for (int s = 0; s < svd.singularValues().size(); ++s)
            sv.push_back(svd.singularValues()[s]);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    const double vol  = f.grid().cell_volume();
    double       best = 0.0, mass = 0.0;
    for (double s : sv) {
        mass += vol;
        best = std::max(best, s * mass);
    }
    return best;
}

MatrixField martingale_difference(const MatrixField& f, int k) {
    const auto& g = f.grid();
    if (k < 1 || k > g.K)
        throw LevelOutOfRange("martingale_difference: requires 1 <= k <= K");
    return cond_expectation(f, k) - cond_expectation(f, k - 1);
}

} // namespace nclab
