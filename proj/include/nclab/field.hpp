#pragma once

/*
 * field.hpp — piecewise-constant matrix-valued functions on the dyadic grid.
 *
 * A MatrixField assigns one n x n complex matrix to every finest-level cell.
 * Values are not required to be Hermitian: stopping-time products like
 * p_n f q_n are stored in the same container. Fields are value types; every
 * operation in the library returns a fresh field and never mutates inputs,
 * which is what makes the cell-parallel kernels race-free.
 */

#include <vector>

#include "nclab/grid.hpp"
#include "nclab/matrix.hpp"

namespace nclab {

class MatrixField {
public:
    MatrixField() = default;
    explicit MatrixField(const DyadicGrid& g)
        : grid_(g), cells_(g.cell_count(), Matrix::Zero(g.matdim, g.matdim)) {}

    static MatrixField constant(const DyadicGrid& g, const Matrix& value) {
        MatrixField f(g);
        for (auto& c : f.cells_) c = value;
        return f;
    }
    static MatrixField identity_field(const DyadicGrid& g) {
        return constant(g, Matrix::Identity(g.matdim, g.matdim));
    }

    const DyadicGrid& grid() const { return grid_; }
    long cell_count() const { return static_cast<long>(cells_.size()); }

    Matrix&       cell(long i) { return cells_[static_cast<size_t>(i)]; }
    const Matrix& cell(long i) const { return cells_[static_cast<size_t>(i)]; }

    MatrixField& operator+=(const MatrixField& o);
    MatrixField& operator-=(const MatrixField& o);
    MatrixField& operator*=(Complex s);

    friend MatrixField operator+(MatrixField a, const MatrixField& b) { return a += b; }
    friend MatrixField operator-(MatrixField a, const MatrixField& b) { return a -= b; }
    friend MatrixField operator*(Complex s, MatrixField a) { return a *= s; }

private:
    DyadicGrid          grid_;
    std::vector<Matrix> cells_;
};

void check_same_grid(const MatrixField& a, const MatrixField& b, const char* who);

// Cellwise a(x) * b(x).
MatrixField cellwise_product(const MatrixField& a, const MatrixField& b);
// Cellwise a(x)*.
MatrixField adjoint_field(const MatrixField& f);

bool is_hermitian_field(const MatrixField& f, double rel_tol = 1e-9);
// Max over cells of max(0, -lambda_min): 0 for PSD fields.
double psd_violation(const MatrixField& f);
// Max over cells of max-entry distance, for exact-equality style checks.
double max_cell_distance(const MatrixField& a, const MatrixField& b);

} // namespace nclab
