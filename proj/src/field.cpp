#include "nclab/field.hpp"

#include <Eigen/Eigenvalues>

#include "nclab/errors.hpp"

namespace nclab {

void check_same_grid(const MatrixField& a, const MatrixField& b, const char* who) {
    if (!(a.grid() == b.grid()))
        throw DimensionMismatch(std::string(who) + ": fields live on different grids");
}

MatrixField& MatrixField::operator+=(const MatrixField& o) {
    check_same_grid(*this, o, "field +");
    for (long i = 0; i < cell_count(); ++i) cells_[i] += o.cells_[i];
    return *this;
}

MatrixField& MatrixField::operator-=(const MatrixField& o) {
    check_same_grid(*this, o, "field -");
    for (long i = 0; i < cell_count(); ++i) cells_[i] -= o.cells_[i];
    return *this;
}

MatrixField& MatrixField::operator*=(Complex s) {
    for (auto& c : cells_) c *= s;
    return *this;
}

MatrixField cellwise_product(const MatrixField& a, const MatrixField& b) {
    check_same_grid(a, b, "cellwise_product");
    MatrixField out(a.grid());
    for (long i = 0; i < a.cell_count(); ++i) out.cell(i) = a.cell(i) * b.cell(i);
    return out;
}

MatrixField adjoint_field(const MatrixField& f) {
    MatrixField out(f.grid());
    for (long i = 0; i < f.cell_count(); ++i) out.cell(i) = f.cell(i).adjoint();
    return out;
}

bool is_hermitian_field(const MatrixField& f, double rel_tol) {
    for (long i = 0; i < f.cell_count(); ++i)
        if (!is_hermitian(f.cell(i), rel_tol)) return false;
    return true;
}

double psd_violation(const MatrixField& f) {
    double worst = 0.0;
    for (long i = 0; i < f.cell_count(); ++i) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(f.cell(i)),
                                                 Eigen::EigenvaluesOnly);
        worst = std::max(worst, std::max(0.0, -es.eigenvalues().minCoeff()));
    }
    return worst;
}

double max_cell_distance(const MatrixField& a, const MatrixField& b) {
    check_same_grid(a, b, "max_cell_distance");
    double worst = 0.0;
    for (long i = 0; i < a.cell_count(); ++i)
        worst = std::max(worst, max_abs(Matrix(a.cell(i) - b.cell(i))));
    return worst;
}

} // namespace nclab
