#include "nclab/spectral.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace nclab {

namespace {

void require_square(const Matrix& x, const char* who) {
    if (x.rows() != x.cols())
        throw DimensionMismatch(std::string(who) + ": matrix is not square");
}

Eigen::VectorXd singular_values(const Matrix& x) {
    Eigen::JacobiSVD<Matrix> svd(x);
    return svd.singularValues();
}

} // namespace

bool Interval::contains(double t, double snap) const {
    // Snap t onto an endpoint when within `snap` of it.
    if (std::isfinite(lo) && std::abs(t - lo) <= snap) return lo_closed;
    if (std::isfinite(hi) && std::abs(t - hi) <= snap) return hi_closed;
    return t > lo && t < hi;
}

SpectralDecomposition eig_hermitian(const Matrix& x) {
    require_square(x, "eig_hermitian");
    const double scale = 1.0 + max_abs(x);
    if (hermiticity_residual(x) > kHermTol * scale)
        throw NonHermitianInput("eig_hermitian: hermiticity residual exceeds tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(x));
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix spectral_projection(const Matrix& x, const Interval& iv) {
    const auto   dec   = eig_hermitian(x);
    const int    n     = static_cast<int>(x.rows());
    double       scale = 1.0;
    if (dec.eigenvalues.size() > 0)
        scale = std::max(scale, dec.eigenvalues.cwiseAbs().maxCoeff());
    if (std::isfinite(iv.lo)) scale = std::max(scale, std::abs(iv.lo));
    if (std::isfinite(iv.hi)) scale = std::max(scale, std::abs(iv.hi));
    const double snap = kSnapTol * scale;

    Matrix p = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        if (iv.contains(dec.eigenvalues[i], snap))
            p += dec.frame.col(i) * dec.frame.col(i).adjoint();
    return p;
}

Matrix modulus(const Matrix& x) {
    require_square(x, "modulus");
    // x = U S V*  =>  |x| = V S V*
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullV);
    return svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().adjoint();
}

double schatten_norm(const Matrix& x, double p) {
    const bool inf = std::isinf(p) && p > 0;
    if (!inf && p < 1.0)
        throw InvalidExponent("schatten_norm: p must satisfy p >= 1 or p = inf");
    const auto sv = singular_values(x);
    if (sv.size() == 0) return 0.0;
    if (inf) return sv.maxCoeff();
    double acc = 0.0;
    for (int i = 0; i < sv.size(); ++i) acc += std::pow(sv[i], p);
    return std::pow(acc, 1.0 / p);
}

double distribution_at(const Matrix& x, double lambda) {
    const auto sv = singular_values(x);
    double     count = 0.0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > lambda) count += 1.0;
    return count;
}

bool loewner_leq(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("loewner_leq: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(Matrix(b - a)),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

double loewner_violation(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("loewner_violation: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(Matrix(b - a)),
                                             Eigen::EigenvaluesOnly);
    return std::max(0.0, -es.eigenvalues().minCoeff());
}

namespace {

// Columns spanning range(p) for a numerical projection p: eigenvectors with
// eigenvalue above 1/2.
Matrix range_basis(const Matrix& p) {
    const auto dec = eig_hermitian(p);
    const int  n   = static_cast<int>(p.rows());
    int        r   = 0;
    for (int i = 0; i < n; ++i)
        if (dec.eigenvalues[i] > 0.5) ++r;
    Matrix basis(n, r);
    int    c = 0;
    for (int i = 0; i < n; ++i)
        if (dec.eigenvalues[i] > 0.5) basis.col(c++) = dec.frame.col(i);
    return basis;
}

} // namespace

Matrix projection_join(std::span<const Matrix> ps) {
    if (ps.empty())
        throw DimensionMismatch("projection_join: empty input");
    const int n = static_cast<int>(ps.front().rows());
    int       cols = 0;
    std::vector<Matrix> bases;
    bases.reserve(ps.size());
    for (const auto& p : ps) {
        if (p.rows() != n || p.cols() != n)
            throw DimensionMismatch("projection_join: dimension mismatch");
        bases.push_back(range_basis(p));
        cols += static_cast<int>(bases.back().cols());
    }
    if (cols == 0) return Matrix::Zero(n, n);

    Matrix stacked(n, cols);
    int    c = 0;
    for (const auto& b : bases) {
        stacked.middleCols(c, b.cols()) = b;
        c += static_cast<int>(b.cols());
    }
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
    const auto&              sv = svd.singularValues();
    Matrix                   j  = Matrix::Zero(n, n);
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > kRangeCutoff)
            j += svd.matrixU().col(i) * svd.matrixU().col(i).adjoint();
    return j;
}

Matrix projection_meet(std::span<const Matrix> ps) {
    if (ps.empty())
        throw DimensionMismatch("projection_meet: empty input");
    const int n = static_cast<int>(ps.front().rows());
    // meet(p_i) = (join of complements)^perp
    std::vector<Matrix> comp;
    comp.reserve(ps.size());
    for (const auto& p : ps) {
        if (p.rows() != n || p.cols() != n)
            throw DimensionMismatch("projection_meet: dimension mismatch");
        comp.push_back(identity(n) - p);
    }
    return identity(n) - projection_join(comp);
}

double projection_residual(const Matrix& p) {
    if (p.rows() != p.cols()) return std::numeric_limits<double>::infinity();
    double r = hermiticity_residual(p);
    r = std::max(r, max_abs(Matrix(p * p - p)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(p), Eigen::EigenvaluesOnly);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double e = es.eigenvalues()[i];
        r = std::max(r, std::min(std::abs(e), std::abs(e - 1.0)));
    }
    return r;
}

} // namespace nclab
