#pragma once

#include <Eigen/Dense>
#include <complex>

namespace nclab {

using Complex    = std::complex<double>;
using Matrix     = Eigen::MatrixXcd; // dense n x n, the element of M_n(C)
using RealVector = Eigen::VectorXd;

// Largest entry modulus; cheap scale estimate used by tolerance rules.
inline double max_abs(const Matrix& x) {
    if (x.size() == 0) return 0.0;
    return x.cwiseAbs().maxCoeff();
}

// max_ij |x_ij - conj(x_ji)|, the raw hermiticity defect.
inline double hermiticity_residual(const Matrix& x) {
    return max_abs(Matrix(x - x.adjoint()));
}

inline bool is_hermitian(const Matrix& x, double rel_tol = 1e-9) {
    if (x.rows() != x.cols()) return false;
    return hermiticity_residual(x) <= rel_tol * (1.0 + max_abs(x));
}

inline Matrix hermitian_part(const Matrix& x) {
    return 0.5 * (x + x.adjoint());
}

inline Matrix identity(int n) { return Matrix::Identity(n, n); }

} // namespace nclab
