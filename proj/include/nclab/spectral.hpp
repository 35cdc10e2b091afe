#pragma once

/*
 * spectral.hpp — Hermitian functional calculus and trace-norm primitives.
 *
 * Conventions used throughout the project:
 *
 *   trace        : unnormalized Tr on M_n(C), so tau(1) = n
 *   modulus      : |x| = (x* x)^{1/2}
 *   p-norm       : ||x||_p = [Tr(|x|^p)]^{1/p},  ||x||_inf = largest singular value
 *   distribution : d_x(lambda) = Tr(chi_{(lambda,inf)}(|x|)) = #{sigma_i > lambda}
 *   Loewner a<=b : b - a positive semidefinite (up to an explicit slack)
 *
 * Spectral projections chi_I(x) resolve interval endpoints with a snapping
 * rule: an eigenvalue within 1e-12 * scale of an endpoint is treated as equal
 * to it, so chi_{(lambda,inf)} of a matrix whose top eigenvalue is lambda up
 * to roundoff is reproducibly zero.
 */

#include <limits>
#include <span>
#include <vector>

#include "nclab/errors.hpp"
#include "nclab/matrix.hpp"

namespace nclab {

constexpr double kHermTol       = 1e-9;  // hermiticity residual, relative
constexpr double kSnapTol       = 1e-12; // interval endpoint snapping, relative
constexpr double kRangeCutoff   = 1e-10; // singular-value cutoff for range bases
constexpr double kProjectionTol = 1e-8;  // idempotence / 0-1 spectrum slack

struct SpectralDecomposition {
    RealVector eigenvalues; // ascending
    Matrix     frame;       // unitary; frame.col(i) is the i-th eigenvector
};

// Real interval with open/closed endpoints; +-infinity allowed.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool   lo_closed = false;
    bool   hi_closed = false;

    static Interval open(double a, double b) { return {a, b, false, false}; }
    static Interval closed(double a, double b) { return {a, b, true, true}; }
    static Interval open_closed(double a, double b) { return {a, b, false, true}; } // (a, b]
    static Interval closed_open(double a, double b) { return {a, b, true, false}; } // [a, b)
    static Interval above(double a) { // (a, inf)
        return {a, std::numeric_limits<double>::infinity(), false, false};
    }
    static Interval all() { return {}; }

    // Membership with endpoint snapping at absolute tolerance `snap`.
    bool contains(double t, double snap) const;
};

// Eigendecomposition of a Hermitian matrix. Throws NonHermitianInput when the
// hermiticity residual exceeds kHermTol * (1 + max|entry|).
SpectralDecomposition eig_hermitian(const Matrix& x);

// chi_I(x): orthogonal projection onto the eigenspaces of x with eigenvalue
// in I. Snapping scale is max(1, max|eigenvalue|, |finite endpoints|).
Matrix spectral_projection(const Matrix& x, const Interval& iv);

// |x| = (x* x)^{1/2}; defined for any square matrix.
Matrix modulus(const Matrix& x);

// Schatten p-norm, p in [1, inf]. Throws InvalidExponent for p < 1.
double schatten_norm(const Matrix& x, double p);

// Number of singular values strictly greater than lambda.
double distribution_at(const Matrix& x, double lambda);

// True iff lambda_min(b - a) >= -tol. Throws DimensionMismatch.
bool loewner_leq(const Matrix& a, const Matrix& b, double tol);

// max(0, -lambda_min(b - a)): how badly a <= b fails. 0 means it holds.
double loewner_violation(const Matrix& a, const Matrix& b);

// Lattice operations on orthogonal projections, computed by rank-revealing
// SVD of stacked range bases with singular-value cutoff kRangeCutoff.
Matrix projection_join(std::span<const Matrix> ps); // onto span of union of ranges
Matrix projection_meet(std::span<const Matrix> ps); // onto intersection of ranges

// Validation helper: max of idempotence defect, hermiticity defect and
// distance of eigenvalues from {0,1}.
double projection_residual(const Matrix& p);

} // namespace nclab
