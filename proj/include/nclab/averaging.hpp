#pragma once

/*
 * averaging.hpp — conditional expectations, ball averages, truncated and
 * smoothed averages, and the integral functionals built on them.
 *
 *   E_k f : average over the level-k dyadic cube containing each cell
 *   M_k f : average over the discrete ball of radius 2^{-k}
 *   M_{k,n} u : ball average restricted to the union of level-n cubes that
 *               meet the sphere of the ball (k < n)
 *   Mt_{j,m} v : convolution with the normalized indicator of the annulus
 *               I_{j,m} = { cells within sqrt(d) 2^{-m} of the sphere of B_j }
 *
 * The cell loops are OpenMP-parallel; each output cell is produced by one
 * thread with a fixed summation order, so results are identical for any
 * thread count. Reductions (traces, norms) are serial.
 */

#include "nclab/field.hpp"

namespace nclab {

MatrixField cond_expectation(const MatrixField& f, int k);
MatrixField ball_average(const MatrixField& f, int k);
MatrixField truncated_average(const MatrixField& u, int k, int n);
MatrixField tilde_average(const MatrixField& v, int j, int m);

// Point evaluations against a prebuilt stencil (sampled-cell verification paths).
Matrix ball_average_at(const MatrixField& f, const BallStencil& st, long cell);
Matrix tilde_average_at(const MatrixField& v, const BallStencil& ball_of_j,
                        const std::vector<Coord>& annulus, long cell);

// phi(f) = sum over cells of vol * Tr(value).
Complex tensor_trace(const MatrixField& f);
double  tensor_trace_re(const MatrixField& f);

// ||f||_p with the tensor trace; p in [1, inf].
double field_lp_norm(const MatrixField& f, double p);

// phi(chi_{(lambda,inf)}(|f|)) = sum of vol * #{singular values > lambda}.
double field_distribution(const MatrixField& f, double lambda);

// sup_lambda lambda * phi(chi_{(lambda,inf)}(|f|)), evaluated exactly at
// singular-value breakpoints.
double field_weak_l1(const MatrixField& f);

// df_k = E_k f - E_{k-1} f, for 1 <= k <= K.
MatrixField martingale_difference(const MatrixField& f, int k);

} // namespace nclab
