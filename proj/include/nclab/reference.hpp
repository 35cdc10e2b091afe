#pragma once

/*
 * reference.hpp — serial reference implementations of the grid kernels.
 *
 * Plain single-threaded loops with the same stencil enumeration order as the
 * parallel kernels, kept as the comparison baseline: the tests assert the
 * OpenMP kernels reproduce these bit for bit, and the benchmark tool times
 * the two side by side.
 */

#include "nclab/field.hpp"

namespace nclab::ref {

MatrixField cond_expectation(const MatrixField& f, int k);
MatrixField ball_average(const MatrixField& f, int k);
MatrixField truncated_average(const MatrixField& u, int k, int n);
MatrixField tilde_average(const MatrixField& v, int j, int m);

} // namespace nclab::ref
