#pragma once

/*
 * ensemble.hpp — deterministic instance generation for the claim harness.
 *
 * An EnsembleSpec pins everything: the same spec always produces the same
 * fields, sign sequences and thresholds, so every report derived from one is
 * reproducible bit for bit. Per-instance streams are derived by mixing the
 * master seed with (d, K, n, index).
 *
 * Generators:
 *   random_psd        A(x) A(x)* with i.i.d. complex gaussian A per cell
 *   sparse_spike      a few hot cells carrying large PSD spikes, zero elsewhere
 *   smooth_plus_spike coarse-level random PSD background plus one spike
 *   scalar            u(x) * 1_n with a nonnegative random scalar u
 *   mixed             cycles through the four above by instance index
 *
 * In zero-extension mode every generator restricts its support to the middle
 * half of the cube.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "nclab/field.hpp"
#include "nclab/rng.hpp"
#include "nclab/transforms.hpp"

namespace nclab {

enum class Generator { random_psd, sparse_spike, smooth_plus_spike, scalar, mixed };
enum class SignPolicy { all_ones, pm_random, uniform_random };
enum class LambdaPolicy { fixed, l1_multiple };

struct EnsembleSpec {
    std::uint64_t seed  = 1;
    int           count = 8;
    int           d     = 1;
    int           K_lo  = 3;
    int           K_hi  = 3;
    int           matdim = 2;
    Boundary      boundary = Boundary::torus;
    Generator     generator = Generator::mixed;
    SignPolicy    signs = SignPolicy::all_ones;
    LambdaPolicy  lambda_policy = LambdaPolicy::l1_multiple;
    double        lambda_value  = 1.0; // fixed value, or multiplier of ||f||_1
};

std::string to_string(Generator g);
std::string to_string(SignPolicy s);
std::string to_string(Boundary b);

MatrixField  make_instance(const EnsembleSpec& spec, int index, int K);
SignSequence make_signs(const EnsembleSpec& spec, int index, int K);
double       lambda_for(const EnsembleSpec& spec, const MatrixField& f);

// The threshold grid { 2^{-j} ||f||_inf : j = 0..K+2 } plus ||f||_1.
std::vector<double> lambda_sweep(const MatrixField& f);

} // namespace nclab
