#pragma once

/*
 * transforms.hpp — the operators built from averaging differences:
 *
 *   T f   = sum_k nu_k (M_k - E_k) f          levels within [0, K]
 *   D f   = sum_k nu_k (M_k - M_{k-1}) f      levels within [1, K]
 *   S f   = ( sum_k |(M_k - E_k) f|^2 )^{1/2} cellwise, column form
 *   MT f  = sum_k nu_k (E_k - E_{k-1}) f      martingale transform
 *
 * All four are linear in f. On the torus every M_k and E_k is self-adjoint
 * for the L2(phi) pairing, hence so is T; the operator norm estimator uses
 * power iteration on T∘T.
 */

#include <cstdint>
#include <vector>

#include "nclab/averaging.hpp"

namespace nclab {

// Bounded coefficient sequence indexed by level; enforces ||nu||_inf <= 1.
class SignSequence {
public:
    explicit SignSequence(std::vector<double> coeff);
    static SignSequence ones(int K);
    static SignSequence zeros(int K);

    double at(int k) const { return coeff_.at(static_cast<size_t>(k)); }
    int    max_level() const { return static_cast<int>(coeff_.size()) - 1; }

private:
    std::vector<double> coeff_;
};

struct LevelRange {
    int lo = 0;
    int hi = 0;
};

MatrixField transform_T(const MatrixField& f, const SignSequence& nu, LevelRange levels);
MatrixField differential_transform_D(const MatrixField& f, const SignSequence& nu,
                                     LevelRange levels);
MatrixField square_function(const MatrixField& f, LevelRange levels, bool row_form = false);
MatrixField martingale_transform(const MatrixField& f, const SignSequence& nu);

// Power-iteration estimate of ||T|| on L2(phi): 5 seeded restarts of at most
// 200 iterations on T∘T, relative tolerance 1e-8, maximum over restarts.
double operator_norm_T(const DyadicGrid& g, const SignSequence& nu, LevelRange levels,
                       std::uint64_t seed);

} // namespace nclab
