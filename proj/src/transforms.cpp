#include "nclab/transforms.hpp"

#include <cmath>

#include "nclab/errors.hpp"
#include "nclab/rng.hpp"
#include "nclab/spectral.hpp"

namespace nclab {

SignSequence::SignSequence(std::vector<double> coeff) : coeff_(std::move(coeff)) {
    for (double c : coeff_)
        if (std::abs(c) > 1.0 + 1e-15)
            throw InvalidConfig("SignSequence: ||nu||_inf must be <= 1");
}

SignSequence SignSequence::ones(int K) {
    return SignSequence(std::vector<double>(static_cast<size_t>(K) + 1, 1.0));
}

SignSequence SignSequence::zeros(int K) {
    return SignSequence(std::vector<double>(static_cast<size_t>(K) + 1, 0.0));
}

namespace {

void check_range(const MatrixField& f, const SignSequence& nu, LevelRange r, int min_lo,
                 const char* who) {
    const int K = f.grid().K;
    if (r.lo < min_lo || r.hi > K || r.lo > r.hi)
        throw LevelOutOfRange(std::string(who) + ": level range out of bounds");
    if (nu.max_level() < r.hi)
        throw LevelOutOfRange(std::string(who) + ": sign sequence shorter than range");
}

} // namespace

MatrixField transform_T(const MatrixField& f, const SignSequence& nu, LevelRange levels) {
    check_range(f, nu, levels, 0, "transform_T");
    MatrixField out(f.grid());
    for (int k = levels.lo; k <= levels.hi; ++k) {
        if (nu.at(k) == 0.0) continue;
        MatrixField diff = ball_average(f, k) - cond_expectation(f, k);
        out += Complex(nu.at(k)) * std::move(diff);
    }
    return out;
}

MatrixField differential_transform_D(const MatrixField& f, const SignSequence& nu,
                                     LevelRange levels) {
    check_range(f, nu, levels, 1, "differential_transform_D");
    MatrixField out(f.grid());
    for (int k = levels.lo; k <= levels.hi; ++k) {
        if (nu.at(k) == 0.0) continue;
        MatrixField diff = ball_average(f, k) - ball_average(f, k - 1);
        out += Complex(nu.at(k)) * std::move(diff);
    }
    return out;
}

MatrixField square_function(const MatrixField& f, LevelRange levels, bool row_form) {
    const auto ones = SignSequence::ones(f.grid().K);
    check_range(f, ones, levels, 0, "square_function");
    const auto& g = f.grid();
    MatrixField sum_sq(g);
    for (int k = levels.lo; k <= levels.hi; ++k) {
        MatrixField diff = ball_average(f, k) - cond_expectation(f, k);
        for (long i = 0; i < f.cell_count(); ++i) {
            const Matrix& z = diff.cell(i);
            // column form |z|^2 = z* z, row form |z*|^2 = z z*
            sum_sq.cell(i) += row_form ? Matrix(z * z.adjoint()) : Matrix(z.adjoint() * z);
        }
    }
    MatrixField out(g);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < f.cell_count(); ++i) {
        const auto dec = eig_hermitian(sum_sq.cell(i));
        Matrix     root = Matrix::Zero(g.matdim, g.matdim);
        for (int e = 0; e < g.matdim; ++e)
            root += std::sqrt(std::max(0.0, dec.eigenvalues[e])) * dec.frame.col(e) *
                    dec.frame.col(e).adjoint();
        out.cell(i) = root;
    }
    return out;
}

MatrixField martingale_transform(const MatrixField& f, const SignSequence& nu) {
    const auto& g = f.grid();
    if (nu.max_level() < g.K)
        throw LevelOutOfRange("martingale_transform: sign sequence shorter than K");
    MatrixField out(g);
    for (int k = 1; k <= g.K; ++k) {
        if (nu.at(k) == 0.0) continue;
        out += Complex(nu.at(k)) * martingale_difference(f, k);
    }
    return out;
}

namespace {

double l2_inner(const MatrixField& a, const MatrixField& b) {
    Complex acc{0.0, 0.0};
    for (long i = 0; i < a.cell_count(); ++i)
        acc += (a.cell(i).adjoint() * b.cell(i)).trace();
    return (acc * a.grid().cell_volume()).real();
}

double l2_norm(const MatrixField& a) { return std::sqrt(std::max(0.0, l2_inner(a, a))); }

} // namespace

double operator_norm_T(const DyadicGrid& g, const SignSequence& nu, LevelRange levels,
                       std::uint64_t seed) {
    constexpr int    kRestarts = 5;
    constexpr int    kMaxIters = 200;
    constexpr double kRelTol   = 1e-8;

    double best = 0.0;
    for (int r = 0; r < kRestarts; ++r) {
        Rng         rng(mix_seed({seed, static_cast<std::uint64_t>(r), 0x706f776572ULL}));
        MatrixField v(g);
        for (long i = 0; i < v.cell_count(); ++i)
            for (int a = 0; a < g.matdim; ++a)
                for (int b = 0; b < g.matdim; ++b)
                    v.cell(i)(a, b) = rng.cgauss();
        double nv = l2_norm(v);
        if (nv == 0.0) continue;
        v *= Complex(1.0 / nv);

        double lam = 0.0;
        for (int it = 0; it < kMaxIters; ++it) {
            MatrixField w = transform_T(transform_T(v, nu, levels), nu, levels);
            const double nw = l2_norm(w);
            if (nw == 0.0) {
                lam = 0.0;
                break;
            }
            const double prev = lam;
            lam               = nw; // Rayleigh growth factor of T∘T for unit v
            v                 = std::move(w);
            v *= Complex(1.0 / nw);
            if (it > 0 && std::abs(lam - prev) <= kRelTol * lam) break;
        }
        best = std::max(best, std::sqrt(lam));
    }
    return best;
}

} // namespace nclab
