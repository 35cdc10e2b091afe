#include "nclab/ensemble.hpp"

#include <cmath>
#include <limits>

#include "nclab/averaging.hpp"
#include "nclab/errors.hpp"

namespace nclab {

std::string to_string(Generator g) {
    switch (g) {
        case Generator::random_psd: return "random-psd";
        case Generator::sparse_spike: return "sparse-spike";
        case Generator::smooth_plus_spike: return "smooth-plus-spike";
        case Generator::scalar: return "scalar";
        case Generator::mixed: return "mixed";
    }
    return "?";
}

std::string to_string(SignPolicy s) {
    switch (s) {
        case SignPolicy::all_ones: return "all-ones";
        case SignPolicy::pm_random: return "pm-random";
        case SignPolicy::uniform_random: return "uniform-random";
    }
    return "?";
}

std::string to_string(Boundary b) {
    return b == Boundary::torus ? "torus" : "zero";
}

namespace {

bool in_middle_half(const DyadicGrid& g, long cell) {
    const Coord c = cell_coord(g, cell);
    for (int a = 0; a < g.d; ++a)
        if (c[a] < g.side() / 4 || c[a] >= 3 * g.side() / 4) return false;
    return true;
}

Matrix random_psd_value(Rng& rng, int n, double amp) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.cgauss();
    return amp * Matrix(a * a.adjoint());
}

void mask_to_support(const EnsembleSpec& spec, MatrixField& f) {
    if (spec.boundary != Boundary::zero) return;
    for (long i = 0; i < f.cell_count(); ++i)
        if (!in_middle_half(f.grid(), i))
            f.cell(i).setZero();
}

MatrixField gen_random_psd(const DyadicGrid& g, Rng& rng) {
    MatrixField f(g);
    for (long i = 0; i < f.cell_count(); ++i)
        f.cell(i) = random_psd_value(rng, g.matdim, 1.0);
    return f;
}

// Spike amplitudes are keyed to target stopping depths: a spike of size
// ~2^{(K-l)d} against lambda = ||f||_1 stops the recursion near level l, so a
// handful of spikes with random l spreads the bad mass across the filtration
// instead of piling it at one level.
MatrixField gen_sparse_spike(const DyadicGrid& g, Rng& rng) {
    MatrixField f(g);
    const int   spikes = rng.uniform_int(2, g.K + 1);
    for (int s = 0; s < spikes; ++s) {
        const int  ell  = rng.uniform_int(1, g.K);
        const long cell = rng.uniform_int(0, static_cast<int>(g.cell_count()) - 1);
        const double amp = std::pow(2.0, (g.K - ell) * g.d) * rng.uniform(0.5, 2.0);
        f.cell(cell) += random_psd_value(rng, g.matdim, amp / g.matdim);
    }
    return f;
}

MatrixField gen_smooth_plus_spike(const DyadicGrid& g, Rng& rng) {
    const int coarse = std::min(2, g.K);
    MatrixField f(g);
    for (long q = 0; q < g.cube_count(coarse); ++q) {
        const Matrix v = random_psd_value(rng, g.matdim, 0.5);
        for (long c : cube_cells(g, coarse, q)) f.cell(c) = v;
    }
    const long cell = rng.uniform_int(0, static_cast<int>(g.cell_count()) - 1);
    f.cell(cell) += random_psd_value(rng, g.matdim,
                                     std::pow(2.0, g.K * g.d) / (4.0 * g.matdim));
    return f;
}

MatrixField gen_scalar(const DyadicGrid& g, Rng& rng) {
    MatrixField f(g);
    const int   hot = rng.uniform_int(0, static_cast<int>(g.cell_count()) - 1);
    for (long i = 0; i < f.cell_count(); ++i) {
        double u = rng.uniform(0.0, 1.0);
        if (i == hot) u += std::pow(2.0, g.K * g.d) * rng.uniform(0.25, 1.0);
        f.cell(i) = u * identity(g.matdim);
    }
    return f;
}

} // namespace

MatrixField make_instance(const EnsembleSpec& spec, int index, int K) {
    const DyadicGrid g(spec.d, K, spec.boundary, spec.matdim);
    Rng rng(mix_seed({spec.seed, static_cast<std::uint64_t>(spec.d),
                      static_cast<std::uint64_t>(K),
                      static_cast<std::uint64_t>(spec.matdim),
                      static_cast<std::uint64_t>(index), 0xf1e1dULL}));

    Generator gen = spec.generator;
    if (gen == Generator::mixed) {
        constexpr Generator cycle[4] = {Generator::random_psd, Generator::sparse_spike,
                                        Generator::smooth_plus_spike, Generator::scalar};
        gen = cycle[index % 4];
    }

    MatrixField f(g);
    switch (gen) {
        case Generator::random_psd: f = gen_random_psd(g, rng); break;
        case Generator::sparse_spike: f = gen_sparse_spike(g, rng); break;
        case Generator::smooth_plus_spike: f = gen_smooth_plus_spike(g, rng); break;
        case Generator::scalar: f = gen_scalar(g, rng); break;
        case Generator::mixed: break; // unreachable
    }
    mask_to_support(spec, f);
    return f;
}

SignSequence make_signs(const EnsembleSpec& spec, int index, int K) {
    if (spec.signs == SignPolicy::all_ones) return SignSequence::ones(K);
    Rng rng(mix_seed({spec.seed, static_cast<std::uint64_t>(index),
                      static_cast<std::uint64_t>(K), 0x51675ULL}));
    std::vector<double> c(static_cast<size_t>(K) + 1);
    for (auto& v : c)
        v = (spec.signs == SignPolicy::pm_random) ? (rng.uniform() < 0.5 ? -1.0 : 1.0)
                                                  : rng.uniform(-1.0, 1.0);
    return SignSequence(std::move(c));
}

double lambda_for(const EnsembleSpec& spec, const MatrixField& f) {
    if (spec.lambda_policy == LambdaPolicy::fixed) return spec.lambda_value;
    const double l1 = field_lp_norm(f, 1.0);
    return spec.lambda_value * (l1 > 0.0 ? l1 : 1.0);
}

std::vector<double> lambda_sweep(const MatrixField& f) {
    const double linf = field_lp_norm(f, std::numeric_limits<double>::infinity());
    const double l1   = field_lp_norm(f, 1.0);
    std::vector<double> grid;
    if (linf > 0.0)
        for (int j = 0; j <= f.grid().K + 2; ++j)
            grid.push_back(std::ldexp(linf, -j));
    if (l1 > 0.0) grid.push_back(l1);
    if (grid.empty()) grid.push_back(1.0);
    return grid;
}

} // namespace nclab
