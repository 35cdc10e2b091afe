// bench_kernels — times the OpenMP grid kernels against the serial reference
// implementations on identical inputs and reports speedups. The outputs are
// also compared exactly; a mismatch is a bug, not a rounding question, since
// both paths sum in the same order.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include "nclab/averaging.hpp"
#include "nclab/ensemble.hpp"
#include "nclab/reference.hpp"

using namespace nclab;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

void row(const std::string& name, double serial, double parallel, double mismatch) {
    std::printf("%-28s serial %9.4fs  omp %9.4fs  speedup %5.2fx  max|diff| %g\n",
                name.c_str(), serial, parallel, serial / parallel, mismatch);
}

} // namespace

int main(int argc, char** argv) {
    int d = 2, K = 5, n = 4, reps = 3;
    if (argc > 1) d = std::atoi(argv[1]);
    if (argc > 2) K = std::atoi(argv[2]);
    if (argc > 3) n = std::atoi(argv[3]);
    if (argc > 4) reps = std::atoi(argv[4]);

    std::printf("grid d=%d K=%d n=%d, %d repetitions, omp threads %d\n", d, K, n, reps,
                omp_get_max_threads());

    EnsembleSpec spec;
    spec.d      = d;
    spec.K_lo   = spec.K_hi = K;
    spec.matdim = n;
    spec.generator = Generator::random_psd;
    const MatrixField f = make_instance(spec, 0, K);

    {
        MatrixField a, b;
        const int   k = 1;
        const double ts = time_best_of(reps, [&] { a = ref::ball_average(f, k); });
        const double tp = time_best_of(reps, [&] { b = ball_average(f, k); });
        row("ball_average k=1", ts, tp, max_cell_distance(a, b));
    }
    {
        MatrixField a, b;
        const int   k = 2;
        const double ts = time_best_of(reps, [&] { a = ref::ball_average(f, k); });
        const double tp = time_best_of(reps, [&] { b = ball_average(f, k); });
        row("ball_average k=2", ts, tp, max_cell_distance(a, b));
    }
    {
        MatrixField a, b;
        const double ts = time_best_of(reps, [&] { a = ref::cond_expectation(f, 2); });
        const double tp = time_best_of(reps, [&] { b = cond_expectation(f, 2); });
        row("cond_expectation k=2", ts, tp, max_cell_distance(a, b));
    }
    {
        MatrixField a, b;
        const double ts = time_best_of(reps, [&] { a = ref::truncated_average(f, 1, 3); });
        const double tp = time_best_of(reps, [&] { b = truncated_average(f, 1, 3); });
        row("truncated_average k=1 n=3", ts, tp, max_cell_distance(a, b));
    }
    {
        MatrixField a, b;
        const double ts = time_best_of(reps, [&] { a = ref::tilde_average(f, 1, 3); });
        const double tp = time_best_of(reps, [&] { b = tilde_average(f, 1, 3); });
        row("tilde_average j=1 m=3", ts, tp, max_cell_distance(a, b));
    }
    return 0;
}
