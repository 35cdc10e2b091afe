#pragma once

/*
 * czd.hpp — stopping-time projections and the Calderon-Zygmund decomposition
 * for positive matrix fields.
 *
 * Given a PSD field f and a threshold lambda, the construction runs the
 * recursion (with q_{-1} = 1)
 *
 *     q_k = q_{k-1} - chi_{(lambda,inf)}( q_{k-1} f_k q_{k-1} ),   f_k = E_k f,
 *
 * computed once per level-k cube (both factors are cube-constant). Removing
 * the strictly-above-lambda spectral part, rather than taking chi_{(0,lambda]}
 * literally, keeps kernel vectors of q_{k-1} f_k q_{k-1} inside q_k; this is
 * the endpoint convention that preserves q_k <= q_{k-1} and every conclusion
 * of the stopping-time lemma, and coincides with chi_{(0,lambda]} whenever
 * the compressed average is strictly positive on range(q_{k-1}).
 *
 * From the family: p_k = q_{k-1} - q_k, the good part g = qfq + sum p_n f_n p_n,
 * the bad parts b_n = p_n (f - f_n) q_n + q_{n-1} (f - f_n) p_n (stored as the
 * two summands), the screening projection
 *
 *     zeta(x) = ( join of p_Q over all cubes Q with x in 5Q )^perp,
 *
 * and the diagonal/off-diagonal regrouping b_d,n = p_n (f - f_n) p_n,
 * b_off,n = p_n (f - f_n) q_n + q_n (f - f_n) p_n.
 *
 * The recursion is sequential in k; within a level the per-cube spectral
 * calculus runs cell-parallel.
 */

#include <optional>
#include <vector>

#include "nclab/averaging.hpp"

namespace nclab {

// Largest m in [0, K] with E_k f <= lambda * 1 for all k <= m, or nullopt
// when already E_0 f fails (the "root exceeds" case). Throws NonPositiveField.
std::optional<int> m_lambda(const MatrixField& f, double lambda);

struct CuculescuFamily {
    double                   lambda = 0.0;
    std::optional<int>       start_level;   // m_lambda(f); nullopt = root exceeds
    std::vector<MatrixField> q;             // q[k], k = 0..K, decreasing projections
    std::vector<MatrixField> p;             // p[k] = q[k-1] - q[k], with q[-1] = 1
    MatrixField              terminal;      // q = meet_k q_k = q[K]

    int levels() const { return static_cast<int>(q.size()) - 1; }
};

CuculescuFamily cuculescu(const MatrixField& f, double lambda);

// zeta = (join over cubes Q, all levels, of p_Q chi_{5Q})^perp. In torus mode
// 5Q wraps; in zero mode it is clipped to the domain.
MatrixField zeta(const CuculescuFamily& family);

struct CZDecomposition {
    MatrixField              f;       // the input that was decomposed
    double                   lambda = 0.0;
    CuculescuFamily          family;
    MatrixField              g;
    std::vector<MatrixField> b_left;  // p_n (f - f_n) q_n,      n = 0..K
    std::vector<MatrixField> b_right; // q_{n-1} (f - f_n) p_n,  n = 0..K
    MatrixField              screen;  // zeta

    MatrixField b_part(int n) const { return b_left[n] + b_right[n]; }
    MatrixField b_total() const;
};

CZDecomposition cz_decompose(const MatrixField& f, double lambda);

struct DiagOffdiagSplit {
    std::vector<MatrixField> diag;    // b_d,n  = p_n (f - f_n) p_n
    std::vector<MatrixField> offdiag; // b_off,n = p_n (f-f_n) q_n + q_n (f-f_n) p_n
};

DiagOffdiagSplit diag_offdiag_split(const CZDecomposition& dec);

struct CancellationReport {
    // max over n, Q in Q_n of || cellvol * sum_{y in Q} b_n(y) || / scale
    double cube_integral_residual = 0.0;
    // max over stopping cubes Q and x in 5Q of the factorized bound
    // 2 ||zeta(x) p_Q|| * max_{y in Q} ||(f - f_n)(y)|| / scale
    double zeta_sandwich_residual = 0.0;
    // max over k >= n and sampled x of || zeta (M_k - E_k) b_n zeta (x) || / scale
    double screened_transform_residual = 0.0;
    double scale = 0.0; // max(lambda, ||f||_inf)
};

// Evaluates both cancellation conditions of the decomposition and the
// screened-transform consequence; sample_cells limits the per-(k,n) cell
// sample for the screened check (0 = all cells).
CancellationReport cancellation_check(const CZDecomposition& dec, int sample_cells = 0,
                                      std::uint64_t sample_seed = 17);

// Normalized residuals of the stopping-family invariants. Everything is
// scaled so that "holds" means "< 1e-8": Loewner defects are divided by
// lambda, commutators by the local operator scale.
struct FamilyResiduals {
    double monotone       = 0.0; // q_k <= q_{k-1}
    double measurable     = 0.0; // E_k q_k = q_k
    double commutator     = 0.0; // [q_k, q_{k-1} f_k q_{k-1}] = 0
    double compression    = 0.0; // q_k f_k q_k <= lambda q_k
    double partition      = 0.0; // sum_k p_k + q = 1
    double level_bound    = 0.0; // ||p_k f_k p_k||_inf <= 2^d lambda
    double projection     = 0.0; // q_k are projections
    double maximal_margin = 0.0; // phi(1-q) - ||f||_1/lambda (<= 0 when it holds)

    double worst() const;
};

FamilyResiduals family_residuals(const MatrixField& f, const CuculescuFamily& fam);

// Everything criterion-level about one decomposition, reused by the manifest
// writer, the harness and the acceptance suite.
struct DecompositionChecks {
    bool   root_exceeds = false;
    double f_l1 = 0.0, g_l1 = 0.0, g_linf = 0.0;
    double good_linf_bound = 0.0;                         // 2^d lambda
    double reconstruction_rel = 0.0;                      // ||f - g - b||_1 / ||f||_1
    double phi_one_minus_q = 0.0, phi_one_minus_zeta = 0.0;
    double zeta_bound = 0.0;                              // 5^d ||f||_1 / lambda
    double g_psd_violation = 0.0;
    FamilyResiduals    family;
    CancellationReport cancellation;
};

DecompositionChecks check_decomposition(const CZDecomposition& dec, int sample_cells = 0);

} // namespace nclab
