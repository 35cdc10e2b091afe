#pragma once

/*
 * verify.hpp — the claim harness.
 *
 * Every quantitative statement of the theory is measured as either a
 * dimensionless ratio (measured LHS over theoretical RHS, checked against a
 * frozen ceiling) or a normalized residual (checked against a fixed
 * tolerance). A claim runs over a deterministic ensemble and produces a
 * BoundReport with one record per instance; reports are reproducible bit for
 * bit from the configuration, and runtimes are kept out of the report body
 * for that reason.
 *
 * Implicit constants are never asserted as specific numbers: ceilings default
 * to 10x the value measured on the frozen reference ensemble (golden.hpp),
 * and uniformity-in-K across K = 3..6 stands in for "the constant depends
 * only on p and d".
 */

#include <map>
#include <string>
#include <vector>

#include "nclab/czd.hpp"
#include "nclab/ensemble.hpp"

namespace nclab {

struct RatioRecord {
    int    d = 0, K = 0, n = 0, index = 0;
    double value = 0.0;
    bool   pass = true;
};

struct BoundReport {
    std::string              claim;
    std::vector<RatioRecord> records; // ordered by (d, K, n, index)
    double                   ceiling = 0.0;
    double                   max_value = 0.0;
    double                   mean_value = 0.0;
    bool                     pass = true;
    double                   runtime_sec = 0.0; // console only, never in the body
    std::vector<std::string> notes;
    std::map<int, double>    max_by_K; // per-K maxima, for uniformity checks

    // max/min of per-K maxima over K groups with nonnegligible values;
    // 1.0 when fewer than two groups qualify.
    double k_variation() const;
    void   finalize(double ceil);
};

struct VerifyConfig {
    std::uint64_t            seed = 0x5eedULL;
    int                      count = 32; // instances per (d, K, n)
    std::vector<int>         dims{1, 2};
    std::vector<int>         Ks{3, 4, 5};
    std::vector<int>         ns{1, 2, 4};
    Boundary                 boundary = Boundary::torus;
    Generator                generator = Generator::mixed;
    SignPolicy               signs = SignPolicy::pm_random;
    std::vector<std::string> claims; // empty = all
    std::map<std::string, double> tolerance_overrides;

    std::string echo() const; // one-line deterministic rendering
};

struct Instance {
    int           d = 0, K = 0, n = 0, index = 0;
    MatrixField   f;
    SignSequence  nu;
    double        lambda = 0.0;
};

// Instances for one (d, K, n) block of the config, lambda = ||f||_1 policy.
std::vector<Instance> build_instances(const VerifyConfig& cfg, int d, int K, int n);

const std::vector<std::string>& all_claim_names();
bool                            is_claim_name(const std::string& name);

// Runs one claim over the configured ensemble.
BoundReport run_claim(const std::string& name, const VerifyConfig& cfg);

struct VerifyResult {
    std::vector<BoundReport> reports;
    bool                     all_pass = true;
    std::string              report_text; // header + body, deterministic
    std::string              table_csv;
};

VerifyResult run_verify(const VerifyConfig& cfg);

// BMO_d norms of a field: (row, column).
std::pair<double, double> bmo_norm(const MatrixField& f);

// FNV-1a of a string, used for the config hash embedded in report headers.
std::uint64_t fnv1a(const std::string& s);

} // namespace nclab
