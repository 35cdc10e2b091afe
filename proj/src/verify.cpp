#include "nclab/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "nclab/errors.hpp"
#include "nclab/golden.hpp"
#include "nclab/reference.hpp"
#include "nclab/spectral.hpp"

namespace nclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double l2sq(const MatrixField& f) {
    const double n = field_lp_norm(f, 2.0);
    return n * n;
}

} // namespace

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double BoundReport::k_variation() const {
    double lo = kInf, hi = 0.0;
    for (const auto& [k, v] : max_by_K) {
        if (v <= 1e-12) continue; // degenerate group (no mass at this K)
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo < kInf) || lo == 0.0) return 1.0;
    return hi / lo;
}

void BoundReport::finalize(double ceil) {
    ceiling = ceil;
    std::sort(records.begin(), records.end(), [](const RatioRecord& a, const RatioRecord& b) {
        return std::tie(a.d, a.K, a.n, a.index) < std::tie(b.d, b.K, b.n, b.index);
    });
    max_value  = 0.0;
    mean_value = 0.0;
    pass       = true;
    for (auto& r : records) {
        max_value += 0.0;
        max_value = std::max(max_value, r.value);
        mean_value += r.value;
        if (r.value > ceiling) r.pass = false;
        pass = pass && r.pass;
    }
    if (!records.empty()) mean_value /= static_cast<double>(records.size());
}

std::string VerifyConfig::echo() const {
    std::string s = "seed=" + std::to_string(seed) + " count=" + std::to_string(count);
    auto join = [](const std::vector<int>& v) {
        std::string r;
        for (size_t i = 0; i < v.size(); ++i)
            r += (i ? "," : "") + std::to_string(v[i]);
        return r;
    };
    s += " dims=" + join(dims) + " Ks=" + join(Ks) + " ns=" + join(ns);
    s += " boundary=" + to_string(boundary);
    s += " generator=" + to_string(generator);
    s += " signs=" + to_string(signs);
    s += " claims=";
    if (claims.empty())
        s += "all";
    else
        for (size_t i = 0; i < claims.size(); ++i) s += (i ? "," : "") + claims[i];
    s += " overrides=";
    if (tolerance_overrides.empty())
        s += "none";
    else {
        bool first = true;
        for (const auto& [k, v] : tolerance_overrides) {
            if (!first) s += ",";
            s += k + "=" + fmt(v);
            first = false;
        }
    }
    return s;
}

namespace {

EnsembleSpec block_spec(const VerifyConfig& cfg, int d, int K, int n, int count) {
    EnsembleSpec spec;
    spec.seed          = cfg.seed;
    spec.count         = count;
    spec.d             = d;
    spec.K_lo          = K;
    spec.K_hi          = K;
    spec.matdim        = n;
    spec.boundary      = cfg.boundary;
    spec.generator     = cfg.generator;
    spec.signs         = cfg.signs;
    spec.lambda_policy = LambdaPolicy::l1_multiple;
    spec.lambda_value  = 1.0;
    return spec;
}

Instance make_one(const EnsembleSpec& spec, int d, int K, int n, int index) {
    Instance inst{d, K, n, index, make_instance(spec, index, K), make_signs(spec, index, K),
                  0.0};
    inst.lambda = lambda_for(spec, inst.f);
    return inst;
}

struct Block {
    int d, K, n, count;
};

} // namespace

std::vector<Instance> build_instances(const VerifyConfig& cfg, int d, int K, int n) {
    const EnsembleSpec    spec = block_spec(cfg, d, K, n, cfg.count);
    std::vector<Instance> out;
    out.reserve(static_cast<size_t>(cfg.count));
    for (int i = 0; i < cfg.count; ++i) out.push_back(make_one(spec, d, K, n, i));
    return out;
}

namespace {

// Ensemble shapes per claim family. The stopping-time suites run the full
// reference grid capped at K = 5; transform-ratio and decay claims keep d = 1
// up to K = 6 (where uniformity in K is asserted) and take a lighter d = 2
// slice, which is where the convolution cost lives.
std::vector<Block> blocks_for(const std::string& family, const VerifyConfig& cfg) {
    std::vector<Block> blocks;
    auto has_dim = [&](int d) {
        return std::find(cfg.dims.begin(), cfg.dims.end(), d) != cfg.dims.end();
    };
    for (int d : {1, 2}) {
        if (!has_dim(d)) continue;
        for (int K : cfg.Ks) {
            for (int n : cfg.ns) {
                if (family == "main") {
                    if (K <= 5) blocks.push_back({d, K, n, cfg.count});
                } else if (family == "ratio") {
                    if (d == 1)
                        blocks.push_back({d, K, n, cfg.count});
                    else if (K <= 4)
                        blocks.push_back({d, K, n, std::max(1, cfg.count / 2)});
                } else if (family == "decay" || family == "appb") {
                    if (d == 1)
                        blocks.push_back({d, K, n, std::max(1, cfg.count / 4)});
                    else if (K <= 4 && n <= 2)
                        blocks.push_back({d, K, n, std::max(1, cfg.count / 8)});
                } else if (family == "light") {
                    if ((d == 1 && K <= 5) || (d == 2 && K <= 3))
                        blocks.push_back({d, K, n, std::max(1, cfg.count / 4)});
                }
            }
        }
    }
    return blocks;
}

// Runs `body` over every instance of the listed blocks, in parallel, filling
// one record per instance; aggregation stays deterministic because records
// are indexed, then sorted.
template <class Body>
void for_instances(const VerifyConfig& cfg, const std::vector<Block>& blocks,
                   BoundReport& rep, Body&& body) {
    struct Task {
        Block block;
        int   index;
    };
    std::vector<Task> tasks;
    for (const auto& b : blocks)
        for (int i = 0; i < b.count; ++i) tasks.push_back({b, i});

    rep.records.assign(tasks.size(), RatioRecord{});
    std::vector<std::string> errors(tasks.size());

#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < static_cast<long>(tasks.size()); ++t) {
        const auto& task = tasks[static_cast<size_t>(t)];
        try {
            const EnsembleSpec spec = block_spec(cfg, task.block.d, task.block.K,
                                                 task.block.n, task.block.count);
            const Instance inst = make_one(spec, task.block.d, task.block.K,
                                           task.block.n, task.index);

            RatioRecord rec;
            rec.d     = inst.d;
            rec.K     = inst.K;
            rec.n     = inst.n;
            rec.index = inst.index;
            rec.value = body(inst, rec);
            rep.records[static_cast<size_t>(t)] = rec;
        } catch (const std::exception& e) {
            errors[static_cast<size_t>(t)] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error("claim instance failed: " + e);

    for (const auto& r : rep.records) {
        auto it = rep.max_by_K.find(r.K);
        if (it == rep.max_by_K.end())
            rep.max_by_K[r.K] = r.value;
        else
            it->second = std::max(it->second, r.value);
    }
}

double ceiling_for(const std::string& claim, const VerifyConfig& cfg) {
    auto o = cfg.tolerance_overrides.find(claim);
    if (o != cfg.tolerance_overrides.end()) return o->second;
    auto g = golden_ceilings().find(claim);
    if (g == golden_ceilings().end()) return kInf;
    return g->second;
}

LevelRange full_range(int K) { return {0, K}; }

SignSequence shifted_signs(const SignSequence& nu, int K) {
    // nu'_j = nu_{j+1}, used by the three-way split of D
    std::vector<double> c(static_cast<size_t>(K) + 1, 0.0);
    for (int j = 0; j + 1 <= K; ++j) c[static_cast<size_t>(j)] = nu.at(j + 1);
    return SignSequence(std::move(c));
}

// ---------------------------------------------------------------- claims --

BoundReport claim_cuculescu(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "cuculescu";
    int root_exceeds = 0;
    for_instances(cfg, blocks_for("main", cfg), rep,
                  [&](const Instance& inst, RatioRecord& rec) {
                      const auto fam = cuculescu(inst.f, inst.lambda);
                      const auto res = family_residuals(inst.f, fam);
                      if (!fam.start_level) {
#pragma omp atomic
                          ++root_exceeds;
                      }
                      const double margin_tol =
                          1e-12 * (1.0 + field_lp_norm(inst.f, 1.0) / inst.lambda);
                      if (res.maximal_margin > margin_tol) rec.pass = false;
                      return res.worst();
                  });
    rep.notes.push_back("root-exceeds instances: " + std::to_string(root_exceeds));
    rep.finalize(ceiling_for("cuculescu", cfg));
    return rep;
}

BoundReport claim_cz(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "cz";
    for_instances(cfg, blocks_for("main", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const auto dec = cz_decompose(inst.f, inst.lambda);
                      const int  sample = inst.d == 2 ? 48 : 0;
                      const auto c      = check_decomposition(dec, sample);

                      double bad = c.reconstruction_rel / 1e-9;
                      if (c.f_l1 > 0.0)
                          bad = std::max(bad, (c.g_l1 / c.f_l1 - 1.0) / 1e-9);
                      if (!c.root_exceeds)
                          bad = std::max(bad,
                                         (c.g_linf / c.good_linf_bound - 1.0) / 1e-9);
                      bad = std::max(bad, (c.phi_one_minus_zeta - c.zeta_bound) /
                                              (1e-12 * (1.0 + c.zeta_bound)));
                      bad = std::max(bad,
                                     c.family.maximal_margin /
                                         (1e-12 * (1.0 + c.f_l1 / dec.lambda)));
                      bad = std::max(bad, c.cancellation.cube_integral_residual / 1e-8);
                      bad = std::max(bad, c.cancellation.zeta_sandwich_residual / 1e-8);
                      bad = std::max(bad,
                                     c.cancellation.screened_transform_residual / 1e-8);
                      bad = std::max(bad,
                                     c.g_psd_violation / (1e-9 * (1.0 + c.g_linf)));
                      return bad;
                  });
    rep.notes.push_back("value = worst check scaled to its tolerance; 1.0 is the line");
    rep.finalize(ceiling_for("cz", cfg));
    return rep;
}

BoundReport claim_weak11(const VerifyConfig& cfg, bool differential) {
    BoundReport rep;
    rep.claim = differential ? "dt-weak11" : "weak11";
    for_instances(cfg, blocks_for("ratio", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const double l1 = field_lp_norm(inst.f, 1.0);
                      if (l1 <= 0.0) return 0.0;
                      const MatrixField out =
                          differential
                              ? differential_transform_D(inst.f, inst.nu, {1, inst.K})
                              : transform_T(inst.f, inst.nu, full_range(inst.K));
                      return field_weak_l1(out) / l1;
                  });
    rep.finalize(ceiling_for(rep.claim, cfg));
    return rep;
}

BoundReport claim_lp(const VerifyConfig& cfg, double p, bool differential) {
    char name[32];
    std::snprintf(name, sizeof name, "%slp-%g", differential ? "dt-" : "", p);
    BoundReport rep;
    rep.claim = name;
    for_instances(cfg, blocks_for("ratio", cfg), rep,
                  [&](const Instance& inst, RatioRecord& rec) {
                      const double fp = field_lp_norm(inst.f, p);
                      if (fp <= 0.0) return 0.0;
                      const MatrixField out =
                          differential
                              ? differential_transform_D(inst.f, inst.nu, {1, inst.K})
                              : transform_T(inst.f, inst.nu, full_range(inst.K));
                      const double ratio = field_lp_norm(out, p) / fp;
                      // p = 2 cross-check against the power-iteration estimate,
                      // on a fixed slice of each d = 1 block
                      if (!differential && p == 2.0 && inst.d == 1 && inst.index < 4) {
                          const DyadicGrid g1(1, inst.K, cfg.boundary, 1);
                          const double est = operator_norm_T(
                              g1, inst.nu, full_range(inst.K),
                              mix_seed({cfg.seed, 0x4f504eULL,
                                        static_cast<std::uint64_t>(inst.index)}));
                          if (ratio > est + 1e-6) rec.pass = false;
                      }
                      return ratio;
                  });
    rep.finalize(ceiling_for(rep.claim, cfg));
    return rep;
}

BoundReport claim_bmo(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "bmo";
    for_instances(cfg, blocks_for("ratio", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const double linf = field_lp_norm(inst.f, kInf);
                      if (linf <= 0.0) return 0.0;
                      const MatrixField tf =
                          transform_T(inst.f, inst.nu, full_range(inst.K));
                      const auto [row, col] = bmo_norm(tf);
                      return std::max(row, col) / linf;
                  });
    rep.finalize(ceiling_for("bmo", cfg));
    return rep;
}

// Kernel-regularity measurement behind the BMO estimate: for cubes Q and
// levels with 2^{-k} >= l(Q), the normalized increment of T applied to the
// far part of f between x in Q and the center of Q.
BoundReport claim_bmo_kernel(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "bmo-kernel";
    for_instances(cfg, blocks_for("ratio", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const auto&  g    = inst.f.grid();
                      const double linf = field_lp_norm(inst.f, kInf);
                      if (linf <= 0.0) return 0.0;
                      Rng rng(mix_seed({cfg.seed, 0xb30ULL,
                                        static_cast<std::uint64_t>(inst.index),
                                        static_cast<std::uint64_t>(inst.K)}));
                      double worst = 0.0;
                      for (int nq = 1; nq <= g.K; ++nq) {
                          for (int pick = 0; pick < 2; ++pick) {
                              const long cube = rng.uniform_int(
                                  0, static_cast<int>(g.cube_count(nq)) - 1);
                              // f2 = f outside 3Q
                              MatrixField f2 = inst.f;
                              Coord       qc = {0, 0};
                              if (g.d == 1) {
                                  qc[0] = static_cast<int>(cube);
                              } else {
                                  qc[0] = static_cast<int>(cube >> nq);
                                  qc[1] = static_cast<int>(cube & ((1L << nq) - 1));
                              }
                              const int cside = 1 << nq;
                              for (int d0 = -1; d0 <= 1; ++d0)
                                  for (int d1 = (g.d == 2 ? -1 : 0);
                                       d1 <= (g.d == 2 ? 1 : 0); ++d1) {
                                      Coord nb = {qc[0] + d0,
                                                  g.d == 2 ? qc[1] + d1 : 0};
                                      bool  ok = true;
                                      for (int a = 0; a < g.d; ++a) {
                                          if (cfg.boundary == Boundary::torus)
                                              nb[a] = ((nb[a] % cside) + cside) % cside;
                                          else if (nb[a] < 0 || nb[a] >= cside)
                                              ok = false;
                                      }
                                      if (!ok) continue;
                                      long nbc = nb[0];
                                      if (g.d == 2)
                                          nbc = (static_cast<long>(nb[0]) << nq) + nb[1];
                                      for (long cell : cube_cells(g, nq, nbc))
                                          f2.cell(cell).setZero();
                                  }

                              const auto qcells = cube_cells(g, nq, cube);
                              const long center = qcells[qcells.size() / 2];
                              const double ellq = std::ldexp(1.0, -nq);
                              for (int k = 0; k <= nq; ++k) {
                                  const BallStencil st = ball_stencil(g, k);
                                  const MatrixField ek = cond_expectation(f2, k);
                                  const Matrix ref = ball_average_at(f2, st, center) -
                                                     ek.cell(center);
                                  for (long x : qcells) {
                                      const Matrix fkq =
                                          inst.nu.at(k) *
                                          (ball_average_at(f2, st, x) - ek.cell(x) - ref);
                                      const double r =
                                          schatten_norm(fkq, kInf) /
                                          (std::ldexp(1.0, k) * ellq * linf);
                                      worst = std::max(worst, r);
                                  }
                              }
                          }
                      }
                      return worst;
                  });
    rep.finalize(ceiling_for("bmo-kernel", cfg));
    return rep;
}

BoundReport claim_dt_split(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "dt-split";
    for_instances(cfg, blocks_for("ratio", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const int   K  = inst.K;
                      MatrixField d  = differential_transform_D(inst.f, inst.nu, {1, K});
                      MatrixField t1 = transform_T(inst.f, inst.nu, {1, K});
                      MatrixField mt = martingale_transform(inst.f, inst.nu);
                      MatrixField t2 =
                          transform_T(inst.f, shifted_signs(inst.nu, K), {0, K - 1});
                      const double scale = 1.0 + field_lp_norm(inst.f, kInf);
                      return max_cell_distance(d, t1 + mt - t2) / scale;
                  });
    rep.finalize(ceiling_for("dt-split", cfg));
    return rep;
}

// (A.3)-(A.5): on the grid E_k dh_n equals dh_n exactly for k >= n and
// vanishes for k < n, so the single ratio below covers the combined bound and
// both one-sided cases at once; the per-(k,n) grid is the Carbery hypothesis
// pattern.
BoundReport claim_orth_decay(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "orth-decay";
    std::map<std::pair<int, int>, double> grid_max;
    for_instances(cfg, blocks_for("decay", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const int K = inst.K;
                      double    worst = 0.0;
                      for (int n = 1; n <= K; ++n) {
                          const MatrixField dh = martingale_difference(inst.f, n);
                          const double      dd = l2sq(dh);
                          if (dd <= 1e-24) continue;
                          for (int k = 0; k <= K; ++k) {
                              const MatrixField mk = ball_average(dh, k);
                              const MatrixField ek = cond_expectation(dh, k);
                              const double r = l2sq(mk - ek) *
                                               std::ldexp(1.0, std::abs(n - k)) / dd;
                              worst = std::max(worst, r);
#pragma omp critical(orthgrid)
                              {
                                  auto key = std::make_pair(k, n);
                                  auto it  = grid_max.find(key);
                                  if (it == grid_max.end())
                                      grid_max[key] = r;
                                  else
                                      it->second = std::max(it->second, r);
                              }
                          }
                      }
                      return worst;
                  });
    std::string grid = "composite-norm grid (k,n):ratio";
    for (const auto& [kn, v] : grid_max)
        grid += " (" + std::to_string(kn.first) + "," + std::to_string(kn.second) +
                "):" + fmt(v);
    rep.notes.push_back(grid);
    rep.finalize(ceiling_for("orth-decay", cfg));
    if (rep.k_variation() >= 2.0) {
        rep.pass = false;
        rep.notes.push_back("uniformity-in-K violated");
    }
    return rep;
}

BoundReport claim_trunc_decay(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "trunc-decay";
    for_instances(cfg, blocks_for("decay", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const int K = inst.K;
                      double    worst = 0.0;
                      for (double p : {1.0, 2.0, kInf}) {
                          const double up = field_lp_norm(inst.f, p);
                          if (up <= 0.0) continue;
                          for (int k = 0; k < K; ++k)
                              for (int n = k + 1; n <= K; ++n) {
                                  const MatrixField m = truncated_average(inst.f, k, n);
                                  worst = std::max(worst,
                                                   field_lp_norm(m, p) *
                                                       std::ldexp(1.0, n - k) / up);
                              }
                      }
                      return worst;
                  });
    rep.finalize(ceiling_for("trunc-decay", cfg));
    if (rep.k_variation() >= 2.0) {
        rep.pass = false;
        rep.notes.push_back("uniformity-in-K violated");
    }
    return rep;
}

BoundReport claim_opnorm(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "opnorm";
    const bool has_d1 =
        std::find(cfg.dims.begin(), cfg.dims.end(), 1) != cfg.dims.end();
    if (has_d1) {
        struct Task {
            int K, seq;
        };
        std::vector<Task> tasks;
        for (int K : cfg.Ks)
            for (int seq = 0; seq < 9; ++seq) tasks.push_back({K, seq});
        rep.records.assign(tasks.size(), RatioRecord{});

#pragma omp parallel for schedule(dynamic)
        for (long t = 0; t < static_cast<long>(tasks.size()); ++t) {
            const auto [K, seq] = tasks[static_cast<size_t>(t)];
            SignSequence nu     = SignSequence::ones(K);
            if (seq > 0) {
                Rng rng(mix_seed({cfg.seed, 0x515ULL, static_cast<std::uint64_t>(seq),
                                  static_cast<std::uint64_t>(K)}));
                std::vector<double> c(static_cast<size_t>(K) + 1);
                for (auto& v : c) v = rng.uniform() < 0.5 ? -1.0 : 1.0;
                nu = SignSequence(std::move(c));
            }
            const DyadicGrid g(1, K, cfg.boundary, 1);
            RatioRecord      rec;
            rec.d     = 1;
            rec.K     = K;
            rec.n     = 1;
            rec.index = seq;
            rec.value = operator_norm_T(g, nu, {0, K},
                                        mix_seed({cfg.seed, 0x9e37ULL,
                                                  static_cast<std::uint64_t>(seq)}));
            rep.records[static_cast<size_t>(t)] = rec;
        }
        for (const auto& r : rep.records) {
            auto it = rep.max_by_K.find(r.K);
            if (it == rep.max_by_K.end())
                rep.max_by_K[r.K] = r.value;
            else
                it->second = std::max(it->second, r.value);
        }
    }
    rep.finalize(ceiling_for("opnorm", cfg));
    if (rep.k_variation() >= 2.0) {
        rep.pass = false;
        rep.notes.push_back("uniformity-in-K violated");
    }
    return rep;
}

BoundReport claim_badpart(const VerifyConfig& cfg, bool lemma34) {
    BoundReport rep;
    rep.claim = lemma34 ? "badpart-lemma34" : "badpart-total";
    for_instances(cfg, blocks_for("light", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const auto   dec = cz_decompose(inst.f, inst.lambda);
                      const int    K   = inst.K;
                      const double l1  = field_lp_norm(inst.f, 1.0);
                      if (l1 <= 0.0) return 0.0;
                      double total = 0.0, worst_n = 0.0;
                      for (int n = 1; n <= K; ++n) {
                          const MatrixField bn   = dec.b_part(n);
                          double            sum_n = 0.0;
                          for (int k = 0; k < n; ++k)
                              sum_n += field_lp_norm(ball_average(bn, k), 1.0);
                          total += sum_n;
                          const double phi_pn = tensor_trace_re(dec.family.p[n]);
                          if (phi_pn > 1e-14) {
                              const double phi_fpn = tensor_trace_re(
                                  cellwise_product(inst.f, dec.family.p[n]));
                              const double rhs =
                                  std::sqrt(inst.lambda * phi_pn) *
                                  std::sqrt(std::max(phi_fpn, 0.0));
                              if (rhs > 0.0)
                                  worst_n = std::max(worst_n, sum_n / rhs);
                          }
                      }
                      return lemma34 ? worst_n : total / l1;
                  });
    rep.finalize(ceiling_for(rep.claim, cfg));
    return rep;
}

BoundReport claim_goodpart(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "goodpart-chain";
    for_instances(cfg, blocks_for("light", cfg), rep,
                  [&](const Instance& inst, RatioRecord& rec) {
                      const auto   dec = cz_decompose(inst.f, inst.lambda);
                      const double l1  = field_lp_norm(inst.f, 1.0);
                      if (l1 <= 0.0) return 0.0;
                      // exact link of the chain: ||g||_2^2 <= ||g||_1 ||g||_inf
                      const double g2  = l2sq(dec.g);
                      const double gli = field_lp_norm(dec.g, kInf);
                      const double gl1 = field_lp_norm(dec.g, 1.0);
                      if (g2 > gl1 * gli * (1.0 + 1e-9) + 1e-12) rec.pass = false;
                      const MatrixField tg =
                          transform_T(dec.g, inst.nu, full_range(inst.K));
                      return inst.lambda *
                             field_distribution(tg, inst.lambda / 2.0) / l1;
                  });
    rep.notes.push_back("per-record pass includes the exact norm interpolation link");
    rep.finalize(ceiling_for("goodpart-chain", cfg));
    return rep;
}

BoundReport claim_appb_identity(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "appb-identity";
    for_instances(cfg, blocks_for("appb", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const auto dec   = cz_decompose(inst.f, inst.lambda);
                      const auto split = diag_offdiag_split(dec);
                      const int  K     = inst.K;
                      const double scale = 1.0 + field_lp_norm(inst.f, kInf);
                      double       worst = 0.0;
                      for (int n = 1; n <= K; ++n)
                          for (int j = 0; n + j <= K; ++j) {
                              const int          m  = n + j;
                              const MatrixField& bd = split.diag[static_cast<size_t>(m)];
                              const MatrixField  lhs = ball_average(bd, j);
                              const MatrixField  rhs = truncated_average(bd, j, m);
                              worst = std::max(worst,
                                               max_cell_distance(lhs, rhs) / scale);
                          }
                      return worst;
                  });
    rep.finalize(ceiling_for("appb-identity", cfg));
    return rep;
}

BoundReport claim_appb_domination(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "appb-domination";
    for_instances(cfg, blocks_for("appb", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const auto fam = cuculescu(inst.f, inst.lambda);
                      const int  K   = inst.K;
                      double     worst = 0.0;
                      for (int n = 1; n <= K; ++n)
                          for (int j = 0; n + j <= K; ++j) {
                              const int         m  = n + j;
                              const MatrixField fm = cond_expectation(inst.f, m);
                              const MatrixField pfmp = cellwise_product(
                                  cellwise_product(fam.p[m], fm), fam.p[m]);
                              const MatrixField pfp = cellwise_product(
                                  cellwise_product(fam.p[m], inst.f), fam.p[m]);
                              const MatrixField dom = tilde_average(pfmp, j, m);
                              for (const MatrixField* u : {&pfmp, &pfp}) {
                                  const MatrixField tru = truncated_average(*u, j, m);
                                  for (long i = 0; i < tru.cell_count(); ++i)
                                      worst = std::max(
                                          worst,
                                          loewner_violation(tru.cell(i), dom.cell(i)) /
                                              inst.lambda);
                              }
                          }
                      return worst;
                  });
    rep.finalize(ceiling_for("appb-domination", cfg));
    return rep;
}

// Uniformity for the two Appendix-B bound measurements is asserted per n
// ACROSS K: the measured 2^n-scaled quantity carries a genuine extra decay in
// n (summing over fewer levels cannot produce a larger value, so a constant
// per-instance profile in n is impossible), while its stability in K at each
// fixed n is exactly the truncation-independence the bound's constant needs.
void check_n_uniformity(BoundReport& rep,
                        const std::map<std::array<int, 3>, double>& by_dnK) {
    // key = (d, n, K); the constant may depend on d, so K-ranges are compared
    // within one dimension at a time
    std::map<std::pair<int, int>, std::pair<double, double>> range;
    std::string note = "per-(d,n,K) maxima:";
    for (const auto& [dnk, v] : by_dnK) {
        note += " (" + std::to_string(dnk[0]) + "," + std::to_string(dnk[1]) + "," +
                std::to_string(dnk[2]) + "):" + fmt(v);
        if (v <= 1e-12) continue;
        auto key = std::make_pair(dnk[0], dnk[1]);
        auto it  = range.find(key);
        if (it == range.end())
            range[key] = {v, v};
        else {
            it->second.first  = std::min(it->second.first, v);
            it->second.second = std::max(it->second.second, v);
        }
    }
    rep.notes.push_back(note);
    for (const auto& [dn, mm] : range) {
        // the gate needs the four-point K range, which this grid family only
        // reaches at d = 1; the d = 2 slices stay as reported data
        if (dn.first != 1) continue;
        if (mm.second / mm.first >= 2.0) {
            rep.pass = false;
            rep.notes.push_back("uniformity-in-K violated at d=" +
                                std::to_string(dn.first) + " n=" +
                                std::to_string(dn.second));
        }
    }
}

BoundReport claim_appb_b3(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "appb-b3";
    std::map<std::array<int, 3>, double> by_dnK;
    for_instances(cfg, blocks_for("appb", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const auto   dec   = cz_decompose(inst.f, inst.lambda);
                      const auto   split = diag_offdiag_split(dec);
                      const int    K     = inst.K;
                      const double l1    = field_lp_norm(inst.f, 1.0);
                      if (l1 <= 0.0) return 0.0;
                      double worst = 0.0;
                      for (int n = 1; n <= K; ++n) {
                          MatrixField sum(inst.f.grid());
                          for (int j = 0; n + j <= K; ++j)
                              sum += ball_average(split.diag[static_cast<size_t>(n + j)], j);
                          const double v =
                              l2sq(sum) * std::ldexp(1.0, n) / (inst.lambda * l1);
                          worst = std::max(worst, v);
#pragma omp critical(appb3)
                          {
                              const std::array<int, 3> key{inst.d, n, K};
                              auto it = by_dnK.find(key);
                              if (it == by_dnK.end())
                                  by_dnK[key] = v;
                              else
                                  it->second = std::max(it->second, v);
                          }
                      }
                      return worst;
                  });
    rep.finalize(ceiling_for("appb-b3", cfg));
    check_n_uniformity(rep, by_dnK);
    return rep;
}

BoundReport claim_appb_kernel(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "appb-kernel";
    std::map<std::array<int, 3>, double> by_dnK;
    for_instances(
        cfg, blocks_for("appb", cfg), rep,
        [&](const Instance& inst, RatioRecord&) {
            const auto  fam = cuculescu(inst.f, inst.lambda);
            const auto& g   = inst.f.grid();
            const int   K   = inst.K;
            Rng sample_rng(mix_seed({cfg.seed, 0xce11ULL,
                                     static_cast<std::uint64_t>(inst.index)}));
            std::vector<long> sample;
            const int want = std::min<long>(g.cell_count(), 32);
            for (int s = 0; s < want; ++s)
                sample.push_back(
                    sample_rng.uniform_int(0, static_cast<int>(g.cell_count()) - 1));

            double worst = 0.0;
            for (int n = 1; n <= K; ++n) {
                double vmax_n = 0.0;
                // suffix sums of inner smoothed averages: sum_{i >= j} Mt_{i,n+i} p_{n+i}
                MatrixField suffix(g);
                for (int j = K - n; j >= 0; --j) {
                    suffix += tilde_average(fam.p[static_cast<size_t>(n + j)], j, n + j);
                    const BallStencil        ball    = ball_stencil(g, j);
                    const std::vector<Coord> annulus = annulus_stencil(g, j, n + j);
                    for (long x : sample) {
                        const Matrix m = tilde_average_at(suffix, ball, annulus, x);
                        vmax_n = std::max(vmax_n, schatten_norm(m, kInf));
                    }
                }
                const double v = vmax_n * std::ldexp(1.0, n);
                worst          = std::max(worst, v);
#pragma omp critical(appbkernel)
                {
                    const std::array<int, 3> key{inst.d, n, K};
                    auto it = by_dnK.find(key);
                    if (it == by_dnK.end())
                        by_dnK[key] = v;
                    else
                        it->second = std::max(it->second, v);
                }
            }
            return worst;
        });
    rep.finalize(ceiling_for("appb-kernel", cfg));
    check_n_uniformity(rep, by_dnK);
    return rep;
}

BoundReport claim_scale_covariance(const VerifyConfig& cfg) {
    BoundReport rep;
    rep.claim = "scale-covariance";
    for_instances(cfg, blocks_for("light", cfg), rep,
                  [&](const Instance& inst, RatioRecord&) {
                      const double c    = 3.7;
                      const auto   fam1 = cuculescu(inst.f, inst.lambda);
                      MatrixField  cf   = inst.f;
                      cf *= Complex(c);
                      const auto fam2 = cuculescu(cf, c * inst.lambda);
                      double     worst = 0.0;
                      for (int k = 0; k <= inst.K; ++k)
                          worst = std::max(worst,
                                           max_cell_distance(fam1.q[k], fam2.q[k]));
                      const MatrixField t1 =
                          transform_T(inst.f, inst.nu, full_range(inst.K));
                      const MatrixField t2 = transform_T(cf, inst.nu, full_range(inst.K));
                      const double l1 = field_lp_norm(inst.f, 1.0);
                      if (l1 > 0.0) {
                          const double r1 = field_weak_l1(t1) / l1;
                          const double r2 = field_weak_l1(t2) / (c * l1);
                          worst = std::max(worst, std::abs(r1 - r2) / (1.0 + r1));
                      }
                      return worst;
                  });
    rep.finalize(ceiling_for("scale-covariance", cfg));
    return rep;
}

} // namespace

std::pair<double, double> bmo_norm(const MatrixField& f) {
    const auto& g   = f.grid();
    double      row = 0.0, col = 0.0;
    for (int k = 0; k <= g.K; ++k) {
        const long cubes = g.cube_count(k);
        for (long q = 0; q < cubes; ++q) {
            const auto cells = cube_cells(g, k, q);
            Matrix     mean  = Matrix::Zero(g.matdim, g.matdim);
            for (long cc : cells) mean += f.cell(cc);
            mean /= static_cast<double>(cells.size());
            Matrix sr = Matrix::Zero(g.matdim, g.matdim);
            Matrix sc = Matrix::Zero(g.matdim, g.matdim);
            for (long cc : cells) {
                const Matrix z = f.cell(cc) - mean;
                sr += z * z.adjoint(); // |z*|^2
                sc += z.adjoint() * z; // |z|^2
            }
            sr /= static_cast<double>(cells.size());
            sc /= static_cast<double>(cells.size());
            row = std::max(row, std::sqrt(schatten_norm(sr, kInf)));
            col = std::max(col, std::sqrt(schatten_norm(sc, kInf)));
        }
    }
    return {row, col};
}

const std::vector<std::string>& all_claim_names() {
    static const std::vector<std::string> names = {
        "cuculescu",    "cz",           "weak11",       "lp-1.5",
        "lp-2",         "lp-3",         "lp-4",         "bmo",
        "bmo-kernel",   "dt-weak11",    "dt-lp-1.5",    "dt-lp-2",
        "dt-lp-3",      "dt-lp-4",      "dt-split",     "orth-decay",
        "trunc-decay",  "opnorm",       "badpart-total", "badpart-lemma34",
        "goodpart-chain", "appb-identity", "appb-domination", "appb-b3",
        "appb-kernel",  "scale-covariance",
    };
    return names;
}

bool is_claim_name(const std::string& name) {
    const auto& all = all_claim_names();
    return std::find(all.begin(), all.end(), name) != all.end();
}

BoundReport run_claim(const std::string& name, const VerifyConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    BoundReport rep;
    if (name == "cuculescu") rep = claim_cuculescu(cfg);
    else if (name == "cz") rep = claim_cz(cfg);
    else if (name == "weak11") rep = claim_weak11(cfg, false);
    else if (name == "dt-weak11") rep = claim_weak11(cfg, true);
    else if (name == "lp-1.5") rep = claim_lp(cfg, 1.5, false);
    else if (name == "lp-2") rep = claim_lp(cfg, 2.0, false);
    else if (name == "lp-3") rep = claim_lp(cfg, 3.0, false);
    else if (name == "lp-4") rep = claim_lp(cfg, 4.0, false);
    else if (name == "dt-lp-1.5") rep = claim_lp(cfg, 1.5, true);
    else if (name == "dt-lp-2") rep = claim_lp(cfg, 2.0, true);
    else if (name == "dt-lp-3") rep = claim_lp(cfg, 3.0, true);
    else if (name == "dt-lp-4") rep = claim_lp(cfg, 4.0, true);
    else if (name == "bmo") rep = claim_bmo(cfg);
    else if (name == "bmo-kernel") rep = claim_bmo_kernel(cfg);
    else if (name == "dt-split") rep = claim_dt_split(cfg);
    else if (name == "orth-decay") rep = claim_orth_decay(cfg);
    else if (name == "trunc-decay") rep = claim_trunc_decay(cfg);
    else if (name == "opnorm") rep = claim_opnorm(cfg);
    else if (name == "badpart-total") rep = claim_badpart(cfg, false);
    else if (name == "badpart-lemma34") rep = claim_badpart(cfg, true);
    else if (name == "goodpart-chain") rep = claim_goodpart(cfg);
    else if (name == "appb-identity") rep = claim_appb_identity(cfg);
    else if (name == "appb-domination") rep = claim_appb_domination(cfg);
    else if (name == "appb-b3") rep = claim_appb_b3(cfg);
    else if (name == "appb-kernel") rep = claim_appb_kernel(cfg);
    else if (name == "scale-covariance") rep = claim_scale_covariance(cfg);
    else throw InvalidConfig("unknown claim: " + name);

    rep.runtime_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

VerifyResult run_verify(const VerifyConfig& cfg) {
    std::vector<std::string> selected = cfg.claims;
    if (selected.empty()) selected = all_claim_names();
    for (const auto& c : selected)
        if (!is_claim_name(c)) throw InvalidConfig("unknown claim: " + c);

    VerifyResult result;
    for (const auto& name : selected) {
        result.reports.push_back(run_claim(name, cfg));
        result.all_pass = result.all_pass && result.reports.back().pass;
    }

    std::string body;
    body += "config " + cfg.echo() + "\n";
    body += "---- body ----\n";
    std::string csv = "claim,d,K,n,index,value,pass\n";
    for (const auto& rep : result.reports) {
        body += "claim " + rep.claim + " ceiling " + fmt(rep.ceiling) + " max " +
                fmt(rep.max_value) + " mean " + fmt(rep.mean_value) + " records " +
                std::to_string(rep.records.size()) + " pass " +
                (rep.pass ? "1" : "0") + "\n";
        for (const auto& note : rep.notes) body += "note " + rep.claim + " " + note + "\n";
        for (const auto& r : rep.records) {
            body += "record " + rep.claim + " d=" + std::to_string(r.d) +
                    " K=" + std::to_string(r.K) + " n=" + std::to_string(r.n) +
                    " i=" + std::to_string(r.index) + " value " + fmt(r.value) +
                    " pass " + (r.pass ? "1" : "0") + "\n";
            csv += rep.claim + "," + std::to_string(r.d) + "," + std::to_string(r.K) +
                   "," + std::to_string(r.n) + "," + std::to_string(r.index) + "," +
                   fmt(r.value) + "," + (r.pass ? "1" : "0") + "\n";
        }
    }
    body += "---- summary ----\n";
    int failed = 0;
    for (const auto& rep : result.reports)
        if (!rep.pass) ++failed;
    body += "claims " + std::to_string(result.reports.size()) + " failed " +
            std::to_string(failed) + "\n";
    body += std::string("overall ") + (result.all_pass ? "PASS" : "FAIL") + "\n";

    char hashbuf[32];
    std::snprintf(hashbuf, sizeof hashbuf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(cfg.echo())));
    result.report_text =
        "# nclab verify report\n# config-hash: " + std::string(hashbuf) + "\n" + body;
    result.table_csv = csv;
    return result;
}

} // namespace nclab
