// nclab — command-line front end: instance generation, decomposition runs,
// claim-suite execution and report emission.
//
// Exit codes: 0 pass, 1 claim failure, 2 usage/config error, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nclab/ensemble.hpp"
#include "nclab/errors.hpp"
#include "nclab/io.hpp"
#include "nclab/transforms.hpp"
#include "nclab/verify.hpp"

namespace {

using namespace nclab;

struct CommonFlags {
    std::uint64_t seed  = 0x5eedULL;
    int           count = 32;
    std::vector<int> dims{1, 2};
    std::vector<int> Ks{3, 4, 5, 6};
    int              matdim = 2;
    std::string      boundary = "torus";
    std::string      generator = "mixed";
    std::string      signs = "pm-random";
    std::string      out = "out";
};

Boundary parse_boundary(const std::string& s) {
    if (s == "torus") return Boundary::torus;
    if (s == "zero") return Boundary::zero;
    throw InvalidConfig("boundary must be 'torus' or 'zero'");
}

Generator parse_generator(const std::string& s) {
    if (s == "random-psd") return Generator::random_psd;
    if (s == "sparse-spike") return Generator::sparse_spike;
    if (s == "smooth-plus-spike") return Generator::smooth_plus_spike;
    if (s == "scalar") return Generator::scalar;
    if (s == "mixed") return Generator::mixed;
    throw InvalidConfig("unknown generator: " + s);
}

SignPolicy parse_signs(const std::string& s) {
    if (s == "all-ones") return SignPolicy::all_ones;
    if (s == "pm-random") return SignPolicy::pm_random;
    if (s == "uniform-random") return SignPolicy::uniform_random;
    throw InvalidConfig("unknown sign policy: " + s);
}

std::map<std::string, double> parse_overrides(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig("--tolerance expects name=value, got: " + kv);
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    std::ofstream     f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + tmp);
    f << text;
    f.close();
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path);
}

int cmd_gen(const CommonFlags& flags) {
    std::filesystem::create_directories(flags.out);
    EnsembleSpec spec;
    spec.seed      = flags.seed;
    spec.count     = flags.count;
    spec.d         = flags.dims.at(0);
    spec.K_lo = spec.K_hi = flags.Ks.at(0);
    spec.matdim    = flags.matdim;
    spec.boundary  = parse_boundary(flags.boundary);
    spec.generator = parse_generator(flags.generator);

    for (int i = 0; i < flags.count; ++i) {
        const MatrixField f = make_instance(spec, i, spec.K_lo);
        char              name[64];
        std::snprintf(name, sizeof name, "%s/instance_%04d.nclf", flags.out.c_str(), i);
        save_field(f, name);
        std::cout << name << "\n";
    }
    return 0;
}

int cmd_decompose(const std::string& input, double lambda, const std::string& out) {
    const MatrixField f = load_field(input);
    const auto        dec = cz_decompose(f, lambda);
    const std::string manifest = save_decomposition(dec, out);
    std::cout << manifest;
    return 0;
}

int cmd_transform(const std::string& input, const std::string& op,
                  const std::string& signs, std::uint64_t seed,
                  const std::string& out) {
    const MatrixField f = load_field(input);
    const int         K = f.grid().K;

    SignSequence nu = SignSequence::ones(K);
    if (signs == "pm-random" || signs == "uniform-random") {
        EnsembleSpec spec;
        spec.seed  = seed;
        spec.signs = parse_signs(signs);
        nu         = make_signs(spec, 0, K);
    } else if (signs != "all-ones") {
        throw InvalidConfig("unknown sign policy: " + signs);
    }

    MatrixField result;
    if (op == "T") result = transform_T(f, nu, {0, K});
    else if (op == "D") result = differential_transform_D(f, nu, {1, K});
    else if (op == "square") result = square_function(f, {0, K});
    else if (op == "martingale") result = martingale_transform(f, nu);
    else throw InvalidConfig("unknown transform op: " + op + " (T, D, square, martingale)");

    save_field(result, out);
    std::cout << out << "\n";
    return 0;
}

int cmd_verify(const CommonFlags& flags, const std::vector<std::string>& claims,
               const std::vector<std::string>& tolerances, const std::vector<int>& ns) {
    VerifyConfig cfg;
    cfg.seed      = flags.seed;
    cfg.count     = flags.count;
    cfg.dims      = flags.dims;
    cfg.Ks        = flags.Ks;
    cfg.ns        = ns;
    cfg.boundary  = parse_boundary(flags.boundary);
    cfg.generator = parse_generator(flags.generator);
    cfg.signs     = parse_signs(flags.signs);
    cfg.claims    = claims;
    cfg.tolerance_overrides = parse_overrides(tolerances);

    const VerifyResult result = run_verify(cfg);

    std::filesystem::create_directories(flags.out);
    write_text(flags.out + "/report.txt", result.report_text);
    write_text(flags.out + "/table.csv", result.table_csv);

    for (const auto& rep : result.reports)
        std::fprintf(stderr, "%-18s max %-12.5g ceiling %-12.5g %s (%.2fs)\n",
                     rep.claim.c_str(), rep.max_value, rep.ceiling,
                     rep.pass ? "pass" : "FAIL", rep.runtime_sec);
    std::cout << (result.all_pass ? "PASS" : "FAIL") << " report=" << flags.out
              << "/report.txt table=" << flags.out << "/table.csv\n";
    return result.all_pass ? 0 : 1;
}

int cmd_report(const std::string& table) {
    std::ifstream in(table);
    if (!in) throw IoError("cannot open: " + table);
    std::string header;
    std::getline(in, header);
    std::map<std::string, std::pair<double, int>> agg; // claim -> (max, fails)
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream        ss(line);
        std::string              tok;
        std::vector<std::string> cols;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
        if (cols.size() != 7) continue;
        auto& slot  = agg[cols[0]];
        slot.first  = std::max(slot.first, std::stod(cols[5]));
        slot.second += cols[6] == "1" ? 0 : 1;
    }
    bool all_pass = true;
    for (const auto& [claim, mv] : agg) {
        std::printf("%-18s max %-12.5g fails %d\n", claim.c_str(), mv.first, mv.second);
        all_pass = all_pass && mv.second == 0;
    }
    std::printf("overall %s\n", all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nclab: dyadic-grid laboratory for noncommutative averaging transforms"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", flags.seed, "master seed");
        sub->add_option("--count", flags.count, "instances per block");
        sub->add_option("--dim", flags.dims, "spatial dimensions (1 2)");
        sub->add_option("--levels", flags.Ks, "finest levels K");
        sub->add_option("--matdim", flags.matdim, "matrix dimension n");
        sub->add_option("--boundary", flags.boundary, "torus | zero");
        sub->add_option("--generator", flags.generator,
                        "random-psd | sparse-spike | smooth-plus-spike | scalar | mixed");
        sub->add_option("--out", flags.out, "output directory");
    };

    auto* gen = app.add_subcommand("gen", "write deterministic ensemble instances");
    add_common(gen);

    auto*       dec = app.add_subcommand("decompose", "run the CZ decomposition on a field");
    std::string dec_in;
    double      dec_lambda = 1.0;
    dec->add_option("--in", dec_in, "input field container")->required();
    dec->add_option("--lambda", dec_lambda, "threshold lambda")->required();
    dec->add_option("--out", flags.out, "output directory");

    auto*       tr = app.add_subcommand("transform", "apply T/D/square/martingale to a field");
    std::string tr_in, tr_op = "T", tr_out = "out.nclf";
    tr->add_option("--in", tr_in, "input field container")->required();
    tr->add_option("--op", tr_op, "T | D | square | martingale");
    tr->add_option("--signs", flags.signs, "all-ones | pm-random | uniform-random");
    tr->add_option("--seed", flags.seed, "seed for random signs");
    tr->add_option("--out", tr_out, "output field path");

    auto*                    verify = app.add_subcommand("verify", "run the claim suites");
    std::vector<std::string> claims, tolerances;
    std::vector<int>         ns{1, 2, 4};
    add_common(verify);
    verify->add_option("--claims", claims, "claim subset (default: all)");
    verify->add_option("--tolerance", tolerances, "ceiling overrides name=value");
    verify->add_option("--matdims", ns, "matrix dimensions to sweep");
    verify->add_option("--signs", flags.signs, "all-ones | pm-random | uniform-random");

    auto*       report = app.add_subcommand("report", "summarize a table.csv");
    std::string report_table;
    report->add_option("--table", report_table, "table.csv path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(flags);
        if (dec->parsed()) return cmd_decompose(dec_in, dec_lambda, flags.out);
        if (tr->parsed())
            return cmd_transform(tr_in, tr_op, flags.signs, flags.seed, tr_out);
        if (verify->parsed()) return cmd_verify(flags, claims, tolerances, ns);
        if (report->parsed()) return cmd_report(report_table);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
