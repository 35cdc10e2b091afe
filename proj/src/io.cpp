#include "nclab/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "nclab/ensemble.hpp"
#include "nclab/errors.hpp"

namespace nclab {

namespace {

constexpr char     kMagic[4] = {'N', 'C', 'L', 'F'};
constexpr uint32_t kVersion  = 1;

void put_u32(std::string& buf, uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& buf, double d) {
    uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(buf, bits);
}

struct Reader {
    const std::string& buf;
    size_t             pos = 0;

    void need(size_t n) {
        if (pos + n > buf.size()) throw IoError("field container truncated");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    double f64() {
        uint64_t bits = u64();
        double   d;
        std::memcpy(&d, &bits, 8);
        return d;
    }
};

void write_atomic(const std::string& path, const std::string& data) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw IoError("short write: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path + " (" + ec.message() + ")");
}

} // namespace

void save_field(const MatrixField& f, const std::string& path) {
    const auto& g = f.grid();
    std::string buf;
    buf.reserve(40 + static_cast<size_t>(f.cell_count()) * g.matdim * g.matdim * 16);
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<uint32_t>(g.d));
    put_u32(buf, static_cast<uint32_t>(g.K));
    put_u32(buf, static_cast<uint32_t>(g.matdim));
    put_u32(buf, g.boundary == Boundary::torus ? 0u : 1u);
    put_u64(buf, static_cast<uint64_t>(f.cell_count()));
    for (long i = 0; i < f.cell_count(); ++i)
        for (int r = 0; r < g.matdim; ++r)
            for (int c = 0; c < g.matdim; ++c) {
                put_f64(buf, f.cell(i)(r, c).real());
                put_f64(buf, f.cell(i)(r, c).imag());
            }
    write_atomic(path, buf);
}

MatrixField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
        throw IoError("not a field container: " + path);

    Reader r{buf, 4};
    if (r.u32() != kVersion) throw IoError("unsupported container version: " + path);
    const int d       = static_cast<int>(r.u32());
    const int K       = static_cast<int>(r.u32());
    const int matdim  = static_cast<int>(r.u32());
    const uint32_t bm = r.u32();
    if (bm > 1) throw IoError("bad boundary flag: " + path);

    DyadicGrid g;
    try {
        g = DyadicGrid(d, K, bm == 0 ? Boundary::torus : Boundary::zero, matdim);
    } catch (const InvalidConfig& e) {
        throw IoError(std::string("invalid grid in container: ") + e.what());
    }
    const uint64_t cells = r.u64();
    if (cells != static_cast<uint64_t>(g.cell_count()))
        throw IoError("cell count mismatch: " + path);

    MatrixField f(g);
    for (long i = 0; i < f.cell_count(); ++i)
        for (int rr = 0; rr < matdim; ++rr)
            for (int cc = 0; cc < matdim; ++cc) {
                const double re = r.f64();
                const double im = r.f64();
                f.cell(i)(rr, cc) = Complex(re, im);
            }
    return f;
}

std::string save_decomposition(const CZDecomposition& dec, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + dir);

    auto path = [&](const std::string& name) { return dir + "/" + name + ".nclf"; };

    std::vector<std::string> files;
    auto dump = [&](const MatrixField& f, const std::string& name) {
        save_field(f, path(name));
        files.push_back(name + ".nclf");
    };

    dump(dec.f, "f");
    dump(dec.g, "g");
    dump(dec.screen, "zeta");
    char name[32];
    for (size_t n = 0; n < dec.b_left.size(); ++n) {
        std::snprintf(name, sizeof name, "b_%03zu", n);
        dump(dec.b_part(static_cast<int>(n)), name);
    }
    for (size_t k = 0; k < dec.family.q.size(); ++k) {
        std::snprintf(name, sizeof name, "q_%03zu", k);
        dump(dec.family.q[k], name);
        std::snprintf(name, sizeof name, "p_%03zu", k);
        dump(dec.family.p[k], name);
    }

    const DecompositionChecks checks = check_decomposition(dec);
    const auto& g = dec.f.grid();

    nlohmann::json m;
    m["format"]   = "nclab-decomposition";
    m["lambda"]   = dec.lambda;
    m["d"]        = g.d;
    m["K"]        = g.K;
    m["matdim"]   = g.matdim;
    m["boundary"] = to_string(g.boundary);
    m["m_lambda"] =
        dec.family.start_level ? nlohmann::json(*dec.family.start_level)
                               : nlohmann::json("root-exceeds");
    m["files"] = files;

    nlohmann::json res;
    res["family_monotone"]       = checks.family.monotone;
    res["family_measurable"]     = checks.family.measurable;
    res["family_commutator"]     = checks.family.commutator;
    res["family_compression"]    = checks.family.compression;
    res["family_partition"]      = checks.family.partition;
    res["family_level_bound"]    = checks.family.level_bound;
    res["family_projection"]     = checks.family.projection;
    res["reconstruction_rel"]    = checks.reconstruction_rel;
    res["cancel_cube_integral"]  = checks.cancellation.cube_integral_residual;
    res["cancel_zeta_sandwich"]  = checks.cancellation.zeta_sandwich_residual;
    res["cancel_screened"]       = checks.cancellation.screened_transform_residual;
    res["g_psd_violation"]       = checks.g_psd_violation;
    m["residuals"]               = res;

    nlohmann::json bounds;
    bounds["phi_one_minus_q"]   = checks.phi_one_minus_q;
    bounds["maximal_rhs"]       = checks.f_l1 / dec.lambda;
    bounds["maximal_pass"]      = checks.phi_one_minus_q <=
                             checks.f_l1 / dec.lambda * (1.0 + 1e-12) + 1e-12;
    bounds["phi_one_minus_zeta"] = checks.phi_one_minus_zeta;
    bounds["zeta_rhs"]           = checks.zeta_bound;
    bounds["zeta_pass"] = checks.phi_one_minus_zeta <=
                          checks.zeta_bound * (1.0 + 1e-12) + 1e-12;
    bounds["g_l1"]        = checks.g_l1;
    bounds["f_l1"]        = checks.f_l1;
    bounds["g_l1_pass"]   = checks.g_l1 <= checks.f_l1 * (1.0 + 1e-9);
    bounds["g_linf"]      = checks.g_linf;
    bounds["g_linf_rhs"]  = checks.good_linf_bound;
    bounds["g_linf_pass"] = checks.root_exceeds ||
                            checks.g_linf <= checks.good_linf_bound * (1.0 + 1e-9);
    m["bounds"] = bounds;

    const std::string text = m.dump(2) + "\n";
    write_atomic(dir + "/manifest.json", text);
    return text;
}

} // namespace nclab
