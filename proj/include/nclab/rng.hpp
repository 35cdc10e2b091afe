#pragma once

/*
 * rng.hpp — deterministic random source for instance generation.
 *
 * xoshiro256++ seeded through splitmix64, with uniform doubles taken from the
 * top 53 bits and gaussians via Box-Muller. Self-contained so that streams
 * are identical across standard libraries and platforms; reports and golden
 * ceilings depend on that.
 */

#include <cmath>
#include <cstdint>

#include "nclab/matrix.hpp"

namespace nclab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable 64-bit mix of an arbitrary key list, used to derive per-instance seeds.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t k : keys) {
        h ^= k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        std::uint64_t s = h;
        h = splitmix64(s);
    }
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t      = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) { // inclusive ends
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double gauss() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r  = std::sqrt(-2.0 * std::log(u1));
        const double a  = 2.0 * 3.14159265358979323846 * u2;
        cached_         = r * std::sin(a);
        have_cached_    = true;
        return r * std::cos(a);
    }

    Complex cgauss() {
        const double re = gauss();
        const double im = gauss();
        return {re * 0.7071067811865476, im * 0.7071067811865476};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4] = {};
    bool          have_cached_ = false;
    double        cached_      = 0.0;
};

} // namespace nclab
