#pragma once

#include <cmath>
#include <cstdint>

namespace localint {

// Counter-based RNG used everywhere randomness is needed, so every draw is
// a pure function of (seed, stream, counter) and results are identical
// across platforms and thread counts.
//
// Substream derivation: key = mix(seed ^ mix(stream_a ^ mix(stream_b))),
// draw k = mix(key + k * golden_gamma), with mix the splitmix64 finalizer.

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b = 0)
        : key_(mix64(seed ^ mix64(stream_a ^ mix64(stream_b)))) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

    // Uniform on [0, 1) with 53 bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n) via rejection, exact for any n.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    int bernoulli(double p) { return u01() < p ? 1 : 0; }

    // Box-Muller; consumes two uniforms per pair, caching the second.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = u01();
        while (u1 <= 0.0) u1 = u01();
        const double u2 = u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace localint
