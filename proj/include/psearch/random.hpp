#pragma once

#include <cmath>
#include <cstdint>

namespace psearch {

// SplitMix64. Every random draw in the library flows through this generator
// or through the stateless stream hash below, so results are bit-identical
// across platforms, runs, and thread schedules.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n > 0.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Box-Muller, cosine branch only so each call consumes exactly two draws.
    double normal(double mean, double stddev) {
        double u1 = next_unit();
        double u2 = next_unit();
        while (u1 <= 0.0) u1 = next_unit();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
        return mean + stddev * z;
    }

private:
    std::uint64_t state_;
};

// Stateless hash of two stream coordinates under a seed. The Monte-Carlo
// simulator keys its draws by (trial, vertex) through this, which makes the
// draw independent of visit order and safe to evaluate from any thread.
inline std::uint64_t hash_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    Rng r(seed ^ (a * 0xd1342543de82ef95ULL) ^ (b * 0xaf251af3b0f025b5ULL));
    return r.next_u64();
}

inline double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return static_cast<double>(hash_stream(seed, a, b) >> 11) * 0x1.0p-53;
}

} // namespace psearch
