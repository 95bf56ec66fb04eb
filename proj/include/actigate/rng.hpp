#pragma once

#include <cstdint>
#include <random>

namespace actigate {

// Deterministic RNG helpers. std::mt19937_64's raw output is pinned by the
// standard, but the <random> distributions are not; these mappings are, so
// seeded runs reproduce bit-identically on any platform.

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    // Inclusive bounds; modulo bias is irrelevant at these range sizes.
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng() % span);
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
    return uniform_unit(rng) < p;
}

} // namespace actigate
