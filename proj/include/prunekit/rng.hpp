// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Portable random helpers. std::*_distribution output differs between standard
// libraries, so draws are derived from raw engine output here.

#include <cmath>
#include <cstdint>
#include <random>

namespace prunekit::rng {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream seed for item `index` under `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform integer in [0, bound), bound > 0; rejection sampling, no modulo bias.
inline std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;  // multiple of bound
    for (;;) {
        const std::uint64_t x = engine();
        if (limit == 0 || x < limit) return x % bound;
    }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller (one value per call).
inline double normal(std::mt19937_64& engine) {
    double u1 = uniform01(engine);
    while (u1 <= 0.0) u1 = uniform01(engine);
    const double u2 = uniform01(engine);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace prunekit::rng
