// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "prunekit/kernels.hpp"

namespace prunekit::kernels {

// Bit-level run predicates shared by every backend; SIMD variants evaluate the
// same expressions lane-wise.
inline std::uint64_t run_mask(std::uint32_t epochs) noexcept {
    return epochs >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << epochs) - 1;
}

// r + lowest_set_bit(r) == 2^E (wrapping to 0 when E = 64) iff the set bits of r
// form one block ending at bit E - 1.
inline std::uint64_t settled_target(std::uint32_t epochs) noexcept {
    return epochs >= 64 ? 0 : std::uint64_t{1} << epochs;
}

inline bool run_matches(std::uint64_t r, RunRule rule, std::uint32_t epochs) noexcept {
    switch (rule) {
        case RunRule::AllCorrect:
            return r == run_mask(epochs);
        case RunRule::FinalCorrect:
            return (r >> (epochs - 1)) & 1u;
        case RunRule::SettledSuffix:
            return r != 0 && r + (r & (0 - r)) == settled_target(epochs);
    }
    return false;
}

// Batcher odd-even merge sort comparators for n elements (the power-of-two network
// with every comparator touching an index >= n dropped). Each pair (a, b) has a < b
// and leaves the smaller value at a.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> sort_network(std::size_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> net;
    for (std::size_t p = 1; p < n; p <<= 1) {
        for (std::size_t k = p; k >= 1; k >>= 1) {
            for (std::size_t j = k % p; j + k < n; j += 2 * k) {
                for (std::size_t i = 0; i < k && i + j + k < n; ++i) {
                    if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) {
                        net.emplace_back(static_cast<std::uint32_t>(i + j), static_cast<std::uint32_t>(i + j + k));
                    }
                }
            }
        }
    }
    return net;
}

namespace scalar {
void count_runs(WordPlane plane, RunRule rule, std::size_t n, std::uint32_t* acc);
void moments(const double* planes, std::size_t stride, std::size_t checkpoints, std::size_t n, double* mean,
             double* stddev);
}  // namespace scalar

#if defined(PRUNEKIT_HAVE_AVX2)
namespace avx2 {
void count_runs(WordPlane plane, RunRule rule, std::size_t n, std::uint32_t* acc);
void moments(const double* planes, std::size_t stride, std::size_t checkpoints, std::size_t n, double* mean,
             double* stddev);
}  // namespace avx2
#endif

#if defined(PRUNEKIT_HAVE_NEON)
namespace neon {
void count_runs(WordPlane plane, RunRule rule, std::size_t n, std::uint32_t* acc);
void moments(const double* planes, std::size_t stride, std::size_t checkpoints, std::size_t n, double* mean,
             double* stddev);
}  // namespace neon
#endif

}  // namespace prunekit::kernels
