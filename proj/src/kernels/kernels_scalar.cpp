// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace prunekit::kernels::scalar {

void count_runs(WordPlane plane, RunRule rule, std::size_t n, std::uint32_t* acc) {
    const std::uint64_t mask = run_mask(plane.epochs);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t word = plane.words[i];
        std::uint32_t count = 0;
        for (std::uint32_t r = 0; r < plane.runs; ++r) {
            const std::uint32_t shift = r * plane.epochs;
            const std::uint64_t bits = (shift >= 64 ? 0 : word >> shift) & mask;
            count += run_matches(bits, rule, plane.epochs) ? 1u : 0u;
        }
        acc[i] += count;
    }
}

// Each example's checkpoints are sorted first, so the result does not depend on
// checkpoint order. Moments are then taken around the minimum: a constant
// sequence yields exactly mean = value and stddev = 0, and the mean is clamped
// to [min, max] to absorb rounding.
void moments(const double* planes, std::size_t stride, std::size_t checkpoints, std::size_t n, double* mean,
             double* stddev) {
    const auto net = sort_network(checkpoints);
    const double inv = 1.0 / static_cast<double>(checkpoints);
    std::vector<double> v(checkpoints);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < checkpoints; ++c) v[c] = planes[c * stride + i];
        for (const auto& [a, b] : net) {
            const double x = v[a];
            const double y = v[b];
            v[a] = std::min(x, y);
            v[b] = std::max(x, y);
        }
        const double lo = v[0];
        const double hi = v[checkpoints - 1];
        double shifted = 0.0;
        for (std::size_t c = 0; c < checkpoints; ++c) shifted += v[c] - lo;
        double m = lo + shifted * inv;
        m = std::min(std::max(m, lo), hi);
        double ss = 0.0;
        for (std::size_t c = 0; c < checkpoints; ++c) {
            const double d = v[c] - m;
            ss += d * d;
        }
        mean[i] = m;
        stddev[i] = std::sqrt(ss * inv);
    }
}

}  // namespace prunekit::kernels::scalar
