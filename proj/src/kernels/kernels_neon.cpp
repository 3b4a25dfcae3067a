// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace prunekit::kernels::neon {

// Two examples per iteration, one 64-bit lane each.
void count_runs(WordPlane plane, RunRule rule, std::size_t n, std::uint32_t* acc) {
    const std::size_t body = n & ~std::size_t{1};
    const uint64x2_t mask = vdupq_n_u64(run_mask(plane.epochs));
    const uint64x2_t target = vdupq_n_u64(settled_target(plane.epochs));
    const uint64x2_t zero = vdupq_n_u64(0);
    const uint64x2_t one = vdupq_n_u64(1);

    for (std::size_t i = 0; i < body; i += 2) {
        const uint64x2_t word = vld1q_u64(plane.words + i);
        uint64x2_t count = zero;
        for (std::uint32_t r = 0; r < plane.runs; ++r) {
            const std::uint32_t shift = r * plane.epochs;
            // vshlq with a negative count shifts right; counts >= 64 produce zero
            const int64x2_t right = vdupq_n_s64(-static_cast<std::int64_t>(shift));
            const uint64x2_t bits = vandq_u64(vshlq_u64(word, right), mask);
            switch (rule) {
                case RunRule::AllCorrect:
                    count = vsubq_u64(count, vceqq_u64(bits, mask));
                    break;
                case RunRule::FinalCorrect: {
                    const int64x2_t last = vdupq_n_s64(-static_cast<std::int64_t>(plane.epochs - 1));
                    count = vaddq_u64(count, vandq_u64(vshlq_u64(bits, last), one));
                    break;
                }
                case RunRule::SettledSuffix: {
                    const uint64x2_t low = vandq_u64(bits, vsubq_u64(zero, bits));
                    const uint64x2_t settled = vceqq_u64(vaddq_u64(bits, low), target);
                    const uint64x2_t nonzero = vreinterpretq_u64_u8(vmvnq_u8(vreinterpretq_u8_u64(vceqq_u64(bits, zero))));
                    count = vsubq_u64(count, vandq_u64(settled, nonzero));
                    break;
                }
            }
        }
        const uint32x2_t narrow = vmovn_u64(count);
        vst1_u32(acc + i, vadd_u32(vld1_u32(acc + i), narrow));
    }
    if (body < n) {
        WordPlane tail{plane.words + body, plane.runs, plane.epochs};
        scalar::count_runs(tail, rule, n - body, acc + body);
    }
}

void moments(const double* planes, std::size_t stride, std::size_t checkpoints, std::size_t n, double* mean,
             double* stddev) {
    const auto net = sort_network(checkpoints);
    const std::size_t body = n & ~std::size_t{1};
    const float64x2_t inv = vdupq_n_f64(1.0 / static_cast<double>(checkpoints));
    std::vector<float64x2_t> v(checkpoints);
    for (std::size_t i = 0; i < body; i += 2) {
        for (std::size_t c = 0; c < checkpoints; ++c) v[c] = vld1q_f64(planes + c * stride + i);
        for (const auto& [a, b] : net) {
            const float64x2_t x = v[a];
            const float64x2_t y = v[b];
            v[a] = vbslq_f64(vcltq_f64(y, x), y, x);
            v[b] = vbslq_f64(vcltq_f64(x, y), y, x);
        }
        const float64x2_t lo = v[0];
        const float64x2_t hi = v[checkpoints - 1];
        float64x2_t shifted = vdupq_n_f64(0.0);
        for (std::size_t c = 0; c < checkpoints; ++c) shifted = vaddq_f64(shifted, vsubq_f64(v[c], lo));
        float64x2_t m = vaddq_f64(lo, vmulq_f64(shifted, inv));
        m = vbslq_f64(vcltq_f64(m, lo), lo, m);
        m = vbslq_f64(vcltq_f64(hi, m), hi, m);
        float64x2_t ss = vdupq_n_f64(0.0);
        for (std::size_t c = 0; c < checkpoints; ++c) {
            const float64x2_t d = vsubq_f64(v[c], m);
            ss = vaddq_f64(ss, vmulq_f64(d, d));
        }
        vst1q_f64(mean + i, m);
        vst1q_f64(stddev + i, vsqrtq_f64(vmulq_f64(ss, inv)));
    }
    if (body < n) {
        scalar::moments(planes + body, stride, checkpoints, n - body, mean + body, stddev + body);
    }
}

}  // namespace prunekit::kernels::neon
