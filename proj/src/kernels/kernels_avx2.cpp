// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace prunekit::kernels::avx2 {

// Four examples per iteration, one 64-bit lane each. Tails go to the scalar kernel.
void count_runs(WordPlane plane, RunRule rule, std::size_t n, std::uint32_t* acc) {
    const std::size_t body = n & ~std::size_t{3};
    const __m256i mask = _mm256_set1_epi64x(static_cast<long long>(run_mask(plane.epochs)));
    const __m256i target = _mm256_set1_epi64x(static_cast<long long>(settled_target(plane.epochs)));
    const __m256i zero = _mm256_setzero_si256();
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i pack = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);

    for (std::size_t i = 0; i < body; i += 4) {
        const __m256i word = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(plane.words + i));
        __m256i count = zero;
        for (std::uint32_t r = 0; r < plane.runs; ++r) {
            const std::uint32_t shift = r * plane.epochs;
            const __m256i bits = _mm256_and_si256(_mm256_srl_epi64(word, _mm_cvtsi32_si128(static_cast<int>(shift))), mask);
            switch (rule) {
                case RunRule::AllCorrect:
                    count = _mm256_sub_epi64(count, _mm256_cmpeq_epi64(bits, mask));
                    break;
                case RunRule::FinalCorrect: {
                    const __m256i last =
                        _mm256_srl_epi64(bits, _mm_cvtsi32_si128(static_cast<int>(plane.epochs - 1)));
                    count = _mm256_add_epi64(count, _mm256_and_si256(last, one));
                    break;
                }
                case RunRule::SettledSuffix: {
                    const __m256i low = _mm256_and_si256(bits, _mm256_sub_epi64(zero, bits));
                    const __m256i hit = _mm256_andnot_si256(_mm256_cmpeq_epi64(bits, zero),
                                                            _mm256_cmpeq_epi64(_mm256_add_epi64(bits, low), target));
                    count = _mm256_sub_epi64(count, hit);
                    break;
                }
            }
        }
        // counts are < 64, so the low dword of each lane holds the whole value
        const __m128i narrow = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(count, pack));
        __m128i* dst = reinterpret_cast<__m128i*>(acc + i);
        _mm_storeu_si128(dst, _mm_add_epi32(_mm_loadu_si128(dst), narrow));
    }
    if (body < n) {
        WordPlane tail{plane.words + body, plane.runs, plane.epochs};
        scalar::count_runs(tail, rule, n - body, acc + body);
    }
}

// Lane-wise transcription of scalar::moments; same operation order per example,
// no fused multiply-add, so results are bit-identical.
void moments(const double* planes, std::size_t stride, std::size_t checkpoints, std::size_t n, double* mean,
             double* stddev) {
    const auto net = sort_network(checkpoints);
    const std::size_t body = n & ~std::size_t{3};
    const __m256d inv = _mm256_set1_pd(1.0 / static_cast<double>(checkpoints));
    std::vector<double> buf(checkpoints * 4);
    double* v = buf.data();
    for (std::size_t i = 0; i < body; i += 4) {
        for (std::size_t c = 0; c < checkpoints; ++c) {
            _mm256_storeu_pd(v + 4 * c, _mm256_loadu_pd(planes + c * stride + i));
        }
        for (const auto& [a, b] : net) {
            const __m256d x = _mm256_loadu_pd(v + 4 * a);
            const __m256d y = _mm256_loadu_pd(v + 4 * b);
            _mm256_storeu_pd(v + 4 * a, _mm256_min_pd(y, x));
            _mm256_storeu_pd(v + 4 * b, _mm256_max_pd(y, x));
        }
        const __m256d lo = _mm256_loadu_pd(v);
        const __m256d hi = _mm256_loadu_pd(v + 4 * (checkpoints - 1));
        __m256d shifted = _mm256_setzero_pd();
        for (std::size_t c = 0; c < checkpoints; ++c) {
            shifted = _mm256_add_pd(shifted, _mm256_sub_pd(_mm256_loadu_pd(v + 4 * c), lo));
        }
        __m256d m = _mm256_add_pd(lo, _mm256_mul_pd(shifted, inv));
        m = _mm256_min_pd(hi, _mm256_max_pd(lo, m));
        __m256d ss = _mm256_setzero_pd();
        for (std::size_t c = 0; c < checkpoints; ++c) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + 4 * c), m);
            ss = _mm256_add_pd(ss, _mm256_mul_pd(d, d));
        }
        _mm256_storeu_pd(mean + i, m);
        _mm256_storeu_pd(stddev + i, _mm256_sqrt_pd(_mm256_mul_pd(ss, inv)));
    }
    if (body < n) {
        scalar::moments(planes + body, stride, checkpoints, n - body, mean + body, stddev + body);
    }
}

}  // namespace prunekit::kernels::avx2
