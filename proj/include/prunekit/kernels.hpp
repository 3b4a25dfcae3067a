// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Inner loops of the scoring pipeline. Every kernel has a scalar reference
// implementation; SIMD variants must produce bit-identical output.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace prunekit::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend) noexcept;

/// Per-run predicate applied to each E-bit run pattern of a packed word.
enum class RunRule {
    AllCorrect,     // every epoch correct (H-score)
    FinalCorrect,   // last epoch correct (F-score, suffix reading)
    SettledSuffix,  // correct epochs form one contiguous block ending at the last epoch
};

struct WordPlane {
    const std::uint64_t* words;  // one word per example
    std::uint32_t runs;          // runs packed in this word
    std::uint32_t epochs;        // bits per run
};

/// acc[i] += number of runs in words[i] satisfying `rule`, for i in [0, n).
using CountRunsFn = void (*)(WordPlane plane, RunRule rule, std::size_t n, std::uint32_t* acc);

/// Per example i in [0, n): pools `checkpoints` values planes[c * stride + i],
/// writes mean and population standard deviation.
using MomentsFn = void (*)(const double* planes, std::size_t stride, std::size_t checkpoints,
                           std::size_t n, double* mean, double* stddev);

struct KernelTable {
    Backend backend;
    CountRunsFn count_runs;
    MomentsFn moments;
};

/// Reference implementation, always available.
const KernelTable& scalar_table() noexcept;

/// Backends compiled in and supported by the running CPU, scalar first.
std::vector<Backend> available_backends();

/// Throws OutOfRange if `backend` is not available.
const KernelTable& table_for(Backend backend);

/// Active table: forced backend, else PRUNEKIT_SIMD (scalar|avx2|neon|auto), else best available.
const KernelTable& active();

void force_backend(Backend backend);
void clear_forced_backend() noexcept;

}  // namespace prunekit::kernels
