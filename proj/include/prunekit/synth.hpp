// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prunekit/log_ingest.hpp"
#include "prunekit/tensor.hpp"

namespace prunekit {

/// Examples of one difficulty class are correct at epoch k with probability
/// clamp(base_prob + per_epoch_gain * k, 0, 1), independently per run and epoch.
struct DifficultyClass {
    double weight = 1.0;
    double base_prob = 0.5;
    double per_epoch_gain = 0.0;
};

struct SynthConfig {
    std::size_t n = 0;
    std::uint32_t s = 6;
    std::uint32_t e = 3;
    std::vector<DifficultyClass> mix;
    std::uint64_t seed = 0;
    bool emit_gold_prob = false;
    double jitter_sigma = 0.05;
    /// Constructive mode: exact bucket counts for 0..s, must sum to n.
    std::optional<std::vector<std::uint64_t>> target_histogram;
};

/// Validates the config. Throws InfeasibleTarget, OutOfRange.
void validate(const SynthConfig& config);

/// Streams records example by example (run-major, then epoch). Deterministic per seed;
/// each example draws from its own sub-seed so output does not depend on generation order.
void generate(const SynthConfig& config, const std::function<void(const PredictionRecord&)>& sink);

std::vector<PredictionRecord> generate(const SynthConfig& config);

/// Zero-padded ids ("ex000042") so lexicographic order equals index order.
std::string synth_id(std::size_t index, std::size_t n);

/// Bucket counts at `n` examples from two-decimal percentages, rounded, with the
/// rounding residual absorbed by bucket S.
std::vector<std::uint64_t> histogram_from_percentages(std::span<const double> percentages, std::size_t n);

/// Literal triple-loop evaluation of the H-score definition, independent of the kernels.
std::vector<std::uint32_t> oracle_h(const CorrectnessTensor& tensor);

/// Literal evaluation of the F-score rules, one epoch at a time.
std::vector<std::uint32_t> oracle_f(const CorrectnessTensor& tensor, bool strict);

/// Every n x s x e grid exactly once; cell (i, j, k) takes bit (i*s + j)*e + k of the grid code.
/// Throws TooLarge when n*s*e > 24.
void enumerate_small_grids(std::size_t n, std::uint32_t s, std::uint32_t e,
                           const std::function<void(const CorrectnessTensor&)>& visit);

}  // namespace prunekit
