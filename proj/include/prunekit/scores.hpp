// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prunekit/log_ingest.hpp"
#include "prunekit/tensor.hpp"

namespace prunekit {

/// Suffix: a run is rewarded when its final epoch is correct (some suffix of epochs is all correct).
/// Strict: additionally no incorrect epoch may follow the first correct one.
enum class FScoreMode { Suffix, Strict };

std::string_view to_string(FScoreMode mode) noexcept;
FScoreMode parse_fscore_mode(std::string_view name);

/// Number of runs in which every epoch is correct, per example.
std::vector<std::uint32_t> h_score(const CorrectnessTensor& tensor);

/// Number of runs in which the example is learned and not forgotten, per example.
std::vector<std::uint32_t> f_score(const CorrectnessTensor& tensor, FScoreMode mode = FScoreMode::Suffix);

struct Cartography {
    std::vector<double> confidence;   // mean gold probability over all S*E checkpoints
    std::vector<double> variability;  // population standard deviation of the same values
};

/// Throws NoGoldProb when `gold_prob` is null.
Cartography cartography(const GoldProbTensor* gold_prob);
inline Cartography cartography(const std::optional<GoldProbTensor>& gold_prob) {
    return cartography(gold_prob ? &*gold_prob : nullptr);
}

/// Restricts to the first `runs` runs and `epochs` epochs. Throws OutOfRange.
CorrectnessTensor truncate_grid(const CorrectnessTensor& tensor, std::uint32_t runs, std::uint32_t epochs);

/// Where a score table came from; travels into every manifest and report built from it.
struct ScoreProvenance {
    std::uint32_t source_s = 0;  // grid of the log before truncation
    std::uint32_t source_e = 0;
    FScoreMode f_mode = FScoreMode::Suffix;
    MissingPolicy missing_policy = MissingPolicy::Strict;
    std::size_t missing_cells = 0;
    std::string log_digest;
    std::string run_manifest;  // file name of the RunManifest that produced the table, if any

    bool operator==(const ScoreProvenance&) const = default;
};

/// Per-example scores in lexicographic id order.
struct ScoreTable {
    std::vector<std::string> ids;
    std::vector<std::uint32_t> h;
    std::vector<std::uint32_t> f;
    std::optional<std::vector<double>> confidence;
    std::optional<std::vector<double>> variability;
    std::uint32_t s = 0;
    std::uint32_t e = 0;
    ScoreProvenance provenance;

    std::size_t n() const noexcept { return ids.size(); }
    std::optional<std::size_t> index_of(std::string_view id) const;

    bool operator==(const ScoreTable&) const = default;
};

struct ScoreOptions {
    FScoreMode f_mode = FScoreMode::Suffix;
    std::optional<std::uint32_t> s_used;
    std::optional<std::uint32_t> e_used;
};

/// Scores an assembled log, optionally on a truncated grid.
ScoreTable compute_scores(const AssembledLog& log, const ScoreOptions& options = {});

enum class ScoreFormat { Csv, Jsonl };

ScoreFormat parse_score_format(std::string_view name);

/// Columns example_id, h, f, confidence, variability, preceded by one provenance line.
void write_scores(std::ostream& out, const ScoreTable& table, ScoreFormat format);

/// Reads either export format (detected from the first line). Throws MalformedLine.
ScoreTable read_scores(std::istream& in);
ScoreTable read_scores_file(const std::string& path);

}  // namespace prunekit
