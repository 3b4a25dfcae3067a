// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/scores.hpp"

#include <algorithm>

#include "prunekit/kernels.hpp"
#include "prunekit/parallel.hpp"

namespace prunekit {
namespace {

// Chunk boundaries are kept on multiples of this so every worker sees whole SIMD blocks.
constexpr std::size_t kChunkAlign = 64;

std::vector<std::uint32_t> count_runs(const CorrectnessTensor& t, kernels::RunRule rule) {
    std::vector<std::uint32_t> acc(t.n(), 0);
    if (t.n() == 0 || t.s() == 0 || t.e() == 0) return acc;
    const auto& k = kernels::active();
    parallel::for_each_range(t.n(), kChunkAlign, [&](std::size_t begin, std::size_t end) {
        for (std::uint32_t w = 0; w < t.word_count(); ++w) {
            const kernels::WordPlane plane{t.plane(w).data() + begin, t.runs_in_word(w), t.e()};
            k.count_runs(plane, rule, end - begin, acc.data() + begin);
        }
    });
    return acc;
}

}  // namespace

std::string_view to_string(FScoreMode mode) noexcept { return mode == FScoreMode::Suffix ? "suffix" : "strict"; }

FScoreMode parse_fscore_mode(std::string_view name) {
    if (name == "suffix") return FScoreMode::Suffix;
    if (name == "strict") return FScoreMode::Strict;
    throw Error(ErrorKind::UsageError, "unknown F-score mode '" + std::string(name) + "' (expected suffix or strict)");
}

std::vector<std::uint32_t> h_score(const CorrectnessTensor& tensor) {
    return count_runs(tensor, kernels::RunRule::AllCorrect);
}

std::vector<std::uint32_t> f_score(const CorrectnessTensor& tensor, FScoreMode mode) {
    return count_runs(tensor, mode == FScoreMode::Suffix ? kernels::RunRule::FinalCorrect
                                                         : kernels::RunRule::SettledSuffix);
}

Cartography cartography(const GoldProbTensor* gold_prob) {
    if (gold_prob == nullptr) throw Error(ErrorKind::NoGoldProb, "log carries no gold_prob values");
    const std::size_t n = gold_prob->n();
    Cartography out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    const std::size_t checkpoints = gold_prob->checkpoints();
    if (n == 0 || checkpoints == 0) return out;
    const auto& k = kernels::active();
    const double* planes = gold_prob->planes().data();
    parallel::for_each_range(n, kChunkAlign, [&](std::size_t begin, std::size_t end) {
        k.moments(planes + begin, n, checkpoints, end - begin, out.confidence.data() + begin,
                  out.variability.data() + begin);
    });
    return out;
}

CorrectnessTensor truncate_grid(const CorrectnessTensor& tensor, std::uint32_t runs, std::uint32_t epochs) {
    return tensor.truncated(runs, epochs);
}

std::optional<std::size_t> ScoreTable::index_of(std::string_view id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids.begin());
}

ScoreTable compute_scores(const AssembledLog& log, const ScoreOptions& options) {
    const auto& full = log.correctness;
    const std::uint32_t s = options.s_used.value_or(full.s());
    const std::uint32_t e = options.e_used.value_or(full.e());
    const bool truncate = s != full.s() || e != full.e();
    const CorrectnessTensor truncated = truncate ? full.truncated(s, e) : CorrectnessTensor{};
    const CorrectnessTensor& t = truncate ? truncated : full;

    ScoreTable table;
    table.ids.assign(full.ids().begin(), full.ids().end());
    table.h = h_score(t);
    table.f = f_score(t, options.f_mode);
    if (log.gold_prob) {
        std::optional<GoldProbTensor> cut;
        if (truncate) cut = log.gold_prob->truncated(s, e);
        auto carto = cartography(cut ? &*cut : &*log.gold_prob);
        table.confidence = std::move(carto.confidence);
        table.variability = std::move(carto.variability);
    }
    table.s = s;
    table.e = e;
    table.provenance.source_s = full.s();
    table.provenance.source_e = full.e();
    table.provenance.f_mode = options.f_mode;
    table.provenance.missing_policy = log.policy;
    table.provenance.missing_cells = log.missing_cells;
    table.provenance.log_digest = log.source_digest;
    return table;
}

}  // namespace prunekit
