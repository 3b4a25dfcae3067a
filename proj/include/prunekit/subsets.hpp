// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prunekit/scores.hpp"

namespace prunekit {

/// Which per-example score a bucket subset is drawn from.
enum class ScoreKind { H, F };

std::string_view to_string(ScoreKind kind) noexcept;
ScoreKind parse_score_kind(std::string_view name);

struct BucketHistogram {
    std::vector<std::uint64_t> counts;  // counts[v] for v in 0..S

    std::uint64_t total() const noexcept;
    bool operator==(const BucketHistogram&) const = default;
};

/// Throws ScoreOutOfRange if any score exceeds `s`.
BucketHistogram bucket_histogram(std::span<const std::uint32_t> scores, std::uint32_t s);

/// A set M of score buckets; kept sorted and unique.
struct BucketSet {
    std::vector<std::uint32_t> buckets;

    static BucketSet of(std::vector<std::uint32_t> values);
    static BucketSet range(std::uint32_t first, std::uint32_t last);  // inclusive
    /// Parses "1,2,3" or "1-5". Throws SpecParseError (empty text included).
    static BucketSet parse(std::string_view text);

    bool contains(std::uint32_t v) const;
    bool empty() const noexcept { return buckets.empty(); }
    bool operator==(const BucketSet&) const = default;
};

struct AmbiguousSpec {
    std::size_t k = 0;
    bool operator==(const AmbiguousSpec&) const = default;
};

struct RandomSpec {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    bool operator==(const RandomSpec&) const = default;
};

using SubsetSpec = std::variant<BucketSet, AmbiguousSpec, RandomSpec>;

/// "D{1,2,3,4,5}", "ambiguous{k=2706}", "random{k=2706,seed=7}".
std::string label(const SubsetSpec& spec);
/// File-name friendly form of label().
std::string slug(const SubsetSpec& spec);

/// Name of the shuffle generator recorded in random manifests.
inline constexpr std::string_view kRandomGenerator = "mt19937_64-fisher-yates/v1";

struct ManifestProvenance {
    std::uint32_t s = 0;
    std::uint32_t e = 0;
    std::size_t n = 0;
    ScoreKind score_kind = ScoreKind::H;
    FScoreMode f_mode = FScoreMode::Suffix;
    MissingPolicy missing_policy = MissingPolicy::Strict;
    std::string log_digest;
    std::string run_manifest;
    /// Subset family generalized beyond S = 6.
    bool family_extension = false;

    bool operator==(const ManifestProvenance&) const = default;
};

ManifestProvenance provenance_of(const ScoreTable& table, ScoreKind kind = ScoreKind::H);

struct SubsetManifest {
    SubsetSpec spec;
    std::vector<std::string> member_ids;  // lexicographic
    ManifestProvenance provenance;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return member_ids.size(); }
    /// size / N, in [0, 1].
    double size_fraction() const noexcept;
    /// Percentage rounded to two decimals, the way subset sizes are tabulated.
    double size_pct() const noexcept;

    bool operator==(const SubsetManifest&) const = default;
};

/// D_M: examples whose score lies in M. Throws ScoreOutOfRange if M exceeds S.
SubsetManifest build_subset(const ScoreTable& table, const BucketSet& m, ScoreKind kind = ScoreKind::H);

/// Bucket sets of the proposed family at this S. At S = 6:
/// {1..5} (winning ticket), {2..5}, {3,4,5}, {4,5}, {5}, {4}, {2,3,4}.
/// Throws DegenerateS when s < 2.
std::vector<BucketSet> proposed_family_specs(std::uint32_t s);

SubsetManifest winning_ticket(const ScoreTable& table, ScoreKind kind = ScoreKind::H);

std::vector<SubsetManifest> proposed_family(const ScoreTable& table, ScoreKind kind = ScoreKind::H);

/// The k examples with the largest variability, ties broken by ascending id.
/// Throws NoVariability, KOutOfRange.
SubsetManifest ambiguous_subset(const ScoreTable& table, std::size_t k);

/// First k of a Fisher-Yates shuffle of the sorted ids. Throws KOutOfRange.
SubsetManifest random_subset(const ScoreTable& table, std::size_t k, std::uint64_t seed);

/// Lower-level form over a bare id list (must be sorted).
std::vector<std::string> random_members(std::span<const std::string> sorted_ids, std::size_t k, std::uint64_t seed);

/// For each family member i: Ambiguous(k_i), then for each: Random(k_i, seed + i).
std::vector<SubsetManifest> size_matched_baselines(std::span<const SubsetManifest> family, const ScoreTable& table,
                                                   std::uint64_t seed);

enum class GroupId { Group1 = 1, Group2 = 2, Group3 = 3, Group4 = 4, Other = 0 };

/// Throws EmptySpec for empty M, ScoreOutOfRange if M exceeds S.
GroupId classify_group(const BucketSet& m, std::uint32_t s);

}  // namespace prunekit
