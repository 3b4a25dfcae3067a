// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/subsets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "prunekit/rng.hpp"
#include "prunekit/text.hpp"

namespace prunekit {
namespace {

const std::vector<std::uint32_t>& scores_of(const ScoreTable& table, ScoreKind kind) {
    return kind == ScoreKind::H ? table.h : table.f;
}

std::uint32_t parse_bucket(std::string_view token, std::string_view whole) {
    token = text::trim(token);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw Error(ErrorKind::SpecParseError, "bad bucket '" + std::string(token) + "' in '" + std::string(whole) + "'");
    }
    return v;
}

void check_k(std::size_t k, std::size_t n) {
    if (k > n) {
        throw Error(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " exceeds N = " + std::to_string(n));
    }
}

SubsetManifest base_manifest(const ScoreTable& table, SubsetSpec spec, ScoreKind kind) {
    SubsetManifest m;
    m.spec = std::move(spec);
    m.provenance = provenance_of(table, kind);
    return m;
}

}  // namespace

std::string_view to_string(ScoreKind kind) noexcept { return kind == ScoreKind::H ? "h" : "f"; }

ScoreKind parse_score_kind(std::string_view name) {
    if (name == "h" || name == "H") return ScoreKind::H;
    if (name == "f" || name == "F") return ScoreKind::F;
    throw Error(ErrorKind::UsageError, "unknown score kind '" + std::string(name) + "' (expected h or f)");
}

std::uint64_t BucketHistogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

BucketHistogram bucket_histogram(std::span<const std::uint32_t> scores, std::uint32_t s) {
    BucketHistogram hist{std::vector<std::uint64_t>(std::size_t{s} + 1, 0)};
    for (auto v : scores) {
        if (v > s) throw Error(ErrorKind::ScoreOutOfRange, "score " + std::to_string(v) + " > S = " + std::to_string(s));
        ++hist.counts[v];
    }
    return hist;
}

BucketSet BucketSet::of(std::vector<std::uint32_t> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return BucketSet{std::move(values)};
}

BucketSet BucketSet::range(std::uint32_t first, std::uint32_t last) {
    BucketSet out;
    for (std::uint32_t v = first; v <= last; ++v) out.buckets.push_back(v);
    return out;
}

BucketSet BucketSet::parse(std::string_view spec) {
    const auto body = text::trim(spec);
    if (body.empty()) throw Error(ErrorKind::SpecParseError, "empty bucket list");
    std::vector<std::uint32_t> values;
    std::size_t start = 0;
    while (start <= body.size()) {
        const auto comma = std::min(body.find(',', start), body.size());
        const auto item = text::trim(body.substr(start, comma - start));
        const auto dash = item.find('-');
        if (dash != std::string_view::npos) {
            const auto lo = parse_bucket(item.substr(0, dash), spec);
            const auto hi = parse_bucket(item.substr(dash + 1), spec);
            if (lo > hi) throw Error(ErrorKind::SpecParseError, "descending range in '" + std::string(spec) + "'");
            for (auto v = lo; v <= hi; ++v) values.push_back(v);
        } else {
            values.push_back(parse_bucket(item, spec));
        }
        start = comma + 1;
    }
    return of(std::move(values));
}

bool BucketSet::contains(std::uint32_t v) const { return std::binary_search(buckets.begin(), buckets.end(), v); }

std::string label(const SubsetSpec& spec) {
    if (const auto* m = std::get_if<BucketSet>(&spec)) {
        std::string out = "D{";
        for (std::size_t i = 0; i < m->buckets.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(m->buckets[i]);
        }
        return out + "}";
    }
    if (const auto* a = std::get_if<AmbiguousSpec>(&spec)) return "ambiguous{k=" + std::to_string(a->k) + "}";
    const auto& r = std::get<RandomSpec>(spec);
    return "random{k=" + std::to_string(r.k) + ",seed=" + std::to_string(r.seed) + "}";
}

std::string slug(const SubsetSpec& spec) {
    if (const auto* m = std::get_if<BucketSet>(&spec)) {
        std::string out = "D";
        for (auto v : m->buckets) out += "_" + std::to_string(v);
        return m->buckets.empty() ? "D_empty" : out;
    }
    if (const auto* a = std::get_if<AmbiguousSpec>(&spec)) return "ambiguous_k" + std::to_string(a->k);
    const auto& r = std::get<RandomSpec>(spec);
    return "random_k" + std::to_string(r.k) + "_seed" + std::to_string(r.seed);
}

ManifestProvenance provenance_of(const ScoreTable& table, ScoreKind kind) {
    ManifestProvenance p;
    p.s = table.s;
    p.e = table.e;
    p.n = table.n();
    p.score_kind = kind;
    p.f_mode = table.provenance.f_mode;
    p.missing_policy = table.provenance.missing_policy;
    p.log_digest = table.provenance.log_digest;
    p.run_manifest = table.provenance.run_manifest;
    return p;
}

double SubsetManifest::size_fraction() const noexcept {
    return provenance.n == 0 ? 0.0 : static_cast<double>(size()) / static_cast<double>(provenance.n);
}

double SubsetManifest::size_pct() const noexcept { return std::round(size_fraction() * 10000.0) / 100.0; }

SubsetManifest build_subset(const ScoreTable& table, const BucketSet& m, ScoreKind kind) {
    for (auto v : m.buckets) {
        if (v > table.s) {
            throw Error(ErrorKind::ScoreOutOfRange,
                        "bucket " + std::to_string(v) + " outside [0, " + std::to_string(table.s) + "]");
        }
    }
    const auto& scores = scores_of(table, kind);
    std::vector<bool> wanted(std::size_t{table.s} + 1, false);
    for (auto v : m.buckets) wanted[v] = true;

    auto out = base_manifest(table, m, kind);
    std::vector<std::uint64_t> hits(wanted.size(), 0);
    for (std::size_t i = 0; i < table.n(); ++i) {
        if (wanted[scores[i]]) {
            out.member_ids.push_back(table.ids[i]);
            ++hits[scores[i]];
        }
    }
    for (auto v : m.buckets) {
        if (hits[v] == 0) out.warnings.push_back("bucket " + std::to_string(v) + " is empty");
    }
    return out;
}

std::vector<BucketSet> proposed_family_specs(std::uint32_t s) {
    if (s < 2) throw Error(ErrorKind::DegenerateS, "subset family needs S >= 2, got " + std::to_string(s));
    std::vector<BucketSet> specs;
    auto add = [&](BucketSet m) {
        if (m.empty()) return;
        if (std::find(specs.begin(), specs.end(), m) == specs.end()) specs.push_back(std::move(m));
    };
    for (std::uint32_t lo = 1; lo <= s - 1; ++lo) add(BucketSet::range(lo, s - 1));
    const std::uint32_t c = std::min((s + 1) / 2 + 1, s - 1);
    add(BucketSet::range(c, c));
    if (c >= 2) add(BucketSet::range(2, c));
    return specs;
}

SubsetManifest winning_ticket(const ScoreTable& table, ScoreKind kind) {
    return proposed_family(table, kind).front();
}

std::vector<SubsetManifest> proposed_family(const ScoreTable& table, ScoreKind kind) {
    std::vector<SubsetManifest> out;
    for (auto& m : proposed_family_specs(table.s)) {
        out.push_back(build_subset(table, m, kind));
        out.back().provenance.family_extension = table.s != 6;
    }
    return out;
}

SubsetManifest ambiguous_subset(const ScoreTable& table, std::size_t k) {
    if (!table.variability) throw Error(ErrorKind::NoVariability, "scores carry no variability (log had no gold_prob)");
    check_k(k, table.n());
    const auto& v = *table.variability;
    std::vector<std::size_t> order(table.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // ids are sorted, so index order is id order.
    auto better = [&](std::size_t a, std::size_t b) { return v[a] != v[b] ? v[a] > v[b] : a < b; };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), better);
    order.resize(k);
    std::sort(order.begin(), order.end());

    auto out = base_manifest(table, AmbiguousSpec{k}, ScoreKind::H);
    out.member_ids.reserve(k);
    for (auto i : order) out.member_ids.push_back(table.ids[i]);
    return out;
}

std::vector<std::string> random_members(std::span<const std::string> sorted_ids, std::size_t k, std::uint64_t seed) {
    check_k(k, sorted_ids.size());
    std::vector<std::size_t> perm(sorted_ids.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 engine(seed);
    // Forward Fisher-Yates; only the first k positions are needed.
    for (std::size_t i = 0; i < k && i + 1 < perm.size(); ++i) {
        const auto j = i + rng::bounded(engine, perm.size() - i);
        std::swap(perm[i], perm[j]);
    }
    perm.resize(k);
    std::sort(perm.begin(), perm.end());
    std::vector<std::string> out;
    out.reserve(k);
    for (auto i : perm) out.push_back(sorted_ids[i]);
    return out;
}

SubsetManifest random_subset(const ScoreTable& table, std::size_t k, std::uint64_t seed) {
    auto out = base_manifest(table, RandomSpec{k, seed}, ScoreKind::H);
    out.member_ids = random_members(table.ids, k, seed);
    return out;
}

std::vector<SubsetManifest> size_matched_baselines(std::span<const SubsetManifest> family, const ScoreTable& table,
                                                   std::uint64_t seed) {
    std::vector<SubsetManifest> out;
    out.reserve(family.size() * 2);
    for (const auto& m : family) out.push_back(ambiguous_subset(table, m.size()));
    for (std::size_t i = 0; i < family.size(); ++i) out.push_back(random_subset(table, family[i].size(), seed + i));
    return out;
}

GroupId classify_group(const BucketSet& m, std::uint32_t s) {
    if (m.empty()) throw Error(ErrorKind::EmptySpec, "group of an empty bucket set is undefined");
    if (m.buckets.back() > s) throw Error(ErrorKind::ScoreOutOfRange, "bucket set exceeds S");
    const bool has_s = m.contains(s);
    const bool has_0 = m.contains(0);
    if (has_s) return GroupId::Group1;
    if (!has_0) return GroupId::Group4;
    return m.contains(s - 1) ? GroupId::Group2 : GroupId::Group3;
}

}  // namespace prunekit
