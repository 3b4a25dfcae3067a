// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "prunekit/error.hpp"
#include "prunekit/rng.hpp"

namespace prunekit {
namespace {

// Stream index reserved for the bucket shuffle; example streams use 0..n-1.
constexpr std::uint64_t kAssignmentStream = ~std::uint64_t{0};

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

std::uint64_t all_ones(std::uint32_t e) { return e >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << e) - 1; }

std::vector<std::uint32_t> assign_buckets(const SynthConfig& c) {
    std::vector<std::uint32_t> bucket;
    bucket.reserve(c.n);
    const auto& target = *c.target_histogram;
    for (std::uint32_t v = 0; v < target.size(); ++v) bucket.insert(bucket.end(), target[v], v);
    std::mt19937_64 engine(rng::derive_seed(c.seed, kAssignmentStream));
    for (std::size_t i = bucket.size(); i > 1; --i) {
        std::swap(bucket[i - 1], bucket[rng::bounded(engine, i)]);
    }
    return bucket;
}

void emit_constructive(const SynthConfig& c, std::size_t i, std::uint32_t v, const std::string& id,
                       const std::function<void(const PredictionRecord&)>& sink) {
    std::mt19937_64 engine(rng::derive_seed(c.seed, i));
    std::vector<std::uint32_t> runs(c.s);
    std::iota(runs.begin(), runs.end(), 0u);
    for (std::uint32_t j = 0; j < v; ++j) std::swap(runs[j], runs[j + rng::bounded(engine, c.s - j)]);
    std::vector<std::uint64_t> pattern(c.s);
    const std::uint64_t full = all_ones(c.e);
    for (std::uint32_t j = 0; j < c.s; ++j) {
        // full itself is excluded: a bounded draw below it is never all ones.
        pattern[runs[j]] = j < v ? full : rng::bounded(engine, full);
    }
    PredictionRecord rec;
    rec.example_id = id;
    for (std::uint32_t j = 0; j < c.s; ++j) {
        for (std::uint32_t k = 0; k < c.e; ++k) {
            rec.run = j;
            rec.epoch = k;
            rec.correct = (pattern[j] >> k) & 1u;
            if (c.emit_gold_prob) {
                const double u = rng::uniform01(engine) * 0.5;
                rec.gold_prob = rec.correct ? 0.5 + u : u;
            }
            sink(rec);
        }
    }
}

void emit_stochastic(const SynthConfig& c, std::size_t i, const std::string& id,
                     const std::function<void(const PredictionRecord&)>& sink) {
    std::mt19937_64 engine(rng::derive_seed(c.seed, i));
    const double pick = rng::uniform01(engine);
    std::size_t cls = 0;
    double acc = 0.0;
    for (; cls + 1 < c.mix.size(); ++cls) {
        acc += c.mix[cls].weight;
        if (pick < acc) break;
    }
    const auto& d = c.mix[cls];
    PredictionRecord rec;
    rec.example_id = id;
    for (std::uint32_t j = 0; j < c.s; ++j) {
        for (std::uint32_t k = 0; k < c.e; ++k) {
            const double p = clamp01(d.base_prob + d.per_epoch_gain * static_cast<double>(k));
            rec.run = j;
            rec.epoch = k;
            rec.correct = rng::uniform01(engine) < p;
            if (c.emit_gold_prob) rec.gold_prob = clamp01(p + c.jitter_sigma * rng::normal(engine));
            sink(rec);
        }
    }
}

}  // namespace

void validate(const SynthConfig& c) {
    if (c.s < 1 || c.e < 1) throw Error(ErrorKind::OutOfRange, "synth grid needs S >= 1 and E >= 1");
    if (c.e > kMaxEpochs) throw Error(ErrorKind::OutOfRange, "synth E exceeds " + std::to_string(kMaxEpochs));
    if (!(c.jitter_sigma >= 0.0) || !std::isfinite(c.jitter_sigma)) {
        throw Error(ErrorKind::OutOfRange, "jitter sigma must be finite and >= 0");
    }
    if (c.target_histogram) {
        const auto& t = *c.target_histogram;
        if (t.size() != std::size_t{c.s} + 1) {
            throw Error(ErrorKind::InfeasibleTarget, "target histogram needs exactly S + 1 = " +
                                                         std::to_string(c.s + 1) + " buckets, got " +
                                                         std::to_string(t.size()));
        }
        const auto total = std::accumulate(t.begin(), t.end(), std::uint64_t{0});
        if (total != c.n) {
            throw Error(ErrorKind::InfeasibleTarget,
                        "target histogram sums to " + std::to_string(total) + ", not n = " + std::to_string(c.n));
        }
        return;
    }
    if (c.mix.empty()) throw Error(ErrorKind::OutOfRange, "stochastic synth needs a non-empty difficulty mix");
    double total = 0.0;
    for (const auto& d : c.mix) {
        if (!(d.weight >= 0.0) || !std::isfinite(d.base_prob) || !std::isfinite(d.per_epoch_gain)) {
            throw Error(ErrorKind::OutOfRange, "difficulty class needs weight >= 0 and finite parameters");
        }
        total += d.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorKind::OutOfRange, "difficulty weights sum to " + std::to_string(total) + ", not 1");
    }
}

void generate(const SynthConfig& config, const std::function<void(const PredictionRecord&)>& sink) {
    validate(config);
    if (config.target_histogram) {
        const auto bucket = assign_buckets(config);
        for (std::size_t i = 0; i < config.n; ++i) emit_constructive(config, i, bucket[i], synth_id(i, config.n), sink);
    } else {
        for (std::size_t i = 0; i < config.n; ++i) emit_stochastic(config, i, synth_id(i, config.n), sink);
    }
}

std::vector<PredictionRecord> generate(const SynthConfig& config) {
    std::vector<PredictionRecord> out;
    out.reserve(config.n * config.s * config.e);
    generate(config, [&](const PredictionRecord& r) { out.push_back(r); });
    return out;
}

std::string synth_id(std::size_t index, std::size_t n) {
    std::size_t width = 1;
    for (std::size_t m = n > 0 ? n - 1 : 0; m >= 10; m /= 10) ++width;
    auto digits = std::to_string(index);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return "ex" + digits;
}

std::vector<std::uint64_t> histogram_from_percentages(std::span<const double> pcts, std::size_t n) {
    if (pcts.empty()) throw Error(ErrorKind::InfeasibleTarget, "no percentages given");
    std::vector<std::uint64_t> counts(pcts.size(), 0);
    std::uint64_t used = 0;
    for (std::size_t v = 0; v + 1 < pcts.size(); ++v) {
        if (!(pcts[v] >= 0.0)) throw Error(ErrorKind::InfeasibleTarget, "negative percentage");
        counts[v] = static_cast<std::uint64_t>(std::llround(pcts[v] * static_cast<double>(n) / 100.0));
        used += counts[v];
    }
    if (used > n) throw Error(ErrorKind::InfeasibleTarget, "percentages exceed 100%");
    counts.back() = n - used;
    return counts;
}

std::vector<std::uint32_t> oracle_h(const CorrectnessTensor& t) {
    std::vector<std::uint32_t> h(t.n(), 0);
    for (std::size_t i = 0; i < t.n(); ++i) {
        for (std::uint32_t j = 0; j < t.s(); ++j) {
            bool all = true;
            for (std::uint32_t k = 0; k < t.e(); ++k) all = all && t.get(i, j, k);
            h[i] += all ? 1 : 0;
        }
    }
    return h;
}

std::vector<std::uint32_t> oracle_f(const CorrectnessTensor& t, bool strict) {
    std::vector<std::uint32_t> f(t.n(), 0);
    for (std::size_t i = 0; i < t.n(); ++i) {
        for (std::uint32_t j = 0; j < t.s(); ++j) {
            if (t.e() == 0 || !t.get(i, j, t.e() - 1)) continue;
            bool learned = false;
            bool forgot = false;
            for (std::uint32_t k = 0; k < t.e(); ++k) {
                const bool ok = t.get(i, j, k);
                if (learned && !ok) forgot = true;
                learned = learned || ok;
            }
            if (!strict || !forgot) ++f[i];
        }
    }
    return f;
}

void enumerate_small_grids(std::size_t n, std::uint32_t s, std::uint32_t e,
                           const std::function<void(const CorrectnessTensor&)>& visit) {
    const std::size_t bits = n * s * e;
    if (bits > 24) throw Error(ErrorKind::TooLarge, "grid of " + std::to_string(bits) + " cells is too large to enumerate");
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(synth_id(i, n));
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
        CorrectnessTensor t(ids, s, e);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::uint32_t j = 0; j < s; ++j) {
                for (std::uint32_t k = 0; k < e; ++k) {
                    if ((code >> ((i * s + j) * e + k)) & 1u) t.set(i, j, k, true);
                }
            }
        }
        visit(t);
    }
}

}  // namespace prunekit
