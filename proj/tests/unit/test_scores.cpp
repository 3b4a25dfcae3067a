// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "prunekit/parallel.hpp"
#include "prunekit/scores.hpp"
#include "prunekit/synth.hpp"

using namespace prunekit;
using testutil::kind_of;
using testutil::tensor_of;

namespace {

GoldProbTensor probs_of(const std::vector<std::vector<double>>& rows, std::uint32_t s, std::uint32_t e) {
    GoldProbTensor p(rows.size(), s, e);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::uint32_t j = 0; j < s; ++j) {
            for (std::uint32_t k = 0; k < e; ++k) p.set(i, j, k, rows[i][j * e + k]);
        }
    }
    return p;
}

AssembledLog stochastic_log(std::size_t n, std::uint32_t s, std::uint32_t e, std::uint64_t seed, bool probs = true) {
    SynthConfig c;
    c.n = n;
    c.s = s;
    c.e = e;
    c.mix = {{0.4, 0.2, 0.3}, {0.4, 0.7, 0.1}, {0.2, 0.95, 0.0}};
    c.seed = seed;
    c.emit_gold_prob = probs;
    return assemble_tensor(generate(c));
}

}  // namespace

TEST_CASE("h_score worked examples") {
    CHECK(h_score(tensor_of({{"11", "10"}})) == std::vector<std::uint32_t>{1});
    CHECK(h_score(tensor_of({{"111", "111", "111", "111", "111", "111"}})) == std::vector<std::uint32_t>{6});
    CHECK(h_score(tensor_of({{"01", "10", "00"}})) == std::vector<std::uint32_t>{0});
}

TEST_CASE("f_score worked examples") {
    CHECK(f_score(tensor_of({{"11", "01"}})) == std::vector<std::uint32_t>{2});
    CHECK(f_score(tensor_of({{"00", "00"}})) == std::vector<std::uint32_t>{0});
    CHECK(f_score(tensor_of({{"101"}}), FScoreMode::Suffix) == std::vector<std::uint32_t>{1});
    CHECK(f_score(tensor_of({{"101"}}), FScoreMode::Strict) == std::vector<std::uint32_t>{0});
    CHECK(f_score(tensor_of({{"011"}}), FScoreMode::Strict) == std::vector<std::uint32_t>{1});
}

TEST_CASE("cartography worked examples") {
    {
        const auto p = probs_of({{0.7, 0.7, 0.7, 0.7, 0.7, 0.7}}, 2, 3);
        const auto c = cartography(&p);
        CHECK(c.confidence[0] == 0.7);
        CHECK(c.variability[0] == 0.0);
    }
    {
        const auto p = probs_of({{0.0, 1.0}}, 1, 2);
        const auto c = cartography(&p);
        CHECK(c.confidence[0] == 0.5);
        CHECK(c.variability[0] == 0.5);
    }
    {
        const auto p = probs_of({{0.2, 0.5, 0.8}}, 1, 3);
        const auto c = cartography(&p);
        CHECK(c.confidence[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(c.variability[0] == doctest::Approx(std::sqrt(0.06)).epsilon(1e-12));
        CHECK(c.variability[0] == doctest::Approx(0.2449).epsilon(1e-4));
    }
    CHECK(kind_of([] { (void)cartography(static_cast<const GoldProbTensor*>(nullptr)); }) == ErrorKind::NoGoldProb);
}

TEST_CASE("truncation examples") {
    const auto t = tensor_of({{"11", "10"}});
    CHECK(h_score(truncate_grid(t, 2, 1)) == std::vector<std::uint32_t>{2});
    CHECK(truncate_grid(t, 2, 2) == t);
    const auto log = stochastic_log(50, 6, 3, 1);
    ScoreOptions o;
    o.s_used = 2;
    const auto table = compute_scores(log, o);
    CHECK(table.s == 2);
    CHECK(table.provenance.source_s == 6);
    CHECK(*std::max_element(table.h.begin(), table.h.end()) <= 2);
    CHECK(kind_of([&] { (void)truncate_grid(log.correctness, 7, 3); }) == ErrorKind::OutOfRange);
}

TEST_CASE("kernel scores equal the oracles on random tensors of many shapes") {
    for (std::uint32_t e : {1u, 2u, 3u, 8u, 21u, 22u, 40u, 64u}) {
        for (std::uint32_t s : {1u, 2u, 6u, 7u, 13u}) {
            const auto t = testutil::random_tensor(203, s, e, s * 100 + e, e > 8 ? 0.97 : 0.7);
            CAPTURE(s);
            CAPTURE(e);
            CHECK(h_score(t) == oracle_h(t));
            CHECK(f_score(t, FScoreMode::Suffix) == oracle_f(t, false));
            CHECK(f_score(t, FScoreMode::Strict) == oracle_f(t, true));
        }
    }
}

TEST_CASE("range, dominance and monotonicity") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = testutil::random_tensor(60, 6, 3, 1000 + trial);
        const auto h = h_score(t);
        const auto fs = f_score(t, FScoreMode::Suffix);
        const auto ft = f_score(t, FScoreMode::Strict);
        for (std::size_t i = 0; i < t.n(); ++i) {
            CHECK(h[i] <= 6);
            CHECK(ft[i] >= h[i]);
            CHECK(fs[i] >= ft[i]);
        }
        // flip one incorrect cell to correct
        std::uniform_int_distribution<std::size_t> pick_i(0, t.n() - 1);
        std::uniform_int_distribution<std::uint32_t> pick_j(0, 5), pick_k(0, 2);
        for (int f = 0; f < 50; ++f) {
            const auto i = pick_i(rng);
            const auto j = pick_j(rng);
            const auto k = pick_k(rng);
            if (t.get(i, j, k)) continue;
            auto flipped = t;
            flipped.set(i, j, k, true);
            CHECK(h_score(flipped)[i] >= h[i]);
            CHECK(f_score(flipped, FScoreMode::Suffix)[i] >= fs[i]);
        }
    }
}

TEST_CASE("strict F is not monotone under flips") {
    // relearning after a lapse breaks the settled suffix
    CHECK(f_score(tensor_of({{"001"}}), FScoreMode::Strict) == std::vector<std::uint32_t>{1});
    CHECK(f_score(tensor_of({{"101"}}), FScoreMode::Strict) == std::vector<std::uint32_t>{0});
}

TEST_CASE("compute_scores is independent of thread count") {
    const auto log = stochastic_log(3001, 6, 3, 8);
    parallel::set_thread_count(1);
    const auto one = compute_scores(log);
    parallel::set_thread_count(8);
    const auto eight = compute_scores(log);
    parallel::set_thread_count(0);
    CHECK(one == eight);
    REQUIRE(one.variability.has_value());
    for (std::size_t i = 0; i < one.n(); ++i) {
        CHECK((*one.variability)[i] >= 0.0);
        CHECK((*one.confidence)[i] >= 0.0);
        CHECK((*one.confidence)[i] <= 1.0);
    }
}

TEST_CASE("scores without gold_prob carry no cartography") {
    const auto table = compute_scores(stochastic_log(10, 3, 2, 4, false));
    CHECK_FALSE(table.confidence.has_value());
    CHECK_FALSE(table.variability.has_value());
}

TEST_CASE("score export round trips in both formats") {
    auto log = stochastic_log(77, 6, 3, 12);
    log.source_digest = "sha256:feed";
    ScoreOptions o;
    o.f_mode = FScoreMode::Strict;
    auto table = compute_scores(log, o);
    table.provenance.run_manifest = "run_manifest.score.json";
    for (auto fmt : {ScoreFormat::Csv, ScoreFormat::Jsonl}) {
        std::stringstream text;
        write_scores(text, table, fmt);
        const auto back = read_scores(text);
        CHECK(back == table);
    }
    const auto plain = compute_scores(stochastic_log(5, 2, 2, 1, false));
    std::stringstream text;
    write_scores(text, plain, ScoreFormat::Csv);
    CHECK(read_scores(text) == plain);
}

TEST_CASE("score import rejects broken files") {
    CHECK(kind_of([] {
              std::istringstream in("");
              (void)read_scores(in);
          }) == ErrorKind::MalformedLine);
    const auto table = compute_scores(stochastic_log(4, 2, 2, 1, false));
    std::stringstream text;
    write_scores(text, table, ScoreFormat::Csv);
    auto body = text.str();
    const auto pos = body.find("\nex1,");
    auto bad = body;
    bad.replace(pos + 5, 1, "9");
    CHECK(kind_of([&] {
              std::istringstream in(bad);
              (void)read_scores(in);
          }) == ErrorKind::ScoreOutOfRange);
    CHECK(kind_of([] { (void)read_scores_file("/nonexistent/scores.csv"); }) == ErrorKind::IoError);
}
