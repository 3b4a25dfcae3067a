// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "prunekit/scores.hpp"
#include "prunekit/subsets.hpp"
#include "prunekit/synth.hpp"

using namespace prunekit;
using testutil::kind_of;

TEST_CASE("synth ids sort like their indices") {
    CHECK(synth_id(42, 10000) == "ex0042");
    CHECK(synth_id(0, 1) == "ex0");
    CHECK(synth_id(9, 10) == "ex9");
    CHECK(synth_id(10, 11) == "ex10");
    CHECK(synth_id(5, 11) == "ex05");
}

TEST_CASE("percentages become counts with the residual in bucket S") {
    const auto c = histogram_from_percentages(std::vector<double>{6.57, 3.21, 3.15, 3.70, 5.42, 11.58, 66.38}, 10000);
    CHECK(c == std::vector<std::uint64_t>{657, 321, 315, 370, 542, 1158, 6637});
    CHECK(kind_of([] { (void)histogram_from_percentages(std::vector<double>{60, 50, 0}, 100); }) ==
          ErrorKind::InfeasibleTarget);
}

TEST_CASE("constructive mode realizes the target histogram exactly") {
    SynthConfig c;
    c.n = 10000;
    c.s = 6;
    c.e = 3;
    c.seed = 1;
    c.emit_gold_prob = true;
    c.target_histogram = std::vector<std::uint64_t>{657, 321, 315, 370, 542, 1158, 6637};
    const auto log = assemble_tensor(generate(c));
    const auto h = h_score(log.correctness);
    CHECK(bucket_histogram(h, 6).counts == *c.target_histogram);
    // correct cells carry high probabilities, incorrect ones low
    for (std::size_t i = 0; i < 50; ++i) {
        for (std::uint32_t j = 0; j < 6; ++j) {
            for (std::uint32_t k = 0; k < 3; ++k) {
                const double p = log.gold_prob->get(i, j, k);
                CHECK((log.correctness.get(i, j, k) ? p >= 0.5 : p < 0.5));
            }
        }
    }
}

TEST_CASE("constructive mode works for wide epochs and other S") {
    for (std::uint32_t e : {1u, 7u, 64u}) {
        SynthConfig c;
        c.n = 30;
        c.s = 4;
        c.e = e;
        c.seed = e;
        c.target_histogram = std::vector<std::uint64_t>{3, 4, 5, 6, 12};
        const auto log = assemble_tensor(generate(c));
        CHECK(bucket_histogram(h_score(log.correctness), 4).counts == *c.target_histogram);
    }
}

TEST_CASE("infeasible targets") {
    SynthConfig c;
    c.n = 10;
    c.s = 2;
    c.target_histogram = std::vector<std::uint64_t>{5, 5, 0, 0};
    CHECK(kind_of([&] { validate(c); }) == ErrorKind::InfeasibleTarget);
    c.target_histogram = std::vector<std::uint64_t>{5, 4, 0};
    CHECK(kind_of([&] { validate(c); }) == ErrorKind::InfeasibleTarget);
    SynthConfig m;
    m.n = 3;
    m.mix = {{0.5, 0.5, 0.0}};
    CHECK(kind_of([&] { validate(m); }) == ErrorKind::OutOfRange);
    m.mix = {};
    CHECK(kind_of([&] { validate(m); }) == ErrorKind::OutOfRange);
    m.mix = {{1.0, 0.5, 0.0}};
    m.e = 65;
    CHECK(kind_of([&] { validate(m); }) == ErrorKind::OutOfRange);
}

TEST_CASE("stochastic generation is deterministic and forced cases behave") {
    SynthConfig c;
    c.n = 1;
    c.s = 6;
    c.e = 3;
    c.mix = {{1.0, 1.0, 0.0}};
    c.seed = 3;
    CHECK(h_score(assemble_tensor(generate(c)).correctness) == std::vector<std::uint32_t>{6});
    c.mix = {{1.0, 0.0, 0.0}};
    CHECK(h_score(assemble_tensor(generate(c)).correctness) == std::vector<std::uint32_t>{0});
    c.n = 200;
    c.mix = {{0.5, 0.3, 0.2}, {0.5, 0.6, 0.1}};
    c.emit_gold_prob = true;
    CHECK(generate(c) == generate(c));
    auto other = c;
    other.seed = 4;
    CHECK(generate(c) != generate(other));
}

TEST_CASE("records come out example by example, run-major") {
    SynthConfig c;
    c.n = 2;
    c.s = 2;
    c.e = 2;
    c.mix = {{1.0, 0.5, 0.0}};
    const auto r = generate(c);
    REQUIRE(r.size() == 8);
    CHECK(r[0].example_id == "ex0");
    CHECK(r[1].epoch == 1);
    CHECK(r[2].run == 1);
    CHECK(r[4].example_id == "ex1");
}

TEST_CASE("higher per-epoch gain never lowers expected H") {
    auto mean_h = [](double gain) {
        SynthConfig c;
        c.n = 10000;
        c.s = 6;
        c.e = 3;
        c.mix = {{1.0, 0.4, gain}};
        c.seed = 77;
        const auto h = h_score(assemble_tensor(generate(c)).correctness);
        double sum = 0.0, sq = 0.0;
        for (auto v : h) {
            sum += v;
            sq += double(v) * v;
        }
        const double m = sum / 10000.0;
        return std::pair{m, std::sqrt((sq / 10000.0 - m * m) / 10000.0)};
    };
    double prev = -1.0, prev_se = 0.0;
    for (double gain : {0.0, 0.05, 0.1, 0.2, 0.3}) {
        const auto [m, se] = mean_h(gain);
        CHECK(m >= prev - 3.0 * std::sqrt(se * se + prev_se * prev_se));
        prev = m;
        prev_se = se;
    }
}

TEST_CASE("oracles on hand-built grids") {
    const auto t = testutil::tensor_of({{"101", "011", "111"}});
    CHECK(oracle_h(t) == std::vector<std::uint32_t>{1});
    CHECK(oracle_f(t, false) == std::vector<std::uint32_t>{3});
    CHECK(oracle_f(t, true) == std::vector<std::uint32_t>{2});
}

TEST_CASE("grid enumeration") {
    std::size_t count = 0;
    enumerate_small_grids(1, 1, 1, [&](const CorrectnessTensor&) { ++count; });
    CHECK(count == 2);
    count = 0;
    enumerate_small_grids(1, 2, 1, [&](const CorrectnessTensor&) { ++count; });
    CHECK(count == 4);
    std::set<std::uint64_t> seen;
    enumerate_small_grids(2, 2, 2, [&](const CorrectnessTensor& t) {
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::uint32_t j = 0; j < 2; ++j) {
                for (std::uint32_t k = 0; k < 2; ++k) code |= std::uint64_t{t.get(i, j, k)} << ((i * 2 + j) * 2 + k);
            }
        }
        seen.insert(code);
    });
    CHECK(seen.size() == 256);
    CHECK(kind_of([] { enumerate_small_grids(5, 5, 1, [](const CorrectnessTensor&) {}); }) == ErrorKind::TooLarge);
}
