// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"
#include "prunekit/tensor.hpp"

using namespace prunekit;
using testutil::kind_of;

TEST_CASE("packing layout") {
    CorrectnessTensor t({"a", "b"}, 6, 3);
    CHECK(t.runs_per_word() == 21);
    CHECK(t.word_count() == 1);
    t.set(1, 2, 1, true);
    CHECK(t.get(1, 2, 1));
    CHECK_FALSE(t.get(0, 2, 1));
    CHECK(t.plane(0)[1] == (std::uint64_t{1} << (2 * 3 + 1)));
    CHECK(t.run_bits(1, 2) == 0b010);
    t.set(1, 2, 1, false);
    CHECK(t.plane(0)[1] == 0);
}

TEST_CASE("runs spill into further words") {
    CorrectnessTensor t({"a"}, 5, 30);
    CHECK(t.runs_per_word() == 2);
    CHECK(t.word_count() == 3);
    CHECK(t.runs_in_word(2) == 1);
    t.set(0, 4, 29, true);
    CHECK(t.run_bits(0, 4) == (std::uint64_t{1} << 29));
    CorrectnessTensor wide({"a"}, 3, 64);
    for (std::uint32_t k = 0; k < 64; ++k) wide.set(0, 1, k, true);
    CHECK(wide.run_bits(0, 1) == ~std::uint64_t{0});
    CHECK(wide.run_bits(0, 0) == 0);
}

TEST_CASE("construction guards") {
    CHECK(kind_of([] { CorrectnessTensor({"a"}, 1, 65); }) == ErrorKind::GridTooLarge);
    CHECK(kind_of([] { CorrectnessTensor({"b", "a"}, 1, 1); }) == ErrorKind::Internal);
    CHECK(kind_of([] { CorrectnessTensor({"a", "a"}, 1, 1); }) == ErrorKind::Internal);
}

TEST_CASE("index_of") {
    CorrectnessTensor t({"a", "c", "e"}, 1, 1);
    CHECK(t.index_of("c") == 1u);
    CHECK_FALSE(t.index_of("b").has_value());
}

TEST_CASE("truncation keeps the leading runs and epochs") {
    const auto t = testutil::random_tensor(9, 6, 3, 4);
    CHECK(t.truncated(6, 3) == t);
    const auto cut = t.truncated(4, 2);
    CHECK(cut.s() == 4);
    CHECK(cut.e() == 2);
    for (std::size_t i = 0; i < t.n(); ++i) {
        for (std::uint32_t j = 0; j < 4; ++j) {
            for (std::uint32_t k = 0; k < 2; ++k) CHECK(cut.get(i, j, k) == t.get(i, j, k));
        }
    }
    CHECK(kind_of([&] { (void)t.truncated(7, 3); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([&] { (void)t.truncated(0, 3); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([&] { (void)t.truncated(6, 4); }) == ErrorKind::OutOfRange);
}

TEST_CASE("gold-probability planes") {
    GoldProbTensor p(3, 2, 2);
    p.set(1, 1, 0, 0.25);
    CHECK(p.get(1, 1, 0) == 0.25);
    CHECK(p.planes()[(1 * 2 + 0) * 3 + 1] == 0.25);
    CHECK(kind_of([&] { p.set(0, 0, 0, 1.5); }) == ErrorKind::FieldOutOfRange);
    CHECK(kind_of([&] { p.set(0, 0, 0, std::nan("")); }) == ErrorKind::FieldOutOfRange);
    p.set(0, 0, 0, -0.0);
    CHECK_FALSE(std::signbit(p.get(0, 0, 0)));
    const auto cut = p.truncated(2, 1);
    CHECK(cut.get(1, 1, 0) == 0.25);
    CHECK(cut.checkpoints() == 2);
}
