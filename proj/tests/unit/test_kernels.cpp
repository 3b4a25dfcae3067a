// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

// Every available backend against the scalar reference, bit for bit.

#include <algorithm>
#include <cstring>
#include <numeric>

#include "helpers.hpp"
#include "prunekit/kernels.hpp"

using namespace prunekit;
using namespace prunekit::kernels;

namespace {

std::vector<std::uint64_t> random_words(std::size_t n, std::uint64_t seed, double density) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(density);
    std::vector<std::uint64_t> w(n);
    for (auto& x : w) {
        for (int b = 0; b < 64; ++b) x |= std::uint64_t{bit(rng)} << b;
    }
    return w;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar is always available and listed first") {
    const auto b = available_backends();
    REQUIRE_FALSE(b.empty());
    CHECK(b.front() == Backend::Scalar);
    CHECK(scalar_table().backend == Backend::Scalar);
    CHECK(to_string(Backend::Avx2) == "avx2");
}

TEST_CASE("unavailable backend is rejected") {
    const auto b = available_backends();
    for (auto want : {Backend::Avx2, Backend::Neon}) {
        if (std::find(b.begin(), b.end(), want) == b.end()) {
            CHECK(testutil::kind_of([&] { (void)table_for(want); }) == ErrorKind::OutOfRange);
        }
    }
}

TEST_CASE("forcing a backend changes active()") {
    force_backend(Backend::Scalar);
    CHECK(active().backend == Backend::Scalar);
    clear_forced_backend();
}

TEST_CASE("count_runs equivalence across backends") {
    const std::vector<std::uint32_t> epoch_counts{1, 2, 3, 5, 7, 16, 21, 31, 32, 33, 63, 64};
    const std::vector<std::size_t> sizes{0, 1, 2, 3, 4, 5, 7, 8, 9, 31, 64, 257};
    for (auto backend : available_backends()) {
        const auto& k = table_for(backend);
        CAPTURE(to_string(backend));
        for (auto e : epoch_counts) {
            const std::uint32_t per_word = 64 / e;
            for (std::uint32_t runs = 1; runs <= per_word; runs = runs < 4 ? runs + 1 : runs * 2 + 1) {
                for (auto n : sizes) {
                    for (double density : {0.5, 0.9, 0.99}) {
                        const auto words = random_words(n, e * 1000 + runs * 10 + n, density);
                        for (auto rule : {RunRule::AllCorrect, RunRule::FinalCorrect, RunRule::SettledSuffix}) {
                            std::vector<std::uint32_t> want(n, 3), got(n, 3);
                            scalar_table().count_runs({words.data(), runs, e}, rule, n, want.data());
                            k.count_runs({words.data(), runs, e}, rule, n, got.data());
                            CHECK(want == got);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("scalar count_runs matches the literal rules") {
    // One run per word, E = 4, every pattern.
    std::vector<std::uint64_t> words(16);
    for (std::uint64_t p = 0; p < 16; ++p) words[p] = p;
    std::vector<std::uint32_t> all(16), fin(16), settled(16);
    scalar_table().count_runs({words.data(), 1, 4}, RunRule::AllCorrect, 16, all.data());
    scalar_table().count_runs({words.data(), 1, 4}, RunRule::FinalCorrect, 16, fin.data());
    scalar_table().count_runs({words.data(), 1, 4}, RunRule::SettledSuffix, 16, settled.data());
    for (std::uint64_t p = 0; p < 16; ++p) {
        CAPTURE(p);
        CHECK(all[p] == (p == 15 ? 1u : 0u));
        CHECK(fin[p] == ((p >> 3) & 1u));
        const bool block = p == 8 || p == 12 || p == 14 || p == 15;
        CHECK(settled[p] == (block ? 1u : 0u));
    }
}

TEST_CASE("moments equivalence across backends") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t checkpoints : {1u, 2u, 3u, 5u, 18u, 31u, 64u}) {
        for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 130u}) {
            std::vector<double> planes(checkpoints * n);
            for (auto& x : planes) x = u(rng);
            // a few constant and two-valued examples
            for (std::size_t c = 0; c < checkpoints; ++c) {
                planes[c * n] = 0.7;
                if (n > 1) planes[c * n + 1] = (c % 2) ? 1.0 : 0.0;
            }
            std::vector<double> m0(n), s0(n);
            scalar_table().moments(planes.data(), n, checkpoints, n, m0.data(), s0.data());
            CHECK(m0[0] == 0.7);
            CHECK(s0[0] == 0.0);
            for (auto backend : available_backends()) {
                CAPTURE(to_string(backend));
                std::vector<double> m(n), s(n);
                table_for(backend).moments(planes.data(), n, checkpoints, n, m.data(), s.data());
                CHECK(same_bits(m, m0));
                CHECK(same_bits(s, s0));
            }
        }
    }
}

TEST_CASE("moments do not depend on checkpoint order") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 37;
    const std::size_t checkpoints = 18;
    std::vector<double> planes(checkpoints * n);
    for (auto& x : planes) x = u(rng);
    std::vector<double> m0(n), s0(n);
    scalar_table().moments(planes.data(), n, checkpoints, n, m0.data(), s0.data());
    std::vector<std::size_t> order(checkpoints);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<double> shuffled(planes.size());
        for (std::size_t c = 0; c < checkpoints; ++c) {
            std::copy_n(planes.begin() + static_cast<std::ptrdiff_t>(order[c] * n), n,
                        shuffled.begin() + static_cast<std::ptrdiff_t>(c * n));
        }
        for (auto backend : available_backends()) {
            std::vector<double> m(n), s(n);
            table_for(backend).moments(shuffled.data(), n, checkpoints, n, m.data(), s.data());
            CHECK(same_bits(m, m0));
            CHECK(same_bits(s, s0));
        }
    }
}
