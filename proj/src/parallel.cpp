// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>
#include <vector>

namespace prunekit::parallel {
namespace {

std::atomic<std::size_t> g_override{0};

std::size_t from_env() {
    const char* v = std::getenv("PRUNEKIT_THREADS");
    if (v == nullptr) return 0;
    std::size_t threads = 0;
    auto [ptr, ec] = std::from_chars(v, v + std::strlen(v), threads);
    if (ec != std::errc{}) return 0;
    return threads;
}

}  // namespace

std::size_t thread_count() {
    if (auto o = g_override.load(); o > 0) return o;
    if (auto env = from_env(); env > 0) return env;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_thread_count(std::size_t threads) { g_override.store(threads); }

void for_each_range(std::size_t n, std::size_t align, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    align = std::max<std::size_t>(1, align);
    const std::size_t blocks = (n + align - 1) / align;
    const std::size_t workers = std::min(thread_count(), blocks);
    if (workers <= 1) {
        body(0, n);
        return;
    }
    const std::size_t per = (blocks + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * per * align);
        const std::size_t end = std::min(n, (w + 1) * per * align);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace prunekit::parallel
