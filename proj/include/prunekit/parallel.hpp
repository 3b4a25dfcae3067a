// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace prunekit::parallel {

/// Worker count: the override if set, else PRUNEKIT_THREADS, else hardware concurrency.
std::size_t thread_count();

/// 0 clears the override.
void set_thread_count(std::size_t threads);

/// Splits [0, n) into contiguous chunks whose boundaries are multiples of `align`
/// and runs `body(begin, end)` on each, one chunk per worker.
void for_each_range(std::size_t n, std::size_t align,
                    const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace prunekit::parallel
