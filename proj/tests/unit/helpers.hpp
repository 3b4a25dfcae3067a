// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "prunekit/error.hpp"
#include "prunekit/synth.hpp"
#include "prunekit/tensor.hpp"

namespace testutil {

// rows[i][j] is the epoch pattern of run j as a string of '0'/'1', epoch 0 first.
inline prunekit::CorrectnessTensor tensor_of(const std::vector<std::vector<std::string>>& rows) {
    const auto s = static_cast<std::uint32_t>(rows.empty() ? 0 : rows[0].size());
    const auto e = static_cast<std::uint32_t>(s == 0 ? 0 : rows[0][0].size());
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back(prunekit::synth_id(i, rows.size()));
    prunekit::CorrectnessTensor t(ids, s, e);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::uint32_t j = 0; j < s; ++j) {
            for (std::uint32_t k = 0; k < e; ++k) t.set(i, j, k, rows[i][j][k] == '1');
        }
    }
    return t;
}

inline prunekit::CorrectnessTensor random_tensor(std::size_t n, std::uint32_t s, std::uint32_t e, std::uint64_t seed,
                                                 double density = 0.7) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(density);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(prunekit::synth_id(i, n));
    prunekit::CorrectnessTensor t(ids, s, e);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < s; ++j) {
            for (std::uint32_t k = 0; k < e; ++k) t.set(i, j, k, bit(rng));
        }
    }
    return t;
}

inline prunekit::ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const prunekit::Error& e) {
        return e.kind();
    }
    FAIL("expected prunekit::Error");
    return prunekit::ErrorKind::Internal;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("prunekit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace testutil
