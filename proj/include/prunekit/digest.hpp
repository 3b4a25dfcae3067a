// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace prunekit {

/// Incremental SHA-256. `hex()` returns "sha256:<64 hex digits>".
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(Sha256&&) noexcept;
    Sha256& operator=(Sha256&&) noexcept;

    void update(std::string_view bytes);
    std::string hex();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string sha256_hex(std::string_view bytes);

/// Digest of a whole file, or throws IoError.
std::string sha256_file(const std::string& path);

}  // namespace prunekit
