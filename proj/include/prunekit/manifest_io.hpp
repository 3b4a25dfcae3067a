// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "prunekit/subsets.hpp"

namespace prunekit {

/// Manifest JSON text. When `member_file` is set the ids are not embedded;
/// the object references that file instead (written separately by the caller).
std::string manifest_to_json(const SubsetManifest& manifest, const std::optional<std::string>& member_file = std::nullopt);

/// Newline-delimited ids, the `ids-only` format.
std::string manifest_ids(const SubsetManifest& manifest);

/// Parses a manifest file; a `member_file` reference is resolved relative to the file.
SubsetManifest read_manifest_file(const std::filesystem::path& path);

SubsetManifest manifest_from_json(const std::string& text, const std::filesystem::path& base_dir = {});

}  // namespace prunekit
