// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace prunekit::text {

/// Shortest decimal string that round-trips the double.
std::string format_double(double value);

/// JSON string literal, quotes included.
std::string json_quote(std::string_view s);

/// Quotes a CSV field only when it contains a separator, quote, or line break.
std::string csv_field(std::string_view s);

/// Splits one CSV line; handles double-quoted fields with "" escapes.
/// Unquoted fields are views into `line`; quoted ones live in `storage`.
void split_csv(std::string_view line, std::vector<std::string_view>& fields, std::vector<std::string>& storage);

std::string_view trim(std::string_view s);

}  // namespace prunekit::text
