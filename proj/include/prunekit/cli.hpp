// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace prunekit::cli {

/// Runs one command; `args` excludes the program name. Returns the process exit code.
/// Errors are written to `err` as {"error":{"kind":...,"message":...}}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace prunekit::cli
