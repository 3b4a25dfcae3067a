// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/cli.hpp"

int main(int argc, char** argv) { return prunekit::cli::main(argc, argv); }
