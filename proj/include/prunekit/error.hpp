// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prunekit {

enum class ErrorKind {
    IoError,
    MalformedLine,
    FieldOutOfRange,
    ConflictingOutcomeForms,
    DuplicateCell,
    IncompleteGrid,
    PartialGoldProb,
    GridTooLarge,
    NoGoldProb,
    OutOfRange,
    ScoreOutOfRange,
    DegenerateS,
    NoVariability,
    KOutOfRange,
    EmptySpec,
    EmptySubset,
    UnknownExample,
    UnknownSubset,
    MissingFullBaseline,
    ProvenanceMismatch,
    InfeasibleTarget,
    TooLarge,
    SpecParseError,
    UsageError,
    Internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code for an error kind: 2 I/O, 3 validation, 4 spec/parameters, 5 internal.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> line = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    /// 1-based input line the error refers to, when it came from a parser.
    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> line_;
};

}  // namespace prunekit
