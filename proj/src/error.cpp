// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/error.hpp"

namespace prunekit {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::MalformedLine: return "MalformedLine";
        case ErrorKind::FieldOutOfRange: return "FieldOutOfRange";
        case ErrorKind::ConflictingOutcomeForms: return "ConflictingOutcomeForms";
        case ErrorKind::DuplicateCell: return "DuplicateCell";
        case ErrorKind::IncompleteGrid: return "IncompleteGrid";
        case ErrorKind::PartialGoldProb: return "PartialGoldProb";
        case ErrorKind::GridTooLarge: return "GridTooLarge";
        case ErrorKind::NoGoldProb: return "NoGoldProb";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::ScoreOutOfRange: return "ScoreOutOfRange";
        case ErrorKind::DegenerateS: return "DegenerateS";
        case ErrorKind::NoVariability: return "NoVariability";
        case ErrorKind::KOutOfRange: return "KOutOfRange";
        case ErrorKind::EmptySpec: return "EmptySpec";
        case ErrorKind::EmptySubset: return "EmptySubset";
        case ErrorKind::UnknownExample: return "UnknownExample";
        case ErrorKind::UnknownSubset: return "UnknownSubset";
        case ErrorKind::MissingFullBaseline: return "MissingFullBaseline";
        case ErrorKind::ProvenanceMismatch: return "ProvenanceMismatch";
        case ErrorKind::InfeasibleTarget: return "InfeasibleTarget";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::SpecParseError: return "SpecParseError";
        case ErrorKind::UsageError: return "UsageError";
        case ErrorKind::Internal: return "Internal";
    }
    return "Internal";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::IoError:
            return 2;
        case ErrorKind::SpecParseError:
        case ErrorKind::UsageError:
        case ErrorKind::EmptySpec:
        case ErrorKind::KOutOfRange:
        case ErrorKind::OutOfRange:
        case ErrorKind::ScoreOutOfRange:
        case ErrorKind::DegenerateS:
            return 4;
        case ErrorKind::Internal:
            return 5;
        default:
            return 3;
    }
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + message : message), kind_(kind), line_(line) {}

}  // namespace prunekit
