// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prunekit/digest.hpp"
#include "prunekit/error.hpp"
#include "prunekit/tensor.hpp"

namespace prunekit {

enum class LogFormat { Jsonl, Csv };

LogFormat parse_log_format(std::string_view name);

/// One (example, run, epoch) observation.
///
/// Logs may state the outcome as `correct` or as a `pred`/`gold` label pair;
/// either way only the derived correctness bit is kept.
struct PredictionRecord {
    std::string example_id;
    std::uint32_t run = 0;
    std::uint32_t epoch = 0;
    bool correct = false;
    std::optional<double> gold_prob;

    bool operator==(const PredictionRecord&) const = default;
};

/// Streaming reader over a JSONL or CSV prediction log.
///
/// Lines are read in blocks and fed to a SHA-256 of the raw bytes, so `digest()`
/// after exhaustion identifies the exact input. Blank lines and records whose
/// example_id is "__meta__" are skipped. A parse failure throws Error with the
/// 1-based line number; the reader stays usable and resumes at the next line.
class RecordReader {
public:
    RecordReader(std::istream& in, LogFormat format);
    ~RecordReader();

    /// False at end of input.
    bool next(PredictionRecord& out);

    /// Line number of the most recently read line.
    std::size_t line() const noexcept { return line_no_; }

    /// Digest of every byte consumed so far; call after next() returned false.
    std::string digest();

private:
    bool next_line(std::string_view& line);
    void parse_line(std::string_view line, PredictionRecord& out);
    void parse_csv_header(std::string_view line);

    std::istream& in_;
    LogFormat format_;
    Sha256 sha_;
    std::string buffer_;
    std::size_t pos_ = 0;
    bool eof_ = false;
    std::size_t line_no_ = 0;
    std::string carry_;
    // CSV column positions, -1 when absent.
    bool have_header_ = false;
    int col_id_ = -1, col_run_ = -1, col_epoch_ = -1, col_correct_ = -1, col_pred_ = -1,
        col_gold_ = -1, col_prob_ = -1;
    std::vector<std::string_view> fields_;
    std::vector<std::string> unquoted_;
};

/// Parses a whole stream. Throws on the first bad line.
std::vector<PredictionRecord> parse_records(std::istream& in, LogFormat format);

enum class MissingPolicy { Strict, TreatMissingAsIncorrect };

std::string_view to_string(MissingPolicy policy) noexcept;
MissingPolicy parse_missing_policy(std::string_view name);

struct AssembleOptions {
    MissingPolicy policy = MissingPolicy::Strict;
    /// Declared grid; inferred as max index + 1 when absent.
    std::optional<std::uint32_t> runs;
    std::optional<std::uint32_t> epochs;
};

struct AssembledLog {
    CorrectnessTensor correctness;
    std::optional<GoldProbTensor> gold_prob;
    MissingPolicy policy = MissingPolicy::Strict;
    /// Cells filled in by TreatMissingAsIncorrect.
    std::size_t missing_cells = 0;
    /// "sha256:..." of the source bytes, empty when assembled from memory.
    std::string source_digest;
};

/// Incremental assembly; holds only compact per-record data, not the input text.
class TensorBuilder {
public:
    explicit TensorBuilder(AssembleOptions options = {});

    void add(const PredictionRecord& record);
    std::size_t record_count() const noexcept { return cells_.size(); }

    /// Throws DuplicateCell, IncompleteGrid, PartialGoldProb, FieldOutOfRange, GridTooLarge.
    AssembledLog finish();

private:
    struct Cell {
        double prob;  // negative when absent
        std::uint32_t example;
        std::uint32_t run;
        std::uint32_t epoch;
        bool correct;
    };
    struct IdHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };

    AssembleOptions options_;
    std::vector<std::string> ids_;  // first-seen order
    std::unordered_map<std::string, std::uint32_t, IdHash, std::equal_to<>> index_;
    std::vector<Cell> cells_;
    std::size_t with_prob_ = 0;
};

AssembledLog assemble_tensor(std::span<const PredictionRecord> records, const AssembleOptions& options = {});

/// Reads, validates and assembles a log file. Throws IoError if unreadable.
AssembledLog load_log(const std::string& path, LogFormat format, const AssembleOptions& options = {});

/// Every cell as a record, row-major (example, run, epoch).
std::vector<PredictionRecord> to_records(const CorrectnessTensor& tensor, const GoldProbTensor* gold_prob = nullptr);

/// Canonical JSONL line (no trailing newline).
std::string to_jsonl(const PredictionRecord& record);
void write_records(std::ostream& out, std::span<const PredictionRecord> records, LogFormat format);

}  // namespace prunekit
