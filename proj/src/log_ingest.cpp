// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/log_ingest.hpp"

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "prunekit/text.hpp"

namespace prunekit {
namespace {

constexpr std::size_t kBlockSize = 1 << 20;
constexpr std::string_view kMetaId = "__meta__";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg, std::size_t line) { throw Error(kind, msg, line); }

void check_prob(double p, std::size_t line) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        fail(ErrorKind::FieldOutOfRange, "gold_prob " + text::format_double(std::isfinite(p) ? p : -1.0) +
                                             " outside [0, 1]", line);
    }
}

// Resolves the two outcome forms into one bit.
bool resolve_outcome(std::optional<bool> correct, std::optional<std::int64_t> pred, std::optional<std::int64_t> gold,
                     std::size_t line) {
    if (pred.has_value() != gold.has_value()) {
        fail(ErrorKind::MalformedLine, "`pred` and `gold` must appear together", line);
    }
    if (pred) {
        const bool derived = *pred == *gold;
        if (correct && *correct != derived) {
            fail(ErrorKind::ConflictingOutcomeForms, "`correct` disagrees with pred == gold", line);
        }
        return derived;
    }
    if (!correct) fail(ErrorKind::MalformedLine, "record has neither `correct` nor `pred`/`gold`", line);
    return *correct;
}

std::uint32_t index_field(std::int64_t v, std::string_view name, std::size_t line) {
    if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) {
        fail(ErrorKind::FieldOutOfRange, std::string(name) + " = " + std::to_string(v) + " out of range", line);
    }
    return static_cast<std::uint32_t>(v);
}

std::int64_t parse_int(std::string_view s, std::string_view name, std::size_t line) {
    s = text::trim(s);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range) fail(ErrorKind::FieldOutOfRange, std::string(name) + " out of range", line);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        fail(ErrorKind::MalformedLine, std::string(name) + " is not an integer: '" + std::string(s) + "'", line);
    }
    return v;
}

}  // namespace

LogFormat parse_log_format(std::string_view name) {
    if (name == "jsonl") return LogFormat::Jsonl;
    if (name == "csv") return LogFormat::Csv;
    throw Error(ErrorKind::UsageError, "unknown log format '" + std::string(name) + "' (expected jsonl or csv)");
}

std::string_view to_string(MissingPolicy policy) noexcept {
    return policy == MissingPolicy::Strict ? "strict" : "treat-missing-as-incorrect";
}

MissingPolicy parse_missing_policy(std::string_view name) {
    if (name == "strict") return MissingPolicy::Strict;
    if (name == "treat-missing-as-incorrect" || name == "incorrect") return MissingPolicy::TreatMissingAsIncorrect;
    throw Error(ErrorKind::UsageError, "unknown missing policy '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// RecordReader

RecordReader::RecordReader(std::istream& in, LogFormat format) : in_(in), format_(format) {}

RecordReader::~RecordReader() = default;

bool RecordReader::next_line(std::string_view& line) {
    for (;;) {
        const std::size_t nl = buffer_.find('\n', pos_);
        if (nl != std::string::npos) {
            line = std::string_view(buffer_).substr(pos_, nl - pos_);
            pos_ = nl + 1;
            break;
        }
        if (eof_) {
            if (pos_ >= buffer_.size()) return false;
            line = std::string_view(buffer_).substr(pos_);
            pos_ = buffer_.size();
            break;
        }
        buffer_.erase(0, pos_);
        pos_ = 0;
        const std::size_t old = buffer_.size();
        buffer_.resize(old + kBlockSize);
        in_.read(buffer_.data() + old, static_cast<std::streamsize>(kBlockSize));
        const auto got = static_cast<std::size_t>(in_.gcount());
        buffer_.resize(old + got);
        sha_.update(std::string_view(buffer_).substr(old, got));
        if (got < kBlockSize) eof_ = true;
    }
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return true;
}

bool RecordReader::next(PredictionRecord& out) {
    std::string_view line;
    while (next_line(line)) {
        if (text::trim(line).empty()) continue;
        if (format_ == LogFormat::Csv && !have_header_) {
            parse_csv_header(line);
            continue;
        }
        out.gold_prob.reset();
        out.example_id.clear();
        parse_line(line, out);
        if (out.example_id == kMetaId) continue;
        return true;
    }
    return false;
}

std::string RecordReader::digest() { return sha_.hex(); }

void RecordReader::parse_csv_header(std::string_view line) {
    text::split_csv(line, fields_, unquoted_);
    for (std::size_t c = 0; c < fields_.size(); ++c) {
        const auto name = text::trim(fields_[c]);
        const int col = static_cast<int>(c);
        if (name == "example_id") col_id_ = col;
        else if (name == "run") col_run_ = col;
        else if (name == "epoch") col_epoch_ = col;
        else if (name == "correct") col_correct_ = col;
        else if (name == "pred") col_pred_ = col;
        else if (name == "gold") col_gold_ = col;
        else if (name == "gold_prob") col_prob_ = col;
    }
    if (col_id_ < 0 || col_run_ < 0 || col_epoch_ < 0) {
        fail(ErrorKind::MalformedLine, "CSV header must name example_id, run and epoch", line_no_);
    }
    if (col_correct_ < 0 && (col_pred_ < 0 || col_gold_ < 0)) {
        fail(ErrorKind::MalformedLine, "CSV header needs `correct` or both `pred` and `gold`", line_no_);
    }
    have_header_ = true;
}

void RecordReader::parse_line(std::string_view line, PredictionRecord& out) {
    const std::size_t ln = line_no_;
    std::optional<bool> correct;
    std::optional<std::int64_t> pred;
    std::optional<std::int64_t> gold;

    if (format_ == LogFormat::Jsonl) {
        // stack-backed pools: no heap traffic for ordinary record lines
        char value_buf[2048];
        char stack_buf[1024];
        rapidjson::MemoryPoolAllocator<> value_pool(value_buf, sizeof value_buf);
        rapidjson::MemoryPoolAllocator<> stack_pool(stack_buf, sizeof stack_buf);
        rapidjson::GenericDocument<rapidjson::UTF8<>, rapidjson::MemoryPoolAllocator<>, rapidjson::MemoryPoolAllocator<>>
            doc(&value_pool, sizeof stack_buf, &stack_pool);
        doc.Parse<rapidjson::kParseFullPrecisionFlag>(line.data(), line.size());
        if (doc.HasParseError()) {
            fail(ErrorKind::MalformedLine,
                 std::string("invalid JSON: ") + rapidjson::GetParseError_En(doc.GetParseError()), ln);
        }
        if (!doc.IsObject()) fail(ErrorKind::MalformedLine, "record is not a JSON object", ln);

        auto id = doc.FindMember("example_id");
        if (id == doc.MemberEnd() || !id->value.IsString()) {
            fail(ErrorKind::MalformedLine, "missing string field `example_id`", ln);
        }
        out.example_id.assign(id->value.GetString(), id->value.GetStringLength());
        if (out.example_id == kMetaId) return;

        auto index = [&](const char* name) -> std::uint32_t {
            auto it = doc.FindMember(name);
            if (it == doc.MemberEnd()) fail(ErrorKind::MalformedLine, std::string("missing field `") + name + "`", ln);
            if (!it->value.IsInt64()) {
                if (it->value.IsNumber()) fail(ErrorKind::FieldOutOfRange, std::string(name) + " is not a valid index", ln);
                fail(ErrorKind::MalformedLine, std::string(name) + " is not an integer", ln);
            }
            return index_field(it->value.GetInt64(), name, ln);
        };
        out.run = index("run");
        out.epoch = index("epoch");

        if (auto it = doc.FindMember("correct"); it != doc.MemberEnd() && !it->value.IsNull()) {
            if (it->value.IsBool()) {
                correct = it->value.GetBool();
            } else if (it->value.IsInt64()) {
                const auto v = it->value.GetInt64();
                if (v != 0 && v != 1) fail(ErrorKind::FieldOutOfRange, "correct must be 0 or 1", ln);
                correct = v == 1;
            } else {
                fail(ErrorKind::MalformedLine, "correct must be 0/1 or a boolean", ln);
            }
        }
        auto label = [&](const char* name) -> std::optional<std::int64_t> {
            auto it = doc.FindMember(name);
            if (it == doc.MemberEnd() || it->value.IsNull()) return std::nullopt;
            if (!it->value.IsInt64()) fail(ErrorKind::MalformedLine, std::string(name) + " must be an integer label", ln);
            return it->value.GetInt64();
        };
        pred = label("pred");
        gold = label("gold");

        if (auto it = doc.FindMember("gold_prob"); it != doc.MemberEnd() && !it->value.IsNull()) {
            if (!it->value.IsNumber()) fail(ErrorKind::MalformedLine, "gold_prob must be a number", ln);
            const double p = it->value.GetDouble();
            check_prob(p, ln);
            out.gold_prob = p;
        }
    } else {
        text::split_csv(line, fields_, unquoted_);
        auto field = [&](int col) -> std::string_view {
            if (col < 0 || static_cast<std::size_t>(col) >= fields_.size()) return {};
            return text::trim(fields_[static_cast<std::size_t>(col)]);
        };
        const int needed = std::max({col_id_, col_run_, col_epoch_});
        if (fields_.size() <= static_cast<std::size_t>(needed)) {
            fail(ErrorKind::MalformedLine, "expected at least " + std::to_string(needed + 1) + " fields", ln);
        }
        out.example_id = std::string(field(col_id_));
        if (out.example_id.empty()) fail(ErrorKind::MalformedLine, "empty example_id", ln);
        if (out.example_id == kMetaId) return;
        out.run = index_field(parse_int(field(col_run_), "run", ln), "run", ln);
        out.epoch = index_field(parse_int(field(col_epoch_), "epoch", ln), "epoch", ln);

        if (auto c = field(col_correct_); !c.empty()) {
            if (c == "true") correct = true;
            else if (c == "false") correct = false;
            else {
                const auto v = parse_int(c, "correct", ln);
                if (v != 0 && v != 1) fail(ErrorKind::FieldOutOfRange, "correct must be 0 or 1", ln);
                correct = v == 1;
            }
        }
        if (auto p = field(col_pred_); !p.empty()) pred = parse_int(p, "pred", ln);
        if (auto g = field(col_gold_); !g.empty()) gold = parse_int(g, "gold", ln);
        if (auto p = field(col_prob_); !p.empty()) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
            if (ec != std::errc{} || ptr != p.data() + p.size()) {
                fail(ErrorKind::MalformedLine, "gold_prob is not a number: '" + std::string(p) + "'", ln);
            }
            check_prob(v, ln);
            out.gold_prob = v;
        }
    }
    out.correct = resolve_outcome(correct, pred, gold, ln);
}

std::vector<PredictionRecord> parse_records(std::istream& in, LogFormat format) {
    RecordReader reader(in, format);
    std::vector<PredictionRecord> out;
    PredictionRecord rec;
    while (reader.next(rec)) out.push_back(rec);
    return out;
}

// ---------------------------------------------------------------------------
// Assembly

TensorBuilder::TensorBuilder(AssembleOptions options) : options_(options) {}

void TensorBuilder::add(const PredictionRecord& record) {
    if (options_.runs && record.run >= *options_.runs) {
        throw Error(ErrorKind::FieldOutOfRange, "run " + std::to_string(record.run) + " >= declared S = " +
                                                    std::to_string(*options_.runs));
    }
    if (options_.epochs && record.epoch >= *options_.epochs) {
        throw Error(ErrorKind::FieldOutOfRange, "epoch " + std::to_string(record.epoch) + " >= declared E = " +
                                                    std::to_string(*options_.epochs));
    }
    if (record.gold_prob) {
        const double p = *record.gold_prob;
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            throw Error(ErrorKind::FieldOutOfRange, "gold_prob outside [0, 1] for " + record.example_id);
        }
    }
    std::uint32_t example = 0;
    if (auto it = index_.find(std::string_view(record.example_id)); it != index_.end()) {
        example = it->second;
    } else {
        if (ids_.size() >= std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorKind::TooLarge, "too many examples");
        example = static_cast<std::uint32_t>(ids_.size());
        ids_.push_back(record.example_id);
        index_.emplace(record.example_id, example);
    }
    cells_.push_back(Cell{record.gold_prob ? *record.gold_prob : -1.0, example, record.run, record.epoch, record.correct});
    if (record.gold_prob) ++with_prob_;
}

AssembledLog TensorBuilder::finish() {
    const std::size_t n = ids_.size();
    std::uint32_t runs = options_.runs.value_or(0);
    std::uint32_t epochs = options_.epochs.value_or(0);
    if (!options_.runs || !options_.epochs) {
        std::uint32_t max_run = 0, max_epoch = 0;
        for (const auto& c : cells_) {
            max_run = std::max(max_run, c.run + 1);
            max_epoch = std::max(max_epoch, c.epoch + 1);
        }
        if (!options_.runs) runs = max_run;
        if (!options_.epochs) epochs = max_epoch;
    }
    if (epochs > kMaxEpochs) {
        throw Error(ErrorKind::GridTooLarge, "epoch count " + std::to_string(epochs) + " exceeds " +
                                                 std::to_string(kMaxEpochs));
    }
    if (with_prob_ != 0 && with_prob_ != cells_.size()) {
        throw Error(ErrorKind::PartialGoldProb, std::to_string(with_prob_) + " of " + std::to_string(cells_.size()) +
                                                    " records carry gold_prob; it must be all or none");
    }

    // rank[first-seen index] = lexicographic row
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return ids_[a] < ids_[b]; });
    std::vector<std::uint32_t> rank(n);
    std::vector<std::string> sorted_ids;
    sorted_ids.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        rank[order[r]] = static_cast<std::uint32_t>(r);
        sorted_ids.push_back(std::move(ids_[order[r]]));
    }
    ids_.clear();
    index_.clear();

    AssembledLog out;
    out.policy = options_.policy;
    out.correctness = CorrectnessTensor(std::move(sorted_ids), runs, epochs);
    if (with_prob_ > 0) out.gold_prob.emplace(n, runs, epochs);

    const std::size_t cells_per_row = std::size_t{runs} * epochs;
    std::vector<std::uint64_t> seen((n * cells_per_row + 63) / 64, 0);
    for (const auto& c : cells_) {
        const std::size_t row = rank[c.example];
        const std::size_t flat = row * cells_per_row + std::size_t{c.run} * epochs + c.epoch;
        auto& w = seen[flat / 64];
        const std::uint64_t bit = std::uint64_t{1} << (flat % 64);
        if (w & bit) {
            throw Error(ErrorKind::DuplicateCell, "duplicate record for (" + out.correctness.id(row) + ", run " +
                                                      std::to_string(c.run) + ", epoch " + std::to_string(c.epoch) + ")");
        }
        w |= bit;
        if (c.correct) out.correctness.set(row, c.run, c.epoch, true);
        if (out.gold_prob) out.gold_prob->set(row, c.run, c.epoch, c.prob);
    }

    const std::size_t expected = n * cells_per_row;
    const std::size_t holes = expected - cells_.size();
    if (holes > 0) {
        if (options_.policy == MissingPolicy::Strict) {
            std::string where;
            for (std::size_t flat = 0; flat < expected; ++flat) {
                if (!((seen[flat / 64] >> (flat % 64)) & 1u)) {
                    const std::size_t row = flat / cells_per_row;
                    const std::size_t rest = flat % cells_per_row;
                    where = " (first hole: " + out.correctness.id(row) + ", run " + std::to_string(rest / epochs) +
                            ", epoch " + std::to_string(rest % epochs) + ")";
                    break;
                }
            }
            throw Error(ErrorKind::IncompleteGrid, std::to_string(holes) + " of " + std::to_string(expected) +
                                                       " cells missing" + where);
        }
        out.missing_cells = holes;
    }
    cells_.clear();
    cells_.shrink_to_fit();
    return out;
}

AssembledLog assemble_tensor(std::span<const PredictionRecord> records, const AssembleOptions& options) {
    TensorBuilder builder(options);
    for (const auto& r : records) builder.add(r);
    return builder.finish();
}

AssembledLog load_log(const std::string& path, LogFormat format, const AssembleOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open log '" + path + "'");
    RecordReader reader(in, format);
    TensorBuilder builder(options);
    PredictionRecord rec;
    while (reader.next(rec)) {
        try {
            builder.add(rec);
        } catch (const Error& e) {
            throw Error(e.kind(), e.what(), reader.line());
        }
    }
    if (in.bad()) throw Error(ErrorKind::IoError, "read error on '" + path + "'");
    auto out = builder.finish();
    out.source_digest = reader.digest();
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::vector<PredictionRecord> to_records(const CorrectnessTensor& tensor, const GoldProbTensor* gold_prob) {
    std::vector<PredictionRecord> out;
    out.reserve(tensor.n() * tensor.s() * tensor.e());
    for (std::size_t i = 0; i < tensor.n(); ++i) {
        for (std::uint32_t j = 0; j < tensor.s(); ++j) {
            for (std::uint32_t k = 0; k < tensor.e(); ++k) {
                PredictionRecord r{tensor.id(i), j, k, tensor.get(i, j, k), std::nullopt};
                if (gold_prob) r.gold_prob = gold_prob->get(i, j, k);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

std::string to_jsonl(const PredictionRecord& r) {
    std::string line = "{\"example_id\":" + text::json_quote(r.example_id) + ",\"run\":" + std::to_string(r.run) +
                       ",\"epoch\":" + std::to_string(r.epoch) + ",\"correct\":" + (r.correct ? "1" : "0");
    if (r.gold_prob) line += ",\"gold_prob\":" + text::format_double(*r.gold_prob);
    line += '}';
    return line;
}

void write_records(std::ostream& out, std::span<const PredictionRecord> records, LogFormat format) {
    if (format == LogFormat::Jsonl) {
        for (const auto& r : records) out << to_jsonl(r) << '\n';
        return;
    }
    const bool probs = !records.empty() && records.front().gold_prob.has_value();
    out << "example_id,run,epoch,correct" << (probs ? ",gold_prob" : "") << '\n';
    for (const auto& r : records) {
        out << text::csv_field(r.example_id) << ',' << r.run << ',' << r.epoch << ',' << (r.correct ? 1 : 0);
        if (probs) out << ',' << (r.gold_prob ? text::format_double(*r.gold_prob) : std::string());
        out << '\n';
    }
}

}  // namespace prunekit
