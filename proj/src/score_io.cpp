// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

// Score export: CSV or JSONL, one row per example in id order, preceded by a
// provenance line that the subset and report stages read back.

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prunekit/scores.hpp"
#include "prunekit/text.hpp"

namespace prunekit {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kCsvMarker = "# prunekit-scores ";
constexpr std::string_view kFormatTag = "prunekit-scores/v1";

json meta_of(const ScoreTable& t) {
    return json{
        {"format", kFormatTag},
        {"n", t.n()},
        {"s", t.s},
        {"e", t.e},
        {"source_s", t.provenance.source_s},
        {"source_e", t.provenance.source_e},
        {"f_mode", to_string(t.provenance.f_mode)},
        {"missing_policy", to_string(t.provenance.missing_policy)},
        {"missing_cells", t.provenance.missing_cells},
        {"log_digest", t.provenance.log_digest},
        {"run_manifest", t.provenance.run_manifest},
        {"cartography", t.variability ? "population-std-over-all-checkpoints" : "absent"},
    };
}

void apply_meta(const json& m, ScoreTable& t) {
    try {
        if (m.at("format").get<std::string>() != kFormatTag) {
            throw Error(ErrorKind::MalformedLine, "unsupported score file format", 1);
        }
        t.s = m.at("s").get<std::uint32_t>();
        t.e = m.at("e").get<std::uint32_t>();
        t.provenance.source_s = m.at("source_s").get<std::uint32_t>();
        t.provenance.source_e = m.at("source_e").get<std::uint32_t>();
        t.provenance.f_mode = parse_fscore_mode(m.at("f_mode").get<std::string>());
        t.provenance.missing_policy = parse_missing_policy(m.at("missing_policy").get<std::string>());
        t.provenance.missing_cells = m.at("missing_cells").get<std::size_t>();
        t.provenance.log_digest = m.at("log_digest").get<std::string>();
        t.provenance.run_manifest = m.value("run_manifest", std::string{});
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedLine, std::string("bad score provenance: ") + e.what(), 1);
    }
}

std::uint32_t parse_score(std::string_view s, std::uint32_t bound, std::size_t line) {
    s = text::trim(s);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::MalformedLine, "bad score '" + std::string(s) + "'", line);
    }
    if (v > bound) throw Error(ErrorKind::ScoreOutOfRange, "score " + std::to_string(v) + " > S", line);
    return v;
}

std::optional<double> parse_real(std::string_view s, std::size_t line) {
    s = text::trim(s);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::MalformedLine, "bad number '" + std::string(s) + "'", line);
    }
    return v;
}

void push_cartography(ScoreTable& t, std::optional<double> conf, std::optional<double> var, std::size_t line) {
    if (conf.has_value() != var.has_value()) {
        throw Error(ErrorKind::MalformedLine, "confidence and variability must both be present or absent", line);
    }
    const bool first = t.ids.size() == 1;
    if (first && conf) {
        t.confidence.emplace();
        t.variability.emplace();
    }
    if (conf.has_value() != t.confidence.has_value()) {
        throw Error(ErrorKind::PartialGoldProb, "cartography columns present on some rows only", line);
    }
    if (conf) {
        t.confidence->push_back(*conf);
        t.variability->push_back(*var);
    }
}

void check_order(const ScoreTable& t, std::size_t line) {
    const auto n = t.ids.size();
    if (n >= 2 && !(t.ids[n - 2] < t.ids[n - 1])) {
        throw Error(ErrorKind::MalformedLine, "score rows must be in strictly increasing example_id order", line);
    }
}

}  // namespace

ScoreFormat parse_score_format(std::string_view name) {
    if (name == "csv") return ScoreFormat::Csv;
    if (name == "jsonl") return ScoreFormat::Jsonl;
    throw Error(ErrorKind::UsageError, "unknown score format '" + std::string(name) + "' (expected csv or jsonl)");
}

void write_scores(std::ostream& out, const ScoreTable& t, ScoreFormat format) {
    const bool carto = t.confidence.has_value();
    std::string buf;
    buf.reserve(1 << 16);
    auto flush = [&](bool force) {
        if (force || buf.size() > (1 << 15)) {
            out << buf;
            buf.clear();
        }
    };
    if (format == ScoreFormat::Csv) {
        buf.append(kCsvMarker).append(meta_of(t).dump()).append("\n");
        buf.append("example_id,h,f,confidence,variability\n");
        for (std::size_t i = 0; i < t.n(); ++i) {
            buf.append(text::csv_field(t.ids[i])).append(",").append(std::to_string(t.h[i]));
            buf.append(",").append(std::to_string(t.f[i])).append(",");
            if (carto) {
                buf.append(text::format_double((*t.confidence)[i])).append(",");
                buf.append(text::format_double((*t.variability)[i]));
            } else {
                buf.append(",");
            }
            buf.append("\n");
            flush(false);
        }
    } else {
        buf.append(json{{"example_id", "__meta__"}, {"meta", meta_of(t)}}.dump()).append("\n");
        for (std::size_t i = 0; i < t.n(); ++i) {
            buf.append("{\"example_id\":").append(text::json_quote(t.ids[i]));
            buf.append(",\"h\":").append(std::to_string(t.h[i]));
            buf.append(",\"f\":").append(std::to_string(t.f[i]));
            if (carto) {
                buf.append(",\"confidence\":").append(text::format_double((*t.confidence)[i]));
                buf.append(",\"variability\":").append(text::format_double((*t.variability)[i]));
            } else {
                buf.append(",\"confidence\":null,\"variability\":null");
            }
            buf.append("}\n");
            flush(false);
        }
    }
    flush(true);
}

ScoreTable read_scores(std::istream& in) {
    ScoreTable t;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::MalformedLine, "empty score file", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t line_no = 1;

    if (line.rfind(kCsvMarker, 0) == 0) {
        json meta;
        try {
            meta = json::parse(line.substr(kCsvMarker.size()));
        } catch (const json::exception& e) {
            throw Error(ErrorKind::MalformedLine, std::string("bad provenance line: ") + e.what(), 1);
        }
        apply_meta(meta, t);
        if (!std::getline(in, line) || text::trim(line) != "example_id,h,f,confidence,variability") {
            throw Error(ErrorKind::MalformedLine, "expected score CSV header", 2);
        }
        line_no = 2;
        std::vector<std::string_view> fields;
        std::vector<std::string> storage;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (text::trim(line).empty()) continue;
            text::split_csv(line, fields, storage);
            if (fields.size() != 5) throw Error(ErrorKind::MalformedLine, "expected 5 columns", line_no);
            t.ids.emplace_back(fields[0]);
            check_order(t, line_no);
            t.h.push_back(parse_score(fields[1], t.s, line_no));
            t.f.push_back(parse_score(fields[2], t.s, line_no));
            push_cartography(t, parse_real(fields[3], line_no), parse_real(fields[4], line_no), line_no);
        }
    } else {
        json first;
        try {
            first = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::MalformedLine, std::string("not a score file: ") + e.what(), 1);
        }
        if (!first.is_object() || first.value("example_id", "") != "__meta__" || !first.contains("meta")) {
            throw Error(ErrorKind::MalformedLine, "score JSONL must start with the __meta__ record", 1);
        }
        apply_meta(first["meta"], t);
        while (std::getline(in, line)) {
            ++line_no;
            if (text::trim(line).empty()) continue;
            try {
                const json row = json::parse(line);
                t.ids.push_back(row.at("example_id").get<std::string>());
                check_order(t, line_no);
                const auto h = row.at("h").get<std::uint32_t>();
                const auto f = row.at("f").get<std::uint32_t>();
                if (h > t.s || f > t.s) throw Error(ErrorKind::ScoreOutOfRange, "score > S", line_no);
                t.h.push_back(h);
                t.f.push_back(f);
                auto real = [&](const char* key) -> std::optional<double> {
                    if (!row.contains(key) || row[key].is_null()) return std::nullopt;
                    return row[key].get<double>();
                };
                push_cartography(t, real("confidence"), real("variability"), line_no);
            } catch (const json::exception& e) {
                throw Error(ErrorKind::MalformedLine, std::string("bad score row: ") + e.what(), line_no);
            }
        }
    }
    return t;
}

ScoreTable read_scores_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open score file '" + path + "'");
    return read_scores(in);
}

}  // namespace prunekit
