// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "prunekit/text.hpp"

namespace prunekit {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kReportTag = "prunekit-report/v1";
constexpr std::string_view kDeltaConvention = "delta = subset - full; positive means the subset improved the metric";

double finite_value(double v, std::size_t line) {
    if (!std::isfinite(v)) throw Error(ErrorKind::MalformedLine, "eval value must be finite", line);
    return v;
}

std::vector<EvalRecord> read_evals_jsonl(std::istream& in) {
    std::vector<EvalRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            const auto j = ojson::parse(line);
            EvalRecord r;
            r.subset_label = j.at("subset_label").get<std::string>();
            r.metric_name = j.contains("metric") ? j.at("metric").get<std::string>() : j.at("metric_name").get<std::string>();
            r.value = finite_value(j.at("value").get<double>(), line_no);
            if (j.contains("seed") && !j["seed"].is_null()) r.seed = j["seed"].get<std::int64_t>();
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::MalformedLine, std::string("bad eval record: ") + e.what(), line_no);
        }
    }
    return out;
}

std::vector<EvalRecord> read_evals_csv(std::istream& in) {
    std::vector<EvalRecord> out;
    std::string line;
    std::vector<std::string_view> fields;
    std::vector<std::string> storage;
    if (!std::getline(in, line)) return out;
    text::split_csv(line, fields, storage);
    std::map<std::string, std::size_t, std::less<>> col;
    for (std::size_t i = 0; i < fields.size(); ++i) col[std::string(text::trim(fields[i]))] = i;
    auto need = [&](std::string_view a, std::string_view b = {}) -> std::size_t {
        if (auto it = col.find(a); it != col.end()) return it->second;
        if (auto it = col.find(b); !b.empty() && it != col.end()) return it->second;
        throw Error(ErrorKind::MalformedLine, "eval CSV header lacks '" + std::string(a) + "'", 1);
    };
    const auto c_label = need("subset_label");
    const auto c_metric = need("metric", "metric_name");
    const auto c_value = need("value");
    const auto seed_it = col.find("seed");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        text::split_csv(line, fields, storage);
        if (fields.size() != col.size()) throw Error(ErrorKind::MalformedLine, "column count mismatch", line_no);
        EvalRecord r;
        r.subset_label = std::string(text::trim(fields[c_label]));
        r.metric_name = std::string(text::trim(fields[c_metric]));
        const std::string value(text::trim(fields[c_value]));
        std::size_t used = 0;
        try {
            r.value = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) throw Error(ErrorKind::MalformedLine, "bad value '" + value + "'", line_no);
        finite_value(r.value, line_no);
        if (seed_it != col.end()) {
            const std::string seed(text::trim(fields[seed_it->second]));
            if (!seed.empty()) r.seed = std::stoll(seed);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string group_name(const SubsetSpec& spec, std::uint32_t s) {
    const auto* m = std::get_if<BucketSet>(&spec);
    if (m == nullptr || m->empty() || m->buckets.back() > s) return "";
    return std::to_string(static_cast<int>(classify_group(*m, s)));
}

struct Prepared {
    std::vector<std::string> labels;
    std::vector<std::optional<double>> means;  // empty subsets have no mean
    std::optional<std::vector<DeltaRow>> deltas;
};

Prepared prepare(const ReportInputs& in) {
    if (in.scores.empty()) throw Error(ErrorKind::UsageError, "report needs at least one score table");
    const auto& primary = in.scores.front();
    for (const auto& t : in.scores) {
        if (t.provenance.log_digest != primary.provenance.log_digest) {
            throw Error(ErrorKind::ProvenanceMismatch, "score tables come from different logs");
        }
    }
    Prepared p;
    for (const auto& m : in.manifests) {
        const auto& mp = m.provenance;
        if (mp.log_digest != primary.provenance.log_digest) {
            throw Error(ErrorKind::ProvenanceMismatch, "manifest " + label(m.spec) + " comes from a different log");
        }
        if (mp.n != primary.n()) {
            throw Error(ErrorKind::ProvenanceMismatch, "manifest " + label(m.spec) + " was built over a different N");
        }
        if (std::holds_alternative<BucketSet>(m.spec) && (mp.s != primary.s || mp.e != primary.e)) {
            throw Error(ErrorKind::ProvenanceMismatch,
                        "manifest " + label(m.spec) + " was built on a different (S, E) than the primary scores");
        }
        p.labels.push_back(label(m.spec));
        p.means.push_back(m.size() == 0 ? std::nullopt
                                        : std::optional<double>(mean_subset_h(m, primary, mp.score_kind)));
    }
    if (in.evals) {
        for (const auto& r : *in.evals) {
            if (r.subset_label == kFullLabel) continue;
            bool known = false;
            for (std::size_t i = 0; i < in.manifests.size() && !known; ++i) {
                known = p.labels[i] == r.subset_label || slug(in.manifests[i].spec) == r.subset_label;
            }
            if (!known) throw Error(ErrorKind::UnknownSubset, "eval label '" + r.subset_label + "' names no manifest");
        }
        p.deltas = delta_table(*in.evals);
    }
    return p;
}

ojson histogram_json(const ScoreTable& t, ScoreKind kind) {
    const auto hist = bucket_histogram(kind == ScoreKind::H ? t.h : t.f, t.s);
    ojson pct = ojson::array();
    for (auto c : hist.counts) pct.push_back(fixed2(t.n() == 0 ? 0.0 : 100.0 * double(c) / double(t.n())));
    return ojson{{"s", t.s}, {"e", t.e}, {"score", to_string(kind)}, {"counts", hist.counts}, {"pct", pct}};
}

std::string csv_line(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        out += text::csv_field(c);
        first = false;
    }
    return out + "\n";
}

std::string mean_text(const std::optional<double>& m) { return m ? text::format_double(*m) : ""; }

}  // namespace

std::vector<EvalRecord> read_evals(std::istream& in) {
    const int c = (in >> std::ws).peek();
    return c == '{' ? read_evals_jsonl(in) : read_evals_csv(in);
}

std::vector<EvalRecord> read_evals_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open eval file '" + path + "'");
    return read_evals(in);
}

double mean_subset_h(const SubsetManifest& manifest, const ScoreTable& scores, ScoreKind kind) {
    if (manifest.member_ids.empty()) throw Error(ErrorKind::EmptySubset, "mean of an empty subset is undefined");
    const auto& v = kind == ScoreKind::H ? scores.h : scores.f;
    std::uint64_t sum = 0;
    for (const auto& id : manifest.member_ids) {
        const auto i = scores.index_of(id);
        if (!i) throw Error(ErrorKind::UnknownExample, "member '" + id + "' has no score");
        sum += v[*i];
    }
    return static_cast<double>(sum) / static_cast<double>(manifest.member_ids.size());
}

double mean_h(const ScoreTable& scores, ScoreKind kind) {
    if (scores.n() == 0) throw Error(ErrorKind::EmptySubset, "mean of an empty score table is undefined");
    const auto& v = kind == ScoreKind::H ? scores.h : scores.f;
    std::uint64_t sum = 0;
    for (auto x : v) sum += x;
    return static_cast<double>(sum) / static_cast<double>(scores.n());
}

std::vector<DeltaRow> delta_table(std::span<const EvalRecord> evals) {
    struct Acc {
        double sum = 0.0;
        std::size_t count = 0;
        double mean() const { return sum / static_cast<double>(count); }
    };
    std::map<std::pair<std::string, std::string>, Acc> groups;
    for (const auto& r : evals) {
        auto& a = groups[{r.subset_label, r.metric_name}];
        a.sum += r.value;
        ++a.count;
    }
    std::vector<DeltaRow> rows;
    for (const auto& [key, acc] : groups) {
        auto full = groups.find({std::string(kFullLabel), key.second});
        if (full == groups.end()) {
            throw Error(ErrorKind::MissingFullBaseline, "no \"full\" record for metric '" + key.second + "'");
        }
        const double subset_mean = acc.mean();
        const double full_mean = full->second.mean();
        rows.push_back({key.first, key.second, subset_mean, full_mean, subset_mean - full_mean});
    }
    return rows;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw Error(ErrorKind::UsageError, "unknown report format '" + std::string(name) + "' (expected json or csv)");
}

std::string fixed2(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    std::string out(buf);
    if (out == "-0.00") out = "0.00";
    return out;
}

ReportFiles emit_report(const ReportInputs& in, ReportFormat format) {
    const auto p = prepare(in);
    const auto& primary = in.scores.front();
    const double full_mean = mean_h(primary);
    ReportFiles files;

    if (format == ReportFormat::Json) {
        ojson sources = ojson::array();
        ojson histograms = ojson::array();
        for (const auto& t : in.scores) {
            sources.push_back(ojson{{"s", t.s},
                                    {"e", t.e},
                                    {"source_s", t.provenance.source_s},
                                    {"source_e", t.provenance.source_e},
                                    {"f_mode", to_string(t.provenance.f_mode)},
                                    {"missing_policy", to_string(t.provenance.missing_policy)},
                                    {"run_manifest", t.provenance.run_manifest}});
            histograms.push_back(histogram_json(t, ScoreKind::H));
            histograms.push_back(histogram_json(t, ScoreKind::F));
        }
        ojson sizes = ojson::array();
        ojson means = ojson::array();
        for (std::size_t i = 0; i < in.manifests.size(); ++i) {
            const auto& m = in.manifests[i];
            sizes.push_back(ojson{{"label", p.labels[i]},
                                  {"group", group_name(m.spec, m.provenance.s)},
                                  {"size", m.size()},
                                  {"size_pct", fixed2(m.size_fraction() * 100.0)}});
            ojson row{{"label", p.labels[i]}, {"score", to_string(m.provenance.score_kind)}};
            row["mean"] = p.means[i] ? ojson(*p.means[i]) : ojson(nullptr);
            row["mean_fixed2"] = p.means[i] ? ojson(fixed2(*p.means[i])) : ojson(nullptr);
            means.push_back(std::move(row));
        }
        ojson report{
            {"report", kReportTag},
            {"provenance",
             {{"log_digest", primary.provenance.log_digest}, {"run_manifest", in.run_manifest}, {"sources", sources}}},
            {"n", primary.n()},
            {"histograms", histograms},
            {"size_table", sizes},
            {"mean_h", {{"full", full_mean}, {"full_fixed2", fixed2(full_mean)}, {"subsets", means}}},
        };
        if (p.deltas) {
            ojson rows = ojson::array();
            for (const auto& d : *p.deltas) {
                rows.push_back(ojson{{"subset_label", d.subset_label},
                                     {"metric", d.metric_name},
                                     {"subset_mean", fixed2(d.subset_mean)},
                                     {"full_mean", fixed2(d.full_mean)},
                                     {"delta", fixed2(d.delta)}});
            }
            report["delta"] = ojson{{"convention", kDeltaConvention}, {"rows", rows}};
        }
        files["report.json"] = report.dump(2) + "\n";
        return files;
    }

    std::string hist = csv_line({"s", "e", "score", "bucket", "count", "pct"});
    for (const auto& t : in.scores) {
        for (auto kind : {ScoreKind::H, ScoreKind::F}) {
            const auto h = bucket_histogram(kind == ScoreKind::H ? t.h : t.f, t.s);
            for (std::size_t v = 0; v < h.counts.size(); ++v) {
                const double pct = t.n() == 0 ? 0.0 : 100.0 * double(h.counts[v]) / double(t.n());
                hist += csv_line({std::to_string(t.s), std::to_string(t.e), std::string(to_string(kind)),
                                  std::to_string(v), std::to_string(h.counts[v]), fixed2(pct)});
            }
        }
    }
    files["histograms.csv"] = hist;

    std::string sizes = csv_line({"label", "group", "size", "size_pct"});
    std::string means = csv_line({"label", "score", "mean", "mean_fixed2"});
    means += csv_line({std::string(kFullLabel), "h", text::format_double(full_mean), fixed2(full_mean)});
    for (std::size_t i = 0; i < in.manifests.size(); ++i) {
        const auto& m = in.manifests[i];
        sizes += csv_line({p.labels[i], group_name(m.spec, m.provenance.s), std::to_string(m.size()),
                           fixed2(m.size_fraction() * 100.0)});
        means += csv_line({p.labels[i], std::string(to_string(m.provenance.score_kind)), mean_text(p.means[i]),
                           p.means[i] ? fixed2(*p.means[i]) : ""});
    }
    files["size_table.csv"] = sizes;
    files["mean_h.csv"] = means;

    if (p.deltas) {
        std::string delta = csv_line({"subset_label", "metric", "subset_mean", "full_mean", "delta"});
        for (const auto& d : *p.deltas) {
            delta += csv_line({d.subset_label, d.metric_name, fixed2(d.subset_mean), fixed2(d.full_mean), fixed2(d.delta)});
        }
        files["delta_table.csv"] = delta;
    }
    return files;
}

}  // namespace prunekit
