// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prunekit/scores.hpp"
#include "prunekit/subsets.hpp"

namespace prunekit {

/// One user-supplied evaluation number. The label "full" marks the full-data baseline.
struct EvalRecord {
    std::string subset_label;
    std::string metric_name;
    double value = 0.0;
    std::optional<std::int64_t> seed;
};

inline constexpr std::string_view kFullLabel = "full";

/// Reads eval records from JSONL (keys subset_label, metric, value, seed) or CSV with the same header.
std::vector<EvalRecord> read_evals(std::istream& in);
std::vector<EvalRecord> read_evals_file(const std::string& path);

/// Mean score of the members. Throws EmptySubset, UnknownExample.
double mean_subset_h(const SubsetManifest& manifest, const ScoreTable& scores, ScoreKind kind = ScoreKind::H);

/// Mean score over the full table. Throws EmptySubset.
double mean_h(const ScoreTable& scores, ScoreKind kind = ScoreKind::H);

struct DeltaRow {
    std::string subset_label;
    std::string metric_name;
    double subset_mean = 0.0;
    double full_mean = 0.0;
    double delta = 0.0;  // subset - full; positive means the subset improved the metric
};

/// One row per (subset, metric), rows sorted by (subset_label, metric). Repeated records
/// for the same (label, metric) are averaged first. Throws MissingFullBaseline.
std::vector<DeltaRow> delta_table(std::span<const EvalRecord> evals);

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(std::string_view name);

struct ReportInputs {
    /// The first table is primary (mean-H, size table); every table contributes a histogram.
    std::vector<ScoreTable> scores;
    std::vector<SubsetManifest> manifests;
    std::optional<std::vector<EvalRecord>> evals;
    std::string run_manifest;
};

/// file name -> contents. Json: report.json. Csv: histograms.csv, size_table.csv,
/// mean_h.csv, and delta_table.csv when evals are present.
using ReportFiles = std::map<std::string, std::string>;

/// Throws ProvenanceMismatch when log digests disagree, UnknownSubset when an eval
/// label names no manifest.
ReportFiles emit_report(const ReportInputs& inputs, ReportFormat format);

/// Fixed two-decimal rendering used for every percentage and delta.
std::string fixed2(double value);

}  // namespace prunekit
