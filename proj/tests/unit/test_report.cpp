// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <json.hpp>

#include "helpers.hpp"
#include "prunekit/report.hpp"
#include "prunekit/synth.hpp"

using namespace prunekit;
using testutil::kind_of;

namespace {

ScoreTable table_from_counts(const std::vector<std::uint64_t>& counts, std::string digest = "sha256:abc") {
    ScoreTable t;
    std::size_t n = 0;
    for (auto c : counts) n += c;
    for (std::uint32_t v = 0; v < counts.size(); ++v) {
        for (std::uint64_t c = 0; c < counts[v]; ++c) {
            t.ids.push_back(synth_id(t.ids.size(), n));
            t.h.push_back(v);
            t.f.push_back(v);
        }
    }
    t.s = static_cast<std::uint32_t>(counts.size() - 1);
    t.e = 3;
    t.provenance.source_s = t.s;
    t.provenance.source_e = 3;
    t.provenance.log_digest = std::move(digest);
    return t;
}

EvalRecord ev(std::string label, std::string metric, double v) { return {std::move(label), std::move(metric), v, {}}; }

}  // namespace

TEST_CASE("mean subset H") {
    const auto t = table_from_counts({0, 0, 0, 0, 718, 1314, 0});
    const auto d5 = build_subset(t, BucketSet::of({5}));
    CHECK(mean_subset_h(d5, t) == 5.0);
    const auto d45 = build_subset(t, BucketSet::of({4, 5}));
    CHECK(mean_subset_h(d45, t) == doctest::Approx((4.0 * 718 + 5.0 * 1314) / 2032));
    CHECK(mean_subset_h(d45, t) == doctest::Approx(4.6467).epsilon(1e-4));
    CHECK(kind_of([&] { (void)mean_subset_h(build_subset(t, BucketSet::of({0})), t); }) == ErrorKind::EmptySubset);
    SubsetManifest stray = d5;
    stray.member_ids.push_back("zzz");
    CHECK(kind_of([&] { (void)mean_subset_h(stray, t); }) == ErrorKind::UnknownExample);
}

TEST_CASE("mean of any bucket union lies within [min M, max M]") {
    const auto t = table_from_counts({5, 3, 0, 7, 2, 9, 11});
    for (std::uint32_t mask = 1; mask < 128; ++mask) {
        std::vector<std::uint32_t> m;
        for (std::uint32_t v = 0; v <= 6; ++v) {
            if ((mask >> v) & 1u) m.push_back(v);
        }
        const auto sub = build_subset(t, BucketSet::of(m));
        if (sub.size() == 0) continue;
        const double mean = mean_subset_h(sub, t);
        CHECK(mean >= m.front());
        CHECK(mean <= m.back());
    }
}

TEST_CASE("delta table arithmetic") {
    const std::vector<EvalRecord> evals{ev("full", "accuracy", 83.98), ev("D{1,2,3,4,5}", "accuracy", 83.53),
                                        ev("full", "f1", 0.5), ev("D{1,2,3,4,5}", "f1", 0.5)};
    const auto rows = delta_table(evals);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].subset_label == "D{1,2,3,4,5}");
    CHECK(rows[0].metric_name == "accuracy");
    CHECK(fixed2(rows[0].delta) == "-0.45");
    CHECK(rows[1].delta == 0.0);
    CHECK(rows[2].subset_label == "full");
    CHECK(rows[2].delta == 0.0);
    CHECK(rows[3].delta == 0.0);
}

TEST_CASE("delta averages repeated records first") {
    const std::vector<EvalRecord> evals{ev("full", "acc", 80.0), ev("full", "acc", 82.0), ev("x", "acc", 83.0),
                                        ev("x", "acc", 85.0)};
    const auto rows = delta_table(evals);
    CHECK(rows[0].full_mean == 81.0);
    CHECK(rows[1].subset_label == "x");
    CHECK(rows[1].delta == 3.0);
}

TEST_CASE("delta needs a full baseline per metric") {
    const std::vector<EvalRecord> evals{ev("full", "acc", 1.0), ev("x", "f1", 1.0)};
    CHECK(kind_of([&] { (void)delta_table(evals); }) == ErrorKind::MissingFullBaseline);
}

TEST_CASE("fixed2 formatting") {
    CHECK(fixed2(27.06) == "27.06");
    CHECK(fixed2(5.0) == "5.00");
    CHECK(fixed2(-0.001) == "0.00");
    CHECK(fixed2(94.04 - 92.85) == "1.19");
    CHECK(fixed2(82.95 - 84.67) == "-1.72");
}

TEST_CASE("eval readers") {
    std::istringstream jsonl("{\"subset_label\":\"full\",\"metric\":\"acc\",\"value\":83.98,\"seed\":1}\n\n"
                             "{\"subset_label\":\"D{4,5}\",\"metric\":\"acc\",\"value\":83.5}\n");
    const auto a = read_evals(jsonl);
    REQUIRE(a.size() == 2);
    CHECK(a[0].seed == 1);
    CHECK(a[1].subset_label == "D{4,5}");
    std::istringstream csv("subset_label,metric,value,seed\nfull,acc,83.98,1\n\"D{4,5}\",acc,83.5,\n");
    const auto b = read_evals(csv);
    REQUIRE(b.size() == 2);
    CHECK(b[1].value == 83.5);
    CHECK_FALSE(b[1].seed.has_value());
    std::istringstream bad("subset_label,metric,value\nfull,acc,abc\n");
    CHECK(kind_of([&] { (void)read_evals(bad); }) == ErrorKind::MalformedLine);
    std::istringstream inf("{\"subset_label\":\"full\",\"metric\":\"acc\",\"value\":1e999}\n");
    CHECK(kind_of([&] { (void)read_evals(inf); }) == ErrorKind::MalformedLine);
}

TEST_CASE("report contents and determinism") {
    const auto counts = histogram_from_percentages(std::vector<double>{6.57, 3.21, 3.15, 3.70, 5.42, 11.58, 66.38}, 10000);
    const auto t = table_from_counts(counts);
    ReportInputs in;
    in.scores = {t};
    in.manifests = proposed_family(t);
    in.run_manifest = "run_manifest.report.json";
    const auto a = emit_report(in, ReportFormat::Json);
    const auto b = emit_report(in, ReportFormat::Json);
    CHECK(a == b);
    REQUIRE(a.count("report.json") == 1);
    const auto j = nlohmann::json::parse(a.at("report.json"));
    CHECK_FALSE(j.contains("delta"));
    std::vector<std::string> pct;
    for (const auto& row : j["size_table"]) pct.push_back(row["size_pct"].get<std::string>());
    CHECK(pct == std::vector<std::string>{"27.06", "23.85", "20.70", "17.00", "11.58", "5.42", "12.27"});
    CHECK(j["size_table"][0]["group"] == "4");
    CHECK(j["histograms"][0]["counts"][6] == 6637);

    const auto csv = emit_report(in, ReportFormat::Csv);
    CHECK(csv.count("size_table.csv") == 1);
    CHECK(csv.count("delta_table.csv") == 0);
    CHECK(csv.at("size_table.csv").find("\"D{1,2,3,4,5}\",4,2706,27.06") != std::string::npos);

    in.evals = std::vector<EvalRecord>{ev("full", "acc", 83.98), ev("D{1,2,3,4,5}", "acc", 83.53)};
    const auto with = emit_report(in, ReportFormat::Csv);
    CHECK(with.at("delta_table.csv").find("\"D{1,2,3,4,5}\",acc,83.53,83.98,-0.45") != std::string::npos);
    const auto wj = nlohmann::json::parse(emit_report(in, ReportFormat::Json).at("report.json"));
    CHECK(wj["delta"]["convention"].get<std::string>().find("subset - full") != std::string::npos);
}

TEST_CASE("report guards") {
    const auto t = table_from_counts({1, 2, 3, 4, 5, 6, 7});
    ReportInputs in;
    in.scores = {t, table_from_counts({1, 2, 3, 4, 5, 6, 7}, "sha256:other")};
    CHECK(kind_of([&] { (void)emit_report(in, ReportFormat::Json); }) == ErrorKind::ProvenanceMismatch);

    in.scores = {t};
    auto m = build_subset(t, BucketSet::of({5}));
    m.provenance.log_digest = "sha256:other";
    in.manifests = {m};
    CHECK(kind_of([&] { (void)emit_report(in, ReportFormat::Json); }) == ErrorKind::ProvenanceMismatch);

    in.manifests = {build_subset(t, BucketSet::of({5}))};
    in.evals = std::vector<EvalRecord>{ev("full", "acc", 1.0), ev("D{9}", "acc", 2.0)};
    CHECK(kind_of([&] { (void)emit_report(in, ReportFormat::Json); }) == ErrorKind::UnknownSubset);
    in.evals = std::vector<EvalRecord>{ev("full", "acc", 1.0), ev("D_5", "acc", 2.0)};
    CHECK_NOTHROW((void)emit_report(in, ReportFormat::Json));
}
