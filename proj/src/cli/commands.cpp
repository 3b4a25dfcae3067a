// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "prunekit/digest.hpp"
#include "prunekit/log_ingest.hpp"
#include "prunekit/manifest_io.hpp"
#include "prunekit/report.hpp"
#include "prunekit/scores.hpp"
#include "prunekit/subsets.hpp"
#include "prunekit/synth.hpp"
#include "prunekit/text.hpp"

namespace prunekit::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Globals {
    std::string log_format = "jsonl";
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool quiet = false;
};

struct Input {
    std::string path;
    std::string digest;
};

std::string run_manifest_name(std::string_view command) { return "run_manifest." + std::string(command) + ".json"; }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

fs::path prepare_out_dir(const Globals& g) {
    fs::path dir(g.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::IoError, "cannot create output directory '" + g.out_dir + "'");
    return dir;
}

void write_file(const fs::path& path, std::string_view body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

// Timestamps live only here so every other output is byte-reproducible.
void write_run_manifest(const fs::path& dir, std::string_view command, const std::vector<std::string>& args,
                        const std::vector<Input>& inputs, const std::vector<std::string>& outputs) {
    ojson in = ojson::array();
    for (const auto& i : inputs) in.push_back(ojson{{"path", i.path}, {"digest", i.digest}});
    ojson j{{"command", command},       {"arguments", args},
            {"inputs", in},             {"outputs", outputs},
            {"tool_version", PRUNEKIT_VERSION}, {"timestamp", utc_timestamp()}};
    write_file(dir / run_manifest_name(command), j.dump(2) + "\n");
}

AssembleOptions assemble_options(const std::string& missing, std::optional<std::uint32_t> runs,
                                 std::optional<std::uint32_t> epochs) {
    AssembleOptions o;
    o.policy = parse_missing_policy(missing);
    o.runs = runs;
    o.epochs = epochs;
    return o;
}

int cmd_validate(const Globals& g, const std::string& logs, const AssembleOptions& opts, std::ostream& out) {
    const auto log = load_log(logs, parse_log_format(g.log_format), opts);
    if (!g.quiet) {
        ojson j{{"ok", true},
                {"n", log.correctness.n()},
                {"s", log.correctness.s()},
                {"e", log.correctness.e()},
                {"gold_prob", log.gold_prob.has_value()},
                {"missing_policy", to_string(log.policy)},
                {"missing_cells", log.missing_cells},
                {"log_digest", log.source_digest}};
        out << j.dump() << "\n";
    }
    return 0;
}

int cmd_score(const Globals& g, const std::vector<std::string>& args, const std::string& logs,
              const AssembleOptions& opts, const ScoreOptions& score_opts, const std::string& format,
              std::ostream& out) {
    const auto fmt = parse_score_format(format);
    const auto log = load_log(logs, parse_log_format(g.log_format), opts);
    auto table = compute_scores(log, score_opts);
    table.provenance.run_manifest = run_manifest_name("score");

    const auto dir = prepare_out_dir(g);
    const std::string name = fmt == ScoreFormat::Csv ? "scores.csv" : "scores.jsonl";
    {
        std::ofstream file(dir / name, std::ios::binary | std::ios::trunc);
        if (!file) throw Error(ErrorKind::IoError, "cannot write '" + (dir / name).string() + "'");
        write_scores(file, table, fmt);
        if (!file) throw Error(ErrorKind::IoError, "write failed for '" + (dir / name).string() + "'");
    }
    write_run_manifest(dir, "score", args, {{logs, log.source_digest}}, {name});
    if (!g.quiet) out << (dir / name).string() << "\n";
    return 0;
}

struct SubsetArgs {
    std::string scores;
    std::optional<std::string> buckets;
    bool family = false;
    bool with_baselines = false;
    std::optional<std::size_t> ambiguous;
    std::optional<std::size_t> random;
    std::string score = "h";
    std::string format = "json";
    bool member_file = false;
};

int cmd_subset(const Globals& g, const std::vector<std::string>& args, const SubsetArgs& a, std::ostream& out,
               std::ostream& err) {
    const int chosen = int(a.buckets.has_value()) + int(a.family) + int(a.ambiguous.has_value()) +
                       int(a.random.has_value());
    if (chosen != 1) {
        throw Error(ErrorKind::UsageError, "choose exactly one of --buckets, --family, --ambiguous, --random");
    }
    if (a.with_baselines && !a.family) throw Error(ErrorKind::UsageError, "--with-baselines requires --family");
    if (a.format != "json" && a.format != "ids-only") {
        throw Error(ErrorKind::UsageError, "unknown subset format '" + a.format + "' (expected json or ids-only)");
    }
    const auto kind = parse_score_kind(a.score);
    // Parse the spec before touching the score file so spec errors win.
    std::optional<BucketSet> m;
    if (a.buckets) m = BucketSet::parse(*a.buckets);

    const auto table = read_scores_file(a.scores);
    std::vector<SubsetManifest> manifests;
    bool numbered = false;
    if (m) {
        manifests.push_back(build_subset(table, *m, kind));
    } else if (a.family) {
        manifests = proposed_family(table, kind);
        if (a.with_baselines) {
            auto base = size_matched_baselines(manifests, table, g.seed);
            manifests.insert(manifests.end(), base.begin(), base.end());
        }
        numbered = true;
    } else if (a.ambiguous) {
        manifests.push_back(ambiguous_subset(table, *a.ambiguous));
    } else {
        manifests.push_back(random_subset(table, *a.random, g.seed));
    }

    const auto dir = prepare_out_dir(g);
    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < manifests.size(); ++i) {
        auto& man = manifests[i];
        man.provenance.run_manifest = run_manifest_name("subset");
        std::string stem = slug(man.spec);
        if (numbered) {
            stem = (i < 10 ? "0" : "") + std::to_string(i) + "_" + stem;
        }
        if (a.format == "ids-only") {
            write_file(dir / (stem + ".ids"), manifest_ids(man));
            outputs.push_back(stem + ".ids");
        } else if (a.member_file) {
            write_file(dir / (stem + ".ids"), manifest_ids(man));
            write_file(dir / (stem + ".json"), manifest_to_json(man, stem + ".ids"));
            outputs.push_back(stem + ".json");
            outputs.push_back(stem + ".ids");
        } else {
            write_file(dir / (stem + ".json"), manifest_to_json(man));
            outputs.push_back(stem + ".json");
        }
        if (!g.quiet) {
            out << label(man.spec) << "\t" << man.size() << "\t" << fixed2(man.size_fraction() * 100.0) << "%\n";
        }
        for (const auto& w : man.warnings) err << "warning: " << label(man.spec) << ": " << w << "\n";
    }
    write_run_manifest(dir, "subset", args, {{a.scores, sha256_file(a.scores)}}, outputs);
    return 0;
}

std::vector<fs::path> expand_manifest_paths(const std::vector<std::string>& given) {
    std::vector<fs::path> out;
    for (const auto& p : given) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                const auto name = entry.path().filename().string();
                if (entry.is_regular_file() && entry.path().extension() == ".json" && name.rfind("run_manifest", 0) != 0) {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.emplace_back(p);
        }
    }
    return out;
}

int cmd_report(const Globals& g, const std::vector<std::string>& args, const std::vector<std::string>& scores,
               const std::vector<std::string>& manifest_args, const std::optional<std::string>& evals,
               const std::string& format, std::ostream& out) {
    const auto fmt = parse_report_format(format);
    ReportInputs in;
    std::vector<Input> inputs;
    for (const auto& s : scores) {
        in.scores.push_back(read_scores_file(s));
        inputs.push_back({s, sha256_file(s)});
    }
    for (const auto& p : expand_manifest_paths(manifest_args)) {
        in.manifests.push_back(read_manifest_file(p));
        inputs.push_back({p.string(), sha256_file(p.string())});
    }
    if (evals) {
        in.evals = read_evals_file(*evals);
        inputs.push_back({*evals, sha256_file(*evals)});
    }
    in.run_manifest = run_manifest_name("report");
    const auto files = emit_report(in, fmt);

    const auto dir = prepare_out_dir(g);
    std::vector<std::string> outputs;
    for (const auto& [name, body] : files) {
        write_file(dir / name, body);
        outputs.push_back(name);
        if (!g.quiet) out << (dir / name).string() << "\n";
    }
    write_run_manifest(dir, "report", args, inputs, outputs);
    return 0;
}

std::vector<DifficultyClass> parse_mix(const std::string& spec) {
    std::vector<DifficultyClass> mix;
    std::stringstream items(spec);
    std::string item;
    while (std::getline(items, item, ',')) {
        if (text::trim(item).empty()) continue;
        DifficultyClass d;
        char c1 = 0, c2 = 0;
        std::istringstream one(item);
        if (!(one >> d.weight >> c1 >> d.base_prob >> c2 >> d.per_epoch_gain) || c1 != ':' || c2 != ':' ||
            !(one >> std::ws).eof()) {
            throw Error(ErrorKind::SpecParseError, "bad mix entry '" + item + "' (expected weight:base:gain)");
        }
        mix.push_back(d);
    }
    return mix;
}

// Inline JSON when the argument starts with '[' or '{', otherwise a file path.
std::vector<std::uint64_t> read_target(const std::string& arg, std::size_t n) {
    const auto t = text::trim(arg);
    const bool is_inline = !t.empty() && (t.front() == '[' || t.front() == '{');
    std::string body(t);
    if (!is_inline) {
        std::ifstream in(arg, std::ios::binary);
        if (!in) throw Error(ErrorKind::IoError, "cannot open target histogram '" + arg + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    try {
        const auto j = ojson::parse(body);
        if (j.is_array()) return j.get<std::vector<std::uint64_t>>();
        if (j.contains("counts")) return j.at("counts").get<std::vector<std::uint64_t>>();
        const auto pct = j.at("pct").get<std::vector<double>>();
        return histogram_from_percentages(pct, n);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SpecParseError, std::string("bad target histogram: ") + e.what());
    }
}

struct SynthArgs {
    std::size_t n = 1000;
    std::uint32_t s = 6;
    std::uint32_t e = 3;
    std::optional<std::string> target;
    std::string mix = "0.6:0.7:0.1,0.3:0.3:0.2,0.1:0.05:0.05";
    bool emit_gold_prob = false;
    double jitter = 0.05;
};

int cmd_synth(const Globals& g, const std::vector<std::string>& args, const SynthArgs& a, std::ostream& out) {
    SynthConfig c;
    c.n = a.n;
    c.s = a.s;
    c.e = a.e;
    c.seed = g.seed;
    c.emit_gold_prob = a.emit_gold_prob;
    c.jitter_sigma = a.jitter;
    if (a.target) {
        c.target_histogram = read_target(*a.target, a.n);
    } else {
        c.mix = parse_mix(a.mix);
    }
    validate(c);

    const auto fmt = parse_log_format(g.log_format);
    const auto dir = prepare_out_dir(g);
    const std::string name = fmt == LogFormat::Jsonl ? "synth_log.jsonl" : "synth_log.csv";
    std::ofstream file(dir / name, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::IoError, "cannot write '" + (dir / name).string() + "'");
    std::string buf;
    if (fmt == LogFormat::Jsonl) {
        ojson meta{{"example_id", "__meta__"},
                   {"meta",
                    {{"generator", "prunekit synth"},
                     {"mode", a.target ? "constructive" : "stochastic"},
                     {"seed", g.seed},
                     {"run_manifest", run_manifest_name("synth")}}}};
        buf = meta.dump() + "\n";
    } else {
        buf = a.emit_gold_prob ? "example_id,run,epoch,correct,gold_prob\n" : "example_id,run,epoch,correct\n";
    }
    generate(c, [&](const PredictionRecord& r) {
        if (fmt == LogFormat::Jsonl) {
            buf += to_jsonl(r);
        } else {
            buf += text::csv_field(r.example_id) + "," + std::to_string(r.run) + "," + std::to_string(r.epoch) + "," +
                   (r.correct ? "1" : "0");
            if (r.gold_prob) buf += "," + text::format_double(*r.gold_prob);
        }
        buf += '\n';
        if (buf.size() > (1 << 16)) {
            file << buf;
            buf.clear();
        }
    });
    file << buf;
    file.close();
    if (!file) throw Error(ErrorKind::IoError, "write failed for '" + (dir / name).string() + "'");
    write_run_manifest(dir, "synth", args, {}, {name});
    if (!g.quiet) out << (dir / name).string() << "\n";
    return 0;
}

void report_error(std::ostream& err, ErrorKind kind, const std::string& message, std::optional<std::size_t> line) {
    ojson body{{"kind", to_string(kind)}, {"message", message}};
    if (line) body["line"] = *line;
    err << ojson{{"error", body}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"prunekit: score training dynamics and build pruned training subsets", "prunekit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", PRUNEKIT_VERSION);

    Globals g;
    app.add_option("--log-format", g.log_format, "Prediction log format: jsonl or csv")->capture_default_str();
    app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for random baselines and synthetic logs")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "Print nothing on success");

    std::string logs;
    std::string missing = "strict";
    std::optional<std::uint32_t> runs, epochs;
    auto add_log_options = [&](CLI::App* sub) {
        sub->add_option("--logs", logs, "Prediction log file")->required();
        sub->add_option("--missing", missing, "Missing-cell policy: strict or treat-missing-as-incorrect")
            ->capture_default_str();
        sub->add_option("--runs", runs, "Declared number of runs S (default: inferred)");
        sub->add_option("--epochs", epochs, "Declared number of epochs E (default: inferred)");
    };

    auto* validate_cmd = app.add_subcommand("validate", "Check a prediction log and print its grid");
    add_log_options(validate_cmd);

    auto* score_cmd = app.add_subcommand("score", "Compute per-example H, F, confidence and variability");
    add_log_options(score_cmd);
    ScoreOptions score_opts;
    std::string fscore_mode = "suffix";
    std::string score_format = "csv";
    score_cmd->add_option("--s-used", score_opts.s_used, "Score using only the first S runs");
    score_cmd->add_option("--e-used", score_opts.e_used, "Score using only the first E epochs");
    score_cmd->add_option("--fscore-mode", fscore_mode, "suffix or strict")->capture_default_str();
    score_cmd->add_option("--format", score_format, "csv or jsonl")->capture_default_str();

    auto* subset_cmd = app.add_subcommand("subset", "Materialize subset manifests from a score file");
    SubsetArgs sa;
    subset_cmd->add_option("--scores", sa.scores, "Score file written by `score`")->required();
    subset_cmd->add_option("--buckets", sa.buckets, "Bucket set M, e.g. \"1,2,3,4,5\" or \"1-5\"");
    subset_cmd->add_flag("--family", sa.family, "Emit the proposed subset family");
    subset_cmd->add_flag("--with-baselines", sa.with_baselines, "With --family: add size-matched baselines");
    subset_cmd->add_option("--ambiguous", sa.ambiguous, "Top-k examples by variability");
    subset_cmd->add_option("--random", sa.random, "k examples from a seeded shuffle");
    subset_cmd->add_option("--score", sa.score, "Score to bucket on: h or f")->capture_default_str();
    subset_cmd->add_option("--format", sa.format, "json or ids-only")->capture_default_str();
    subset_cmd->add_flag("--member-file", sa.member_file, "Write ids to a side file referenced by the manifest");

    auto* report_cmd = app.add_subcommand("report", "Histograms, size table, mean-H and delta tables");
    std::vector<std::string> report_scores, report_manifests;
    std::optional<std::string> evals;
    std::string report_format = "json";
    report_cmd->add_option("--scores", report_scores, "Score file(s); the first is primary")->required();
    report_cmd->add_option("--manifests", report_manifests, "Manifest files or directories");
    report_cmd->add_option("--evals", evals, "Evaluation records (JSONL or CSV)");
    report_cmd->add_option("--format", report_format, "json or csv")->capture_default_str();

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic prediction log");
    SynthArgs ya;
    synth_cmd->add_option("--n", ya.n, "Examples")->capture_default_str();
    synth_cmd->add_option("--s", ya.s, "Runs")->capture_default_str();
    synth_cmd->add_option("--e", ya.e, "Epochs")->capture_default_str();
    synth_cmd->add_option("--target-histogram", ya.target,
                          "JSON (inline or file): array of bucket counts, {\"counts\":[...]} or {\"pct\":[...]}");
    synth_cmd->add_option("--mix", ya.mix, "Difficulty classes weight:base:gain, comma separated")
        ->capture_default_str();
    synth_cmd->add_flag("--emit-gold-prob", ya.emit_gold_prob, "Also emit gold_prob");
    synth_cmd->add_option("--jitter", ya.jitter, "Gold-probability jitter sigma")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForVersion&) {
            out << PRUNEKIT_VERSION << "\n";
            return 0;
        } catch (const CLI::ParseError& e) {
            throw Error(ErrorKind::UsageError, e.what());
        }

        if (validate_cmd->parsed()) {
            return cmd_validate(g, logs, assemble_options(missing, runs, epochs), out);
        }
        if (score_cmd->parsed()) {
            score_opts.f_mode = parse_fscore_mode(fscore_mode);
            return cmd_score(g, args, logs, assemble_options(missing, runs, epochs), score_opts, score_format, out);
        }
        if (subset_cmd->parsed()) return cmd_subset(g, args, sa, out, err);
        if (report_cmd->parsed()) return cmd_report(g, args, report_scores, report_manifests, evals, report_format, out);
        if (synth_cmd->parsed()) return cmd_synth(g, args, ya, out);
        throw Error(ErrorKind::UsageError, "no command given");
    } catch (const Error& e) {
        report_error(err, e.kind(), e.what(), e.line());
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        report_error(err, ErrorKind::IoError, e.what(), std::nullopt);
        return exit_code(ErrorKind::IoError);
    } catch (const std::exception& e) {
        report_error(err, ErrorKind::Internal, e.what(), std::nullopt);
        return exit_code(ErrorKind::Internal);
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace prunekit::cli
