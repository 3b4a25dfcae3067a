// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/manifest_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prunekit/text.hpp"

namespace prunekit {
namespace {

using ojson = nlohmann::ordered_json;

ojson spec_json(const SubsetSpec& spec) {
    if (const auto* m = std::get_if<BucketSet>(&spec)) {
        return ojson{{"kind", "buckets"}, {"label", label(spec)}, {"m", m->buckets}};
    }
    if (const auto* a = std::get_if<AmbiguousSpec>(&spec)) {
        return ojson{{"kind", "ambiguous"}, {"label", label(spec)}, {"k", a->k}};
    }
    const auto& r = std::get<RandomSpec>(spec);
    return ojson{{"kind", "random"}, {"label", label(spec)}, {"k", r.k}, {"seed", r.seed}};
}

SubsetSpec spec_from(const ojson& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "buckets") return BucketSet::of(j.at("m").get<std::vector<std::uint32_t>>());
    if (kind == "ambiguous") return AmbiguousSpec{j.at("k").get<std::size_t>()};
    if (kind == "random") return RandomSpec{j.at("k").get<std::size_t>(), j.at("seed").get<std::uint64_t>()};
    throw Error(ErrorKind::SpecParseError, "unknown subset kind '" + kind + "'");
}

std::vector<std::string> read_id_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open member file '" + path.string() + "'");
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        const auto id = text::trim(line);
        if (!id.empty()) ids.emplace_back(id);
    }
    return ids;
}

}  // namespace

std::string manifest_to_json(const SubsetManifest& m, const std::optional<std::string>& member_file) {
    const auto& p = m.provenance;
    ojson prov{
        {"s", p.s},
        {"e", p.e},
        {"n", p.n},
        {"score_kind", to_string(p.score_kind)},
        {"f_mode", to_string(p.f_mode)},
        {"missing_policy", to_string(p.missing_policy)},
        {"log_digest", p.log_digest},
        {"run_manifest", p.run_manifest},
        {"family_extension", p.family_extension},
    };
    if (const auto* r = std::get_if<RandomSpec>(&m.spec)) {
        prov["seed"] = r->seed;
        prov["generator"] = kRandomGenerator;
    }
    ojson j{
        {"spec", spec_json(m.spec)},
        {"size", m.size()},
        {"size_pct", m.size_pct()},
        {"size_fraction", m.size_fraction()},
        {"provenance", std::move(prov)},
        {"warnings", m.warnings},
    };
    if (member_file) {
        j["member_file"] = *member_file;
    } else {
        j["member_ids"] = m.member_ids;
    }
    return j.dump(2) + "\n";
}

std::string manifest_ids(const SubsetManifest& manifest) {
    std::string out;
    for (const auto& id : manifest.member_ids) out.append(id).append("\n");
    return out;
}

SubsetManifest manifest_from_json(const std::string& body, const std::filesystem::path& base_dir) {
    SubsetManifest m;
    try {
        const auto j = ojson::parse(body);
        m.spec = spec_from(j.at("spec"));
        const auto& p = j.at("provenance");
        m.provenance.s = p.at("s").get<std::uint32_t>();
        m.provenance.e = p.at("e").get<std::uint32_t>();
        m.provenance.n = p.at("n").get<std::size_t>();
        m.provenance.score_kind = parse_score_kind(p.at("score_kind").get<std::string>());
        m.provenance.f_mode = parse_fscore_mode(p.at("f_mode").get<std::string>());
        m.provenance.missing_policy = parse_missing_policy(p.at("missing_policy").get<std::string>());
        m.provenance.log_digest = p.at("log_digest").get<std::string>();
        m.provenance.run_manifest = p.value("run_manifest", std::string{});
        m.provenance.family_extension = p.value("family_extension", false);
        m.warnings = j.value("warnings", std::vector<std::string>{});
        if (j.contains("member_ids")) {
            m.member_ids = j.at("member_ids").get<std::vector<std::string>>();
        } else {
            m.member_ids = read_id_list(base_dir / j.at("member_file").get<std::string>());
        }
        if (m.member_ids.size() != j.at("size").get<std::size_t>()) {
            throw Error(ErrorKind::SpecParseError, "manifest size disagrees with its member list");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SpecParseError, std::string("bad manifest: ") + e.what());
    }
    return m;
}

SubsetManifest read_manifest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open manifest '" + path.string() + "'");
    std::ostringstream body;
    body << in.rdbuf();
    return manifest_from_json(body.str(), path.parent_path());
}

}  // namespace prunekit
