//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/knowledge.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "atlas/backend.hpp"
#include "atlas/errors.hpp"
#include "atlas/strings.hpp"
#include "json_detail.hpp"

namespace atlas {
namespace knowledge {

using detail::Json;

namespace {

const char* const kAdversaryNames[] = {
    "UnprivilegedSoftware", "SystemSoftware",  "StartupCodeSMM", "Network",
    "SoftwareSideChannel",  "SimpleHardware",  "SkilledHardware", "InsiderThreat",
};

const char* const kAssetTypeNames[] = {
    "SensitiveData",     "BootIntegrity",            "AttestationMeasurement",
    "ParametricData",    "PrivilegedSystemResources", "SharedResources",
    "RuntimeIntegrityState",
};

const std::regex kCvePattern(R"(CVE-\d{4}-\d{4,})");

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

const char* adversary_kind_name(AdversaryKind kind) {
    return kAdversaryNames[static_cast<int>(kind)];
}

std::optional<AdversaryKind> adversary_kind_from_name(const std::string& name) {
    for (int i = 0; i < 8; ++i)
        if (name == kAdversaryNames[i]) return static_cast<AdversaryKind>(i);
    return std::nullopt;
}

const char* asset_type_name(AssetType type) {
    return kAssetTypeNames[static_cast<int>(type)];
}

std::optional<AssetType> asset_type_from_name(const std::string& name) {
    for (int i = 0; i < kAssetTypeCount; ++i)
        if (name == kAssetTypeNames[i]) return static_cast<AssetType>(i);
    return std::nullopt;
}

bool Tmdb::operator==(const Tmdb& other) const {
    if (version != other.version || records.size() != other.records.size()) return false;
    for (auto& [id, rec] : records) {
        auto it = other.records.find(id);
        if (it == other.records.end()) return false;
        const ThreatModelRecord& b = it->second;
        if (rec.title != b.title || rec.adversaries != b.adversaries ||
            rec.assets != b.assets || rec.attack_surfaces != b.attack_surfaces ||
            rec.vulnerabilities != b.vulnerabilities || rec.threats != b.threats ||
            rec.related_cves != b.related_cves || rec.related_capecs != b.related_capecs ||
            rec.keywords != b.keywords || rec.reviewed != b.reviewed ||
            rec.review_notes != b.review_notes)
            return false;
    }
    return true;
}

std::vector<Violation> validate_record(const ThreatModelRecord& record) {
    std::vector<Violation> out;

    if (record.cwe_id <= 0) out.push_back({"cwe_id", "must be positive"});
    if (trim(record.title).empty()) out.push_back({"title", "empty"});

    if (record.adversaries.empty()) out.push_back({"adversaries", "empty"});

    if (trim(record.assets).empty()) out.push_back({"assets", "empty"});
    if (trim(record.attack_surfaces).empty()) out.push_back({"attack_surfaces", "empty"});
    if (trim(record.vulnerabilities).empty()) out.push_back({"vulnerabilities", "empty"});
    if (trim(record.threats).empty()) out.push_back({"threats", "empty"});

    // A threat is an exploited vulnerability, not a restatement of it. Only
    // meaningful when both are populated.
    if (!trim(record.vulnerabilities).empty() &&
        trim(record.vulnerabilities) == trim(record.threats))
        out.push_back({"threats", "duplicates vulnerabilities"});

    for (auto& cve : record.related_cves) {
        if (!std::regex_match(cve, kCvePattern))
            out.push_back({"related_cves", "bad CVE id: " + cve});
    }
    for (int capec : record.related_capecs) {
        if (capec <= 0) out.push_back({"related_capecs", "CAPEC ids must be positive"});
    }
    for (auto& k : record.keywords) {
        if (k != to_lower(k)) out.push_back({"keywords", "not lowercase: " + k});
        if (trim(k).empty()) out.push_back({"keywords", "empty keyword"});
    }
    return out;
}

namespace {

ThreatModelRecord record_from_json(const Json& j) {
    static const std::set<std::string> kAllowed = {
        "cwe_id",        "title",          "adversaries",    "assets",
        "attack_surfaces", "vulnerabilities", "threats",       "related_cves",
        "related_capecs", "keywords",       "reviewed",       "review_notes",
    };
    if (!j.is_object()) throw ParseError("record is not an object");

    std::string ctx = "record";
    if (j.contains("cwe_id") && j["cwe_id"].is_number_integer())
        ctx = "record cwe_id=" + std::to_string(j["cwe_id"].get<int>());
    detail::reject_unknown(j, kAllowed, ctx);

    ThreatModelRecord r;
    r.cwe_id = detail::require_field(j, "cwe_id", ctx).get<int>();
    r.title = detail::require_field(j, "title", ctx).get<std::string>();
    for (auto& a : detail::require_field(j, "adversaries", ctx)) {
        auto kind = adversary_kind_from_name(a.get<std::string>());
        if (!kind)
            throw SchemaError("adversaries",
                              ctx + ": unknown adversary kind '" + a.get<std::string>() + "'");
        r.adversaries.push_back(*kind);
    }
    r.assets = detail::require_field(j, "assets", ctx).get<std::string>();
    r.attack_surfaces = detail::require_field(j, "attack_surfaces", ctx).get<std::string>();
    r.vulnerabilities = detail::require_field(j, "vulnerabilities", ctx).get<std::string>();
    r.threats = detail::require_field(j, "threats", ctx).get<std::string>();
    for (auto& c : detail::require_field(j, "related_cves", ctx))
        r.related_cves.push_back(c.get<std::string>());
    for (auto& c : detail::require_field(j, "related_capecs", ctx))
        r.related_capecs.push_back(c.get<int>());
    for (auto& k : detail::require_field(j, "keywords", ctx))
        r.keywords.insert(k.get<std::string>());
    r.reviewed = detail::require_field(j, "reviewed", ctx).get<bool>();
    if (j.contains("review_notes")) r.review_notes = j["review_notes"].get<std::string>();
    return r;
}

Json record_to_json(const ThreatModelRecord& r) {
    Json j;
    j["cwe_id"] = r.cwe_id;
    j["title"] = r.title;
    Json adv = Json::array();
    for (auto a : r.adversaries) adv.push_back(adversary_kind_name(a));
    j["adversaries"] = adv;
    j["assets"] = r.assets;
    j["attack_surfaces"] = r.attack_surfaces;
    j["vulnerabilities"] = r.vulnerabilities;
    j["threats"] = r.threats;
    j["related_cves"] = r.related_cves;
    j["related_capecs"] = r.related_capecs;
    j["keywords"] = std::vector<std::string>(r.keywords.begin(), r.keywords.end());
    j["reviewed"] = r.reviewed;
    if (!r.review_notes.empty()) j["review_notes"] = r.review_notes;
    return j;
}

} // namespace

Tmdb parse_tmdb(const std::string& json_text) {
    Json j = detail::parse_json(json_text, "TMDB");
    if (!j.is_object()) throw ParseError("TMDB: top level must be an object");
    detail::reject_unknown(j, {"version", "records"}, "TMDB envelope");

    Tmdb tmdb;
    tmdb.version = detail::require_field(j, "version", "TMDB envelope").get<std::string>();
    const Json& records = detail::require_field(j, "records", "TMDB envelope");
    if (!records.is_array()) throw ParseError("TMDB: 'records' must be an array");

    for (auto& rj : records) {
        ThreatModelRecord r = record_from_json(rj);
        auto violations = validate_record(r);
        if (!violations.empty()) {
            const Violation& v = violations.front();
            throw SchemaError(v.field, "record cwe_id=" + std::to_string(r.cwe_id) +
                                           ": field '" + v.field + "' " + v.reason);
        }
        if (tmdb.records.count(r.cwe_id)) throw DuplicateCwe(r.cwe_id);
        tmdb.records.emplace(r.cwe_id, std::move(r));
    }
    return tmdb;
}

Tmdb load_tmdb(const std::string& path) { return parse_tmdb(read_file(path)); }

std::string serialize_tmdb(const Tmdb& tmdb) {
    Json j;
    j["version"] = tmdb.version;
    Json records = Json::array();
    for (auto& [id, rec] : tmdb.records) records.push_back(record_to_json(rec));
    j["records"] = records;
    return j.dump(2) + "\n";
}

void save_tmdb(const Tmdb& tmdb, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << serialize_tmdb(tmdb);
}

const std::set<int>& KeywordIndex::lookup(const std::string& keyword) const {
    static const std::set<int> kEmpty;
    auto it = entries.find(to_lower(trim(keyword)));
    return it == entries.end() ? kEmpty : it->second;
}

KeywordIndex build_keyword_index(const Tmdb& tmdb) {
    KeywordIndex index;
    index.source_version = tmdb.version;
    for (auto& [id, rec] : tmdb.records) {
        for (auto& k : rec.keywords) {
            index.entries[k].insert(id);
            // Phrases are findable by their component tokens too.
            auto tokens = word_tokens(k);
            if (tokens.size() > 1)
                for (auto& t : tokens) index.entries[t].insert(id);
        }
    }
    return index;
}

std::vector<AssetDefinition> parse_asset_definitions(const std::string& json_text) {
    Json j = detail::parse_json(json_text, "asset definitions");
    if (!j.is_array()) throw ParseError("asset definitions: top level must be an array");

    std::vector<AssetDefinition> defs;
    for (auto& dj : j) {
        detail::reject_unknown(dj, {"asset_type", "definition", "patterns"},
                               "asset definition");
        AssetDefinition d;
        std::string type_name =
            detail::require_field(dj, "asset_type", "asset definition").get<std::string>();
        auto type = asset_type_from_name(type_name);
        if (!type) throw UnknownAssetType("unknown asset type: " + type_name);
        d.asset_type = *type;
        for (auto& line : detail::require_field(dj, "definition", "asset definition"))
            d.definition.push_back(line.get<std::string>());
        for (auto& p : detail::require_field(dj, "patterns", "asset definition"))
            d.patterns.push_back(KeywordPattern::parse(p.get<std::string>()));
        if (d.patterns.empty())
            throw SchemaError("patterns", "asset definition for " + type_name +
                                              " has no patterns");
        defs.push_back(std::move(d));
    }
    return defs;
}

std::vector<AssetDefinition> load_asset_definitions(const std::string& path) {
    return parse_asset_definitions(read_file(path));
}

ThreatModelRecord draft_threat_model(const CweMeta& meta,
                                     const std::vector<ThreatModelRecord>& examples,
                                     GenerationBackend& backend) {
    if (examples.empty())
        throw InvalidDraft("drafting needs at least one exemplar threat model");

    std::string feedback;
    for (int attempt = 1; attempt <= 3; ++attempt) {
        ThreatModelRecord draft = backend.draft_record(meta, examples, feedback);
        draft.reviewed = false;
        auto violations = validate_record(draft);
        if (violations.empty()) return draft;

        std::vector<std::string> notes;
        for (auto& v : violations) notes.push_back(v.field + ": " + v.reason);
        feedback = "previous draft invalid: " + join(notes, "; ");
    }
    throw InvalidDraft("draft for CWE-" + std::to_string(meta.cwe_id) +
                       " failed validation after 3 attempts");
}

} // namespace knowledge
} // namespace atlas
