//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "doctest.h"

#include <algorithm>

#include "atlas/errors.hpp"
#include "atlas/knowledge.hpp"
#include "json.hpp"
#include "test_helpers.hpp"

using namespace atlas;
using namespace atlas::knowledge;

namespace {

ThreatModelRecord sample_record() {
    ThreatModelRecord r;
    r.cwe_id = 1245;
    r.title = "Improper Finite State Machines (FSMs) in Hardware Logic";
    r.adversaries = {AdversaryKind::SimpleHardware};
    r.assets = "Hardware State and Logic Integrity";
    r.attack_surfaces = "Hardware Interfaces and State Machine Logic";
    r.vulnerabilities = "Improper or insecure FSM design";
    r.threats = "Exploiting undefined or insecure FSM transitions";
    r.keywords = {"fsm", "state", "transition"};
    return r;
}

} // namespace

TEST_CASE("bundled TMDB loads and is fully reviewed-validated") {
    Tmdb tmdb = load_tmdb(testutil::data_path("tmdb.json"));
    CHECK(tmdb.records.size() >= 25);
    for (auto& [id, rec] : tmdb.records) CHECK(validate_record(rec).empty());

    // Table-1 shaped CWE-1245 entry.
    REQUIRE(tmdb.records.count(1245));
    const ThreatModelRecord& r = tmdb.records.at(1245);
    CHECK(r.adversaries == std::vector<AdversaryKind>{AdversaryKind::SimpleHardware});
    CHECK(r.assets == "Hardware State and Logic Integrity");
    CHECK(r.attack_surfaces == "Hardware Interfaces and State Machine Logic");
    CHECK(r.vulnerabilities == "Improper or insecure FSM design");
    CHECK(r.threats == "Exploiting undefined or insecure FSM transitions");
    CHECK(r.keywords.count("fsm"));
    CHECK(r.keywords.count("state"));
    CHECK(r.keywords.count("transition"));
}

TEST_CASE("load_tmdb: empty record set is legal") {
    Tmdb tmdb = parse_tmdb(R"({"version": "t", "records": []})");
    CHECK(tmdb.records.empty());
    CHECK(tmdb.version == "t");
}

TEST_CASE("load_tmdb: empty template field is a SchemaError naming the field") {
    std::string text = R"({"version":"t","records":[{
      "cwe_id": 1245, "title": "x", "adversaries": ["SimpleHardware"],
      "assets": "a", "attack_surfaces": "s", "vulnerabilities": "v",
      "threats": "", "related_cves": [], "related_capecs": [],
      "keywords": [], "reviewed": false}]})";
    try {
        parse_tmdb(text);
        CHECK(false);
    } catch (const SchemaError& e) {
        CHECK(e.field() == "threats");
        CHECK(std::string(e.what()).find("1245") != std::string::npos);
    }
}

TEST_CASE("load_tmdb: missing field / unknown field / duplicate cwe") {
    CHECK_THROWS_AS(parse_tmdb("not json"), ParseError);
    std::string missing = R"({"version":"t","records":[{
      "cwe_id": 1, "title": "x", "adversaries": ["Network"],
      "assets": "a", "attack_surfaces": "s", "vulnerabilities": "v",
      "related_cves": [], "related_capecs": [], "keywords": [], "reviewed": false}]})";
    CHECK_THROWS_AS(parse_tmdb(missing), SchemaError);

    std::string unknown = R"({"version":"t","records":[],"extra":1})";
    CHECK_THROWS_AS(parse_tmdb(unknown), SchemaError);

    std::string rec = R"({
      "cwe_id": 7, "title": "x", "adversaries": ["Network"],
      "assets": "a", "attack_surfaces": "s", "vulnerabilities": "v", "threats": "t",
      "related_cves": [], "related_capecs": [], "keywords": [], "reviewed": false})";
    std::string dup = R"({"version":"t","records":[)" + rec + "," + rec + "]}";
    CHECK_THROWS_AS(parse_tmdb(dup), DuplicateCwe);
}

TEST_CASE("load is order independent") {
    Tmdb tmdb = load_tmdb(testutil::data_path("tmdb.json"));
    // Serialize, reverse record order in the JSON text, reload.
    auto j = nlohmann::ordered_json::parse(serialize_tmdb(tmdb));
    std::reverse(j["records"].begin(), j["records"].end());
    Tmdb reloaded = parse_tmdb(j.dump());
    CHECK(tmdb == reloaded);
}

TEST_CASE("save/load round trip") {
    Tmdb tmdb = load_tmdb(testutil::data_path("tmdb.json"));
    Tmdb again = parse_tmdb(serialize_tmdb(tmdb));
    CHECK(tmdb == again);
}

TEST_CASE("validate_record: clean Table-1 record") {
    CHECK(validate_record(sample_record()).empty());
}

TEST_CASE("validate_record: empty adversaries") {
    ThreatModelRecord r = sample_record();
    r.adversaries.clear();
    auto v = validate_record(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "adversaries");
    CHECK(v[0].reason == "empty");
}

TEST_CASE("validate_record: threats duplicating vulnerabilities") {
    ThreatModelRecord r = sample_record();
    r.threats = r.vulnerabilities;
    auto v = validate_record(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "threats");
    CHECK(v[0].reason == "duplicates vulnerabilities");
}

TEST_CASE("validate_record is total over junk") {
    ThreatModelRecord r;
    auto v = validate_record(r); // never throws, reports everything
    CHECK(v.size() >= 5);
}

TEST_CASE("build_keyword_index: membership and determinism") {
    Tmdb tmdb;
    tmdb.version = "t";
    auto mk = [&](int id, std::set<std::string> kw) {
        ThreatModelRecord r = sample_record();
        r.cwe_id = id;
        r.keywords = std::move(kw);
        tmdb.records[id] = r;
    };
    mk(101, {"fsm", "state"});
    mk(102, {"debug", "jtag"});
    mk(103, {"state", "reset"});

    KeywordIndex index = build_keyword_index(tmdb);
    CHECK(index.lookup("state") == std::set<int>{101, 103});
    CHECK(index.lookup("STATE") == std::set<int>{101, 103}); // case-insensitive
    CHECK(index.lookup("jtag") == std::set<int>{102});
    CHECK(index.lookup("missing").empty());
    CHECK(build_keyword_index(tmdb) == index);

    // Every record keyword appears; every id exists in the source.
    for (auto& [id, rec] : tmdb.records)
        for (auto& k : rec.keywords) CHECK(index.lookup(k).count(id) == 1);
    for (auto& [k, ids] : index.entries)
        for (int id : ids) CHECK(tmdb.records.count(id) == 1);
}

TEST_CASE("build_keyword_index: phrase expansion") {
    Tmdb tmdb;
    tmdb.version = "t";
    ThreatModelRecord r = sample_record();
    r.keywords = {"finite state machine"};
    tmdb.records[1245] = r;

    KeywordIndex index = build_keyword_index(tmdb);
    for (auto& k : {"finite state machine", "finite", "state", "machine"})
        CHECK(index.lookup(k).count(1245) == 1);
}

TEST_CASE("build_keyword_index: empty TMDB") {
    Tmdb tmdb;
    CHECK(build_keyword_index(tmdb).entries.empty());
}

TEST_CASE("asset definitions: bundled file carries the pinned pattern sets") {
    auto defs = load_asset_definitions(testutil::data_path("asset_definitions.json"));
    CHECK(defs.size() == 7);

    auto patterns_of = [&](AssetType type) {
        std::set<std::string> raw;
        for (auto& d : defs)
            if (d.asset_type == type)
                for (auto& p : d.patterns) raw.insert(p.raw);
        return raw;
    };
    CHECK(patterns_of(AssetType::SensitiveData) ==
          std::set<std::string>{"keys_*", "pass_*", "secret_*", "protected_*", "user_*"});
    CHECK(patterns_of(AssetType::RuntimeIntegrityState) ==
          std::set<std::string>{"state_*", "default_*", "pcr_*", "measurement_*"});
}

TEST_CASE("asset definitions: zero definitions is a legal (empty) file") {
    CHECK(parse_asset_definitions("[]").empty());
}

TEST_CASE("asset definitions: unknown type rejected") {
    std::string text =
        R"([{"asset_type": "Nonsense", "definition": ["x"], "patterns": ["a_*"]}])";
    CHECK_THROWS_AS(parse_asset_definitions(text), UnknownAssetType);
}
