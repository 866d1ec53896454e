//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "doctest.h"

#include "atlas/backend.hpp"
#include "atlas/errors.hpp"
#include "atlas/pipeline.hpp"
#include "json.hpp"
#include "test_helpers.hpp"

using namespace atlas;
using namespace atlas::pipeline;

namespace {

const knowledge::Tmdb& tmdb() {
    static auto t = knowledge::load_tmdb(testutil::data_path("tmdb.json"));
    return t;
}

const std::vector<knowledge::AssetDefinition>& defs() {
    static auto d =
        knowledge::load_asset_definitions(testutil::data_path("asset_definitions.json"));
    return d;
}

DesignAnalysis analyze_dma() {
    auto rtl = testutil::read_file(testutil::corpus_path("dma_sticky_abort/buggy.sv"));
    auto doc = testutil::read_file(testutil::corpus_path("dma_sticky_abort/doc.md"));
    DeterministicBackend backend;
    AnalysisOptions options;
    options.design_name = "dma_sticky_abort";
    return analyze_design(rtl, doc, tmdb(), defs(), backend, options);
}

} // namespace

TEST_CASE("dma analysis: assets, focus and the 1245 property") {
    DesignAnalysis a = analyze_dma();

    // Structural asset detection: the FSM state register and the abort flag
    // steering it.
    std::set<std::string> asset_names;
    for (auto& d : a.detected) asset_names.insert(d.signal);
    CHECK(asset_names == std::set<std::string>{"abort", "state_q"});

    // Focus pruning on the abort asset: summary+doc+cone intersect to
    // exactly the signals the property needs.
    const assets::DetectedAsset* abort_asset = nullptr;
    for (auto& d : a.detected)
        if (d.signal == "abort") abort_asset = &d;
    REQUIRE(abort_asset);
    auto focus = propgen::prune_focus(a.context, *abort_asset);
    CHECK(focus.contains("abort"));
    CHECK(focus.contains("done_i"));
    for (auto& [name, tags] : focus.signals) CHECK(!tags.empty());

    // CWE-1245 tops the mapping for both runtime-integrity assets.
    for (auto& entry : a.threats.entries) {
        REQUIRE(!entry.hits.empty());
        CHECK(entry.hits.front().cwe_id == 1245);
    }

    // The generated property is the sticky-abort check, byte for byte.
    const GeneratedProperty* prop = nullptr;
    for (auto& g : a.generated)
        if (g.property.cwe_id == 1245 &&
            g.property.status == propgen::PropertyStatus::validated) {
            prop = &g;
            break;
        }
    REQUIRE(prop);
    CHECK(prop->property.sva_text() ==
          "@(posedge clk) disable iff (!rst_n) (!done_i && abort) |-> ##1 !abort");
    REQUIRE(!prop->property.covers.empty());
    CHECK(prop->property.covers.front() == "!done_i && abort");
}

TEST_CASE("dma analysis: summary highlights the sticky flag and its guard") {
    DesignAnalysis a = analyze_dma();
    bool abort_highlighted = false;
    bool done_highlighted = false;
    for (auto& h : a.context.summary.highlighted) {
        if (h.signal == "abort") {
            abort_highlighted = true;
            CHECK(h.why.find("done_i") != std::string::npos);
        }
        if (h.signal == "done_i") done_highlighted = true;
    }
    CHECK(abort_highlighted);
    CHECK(done_highlighted);
}

TEST_CASE("corpus run: dma fixture row is fully green") {
    RunConfig config;
    config.tmdb_path = testutil::data_path("tmdb.json");
    config.asset_definitions_path = testutil::data_path("asset_definitions.json");
    config.corpus_dir = ATLAS_CORPUS_DIR;
    RunReport report = run_pipeline(config);

    const ReportRow* dma = nullptr;
    for (auto& r : report.rows)
        if (r.module_name == "dma_sticky_abort") dma = &r;
    REQUIRE(dma);
    CHECK(dma->bug == "abort sticky");
    CHECK(dma->target_detected);
    REQUIRE(!dma->detected_cwes.empty());
    CHECK(dma->detected_cwes.front() == 1245);
    CHECK(dma->property_generated);
    CHECK(dma->verdict_buggy == "fails");
    CHECK(dma->verdict_fixed == "holds");
    CHECK(dma->fixed_cover_hits >= 1);
    CHECK(dma->prop_ok);
    CHECK(dma->fv_ok);
}

TEST_CASE("report: json round trip is stable and aggregates are checked") {
    RunConfig config;
    config.tmdb_path = testutil::data_path("tmdb.json");
    config.asset_definitions_path = testutil::data_path("asset_definitions.json");
    config.corpus_dir = ATLAS_CORPUS_DIR;
    RunReport report = run_pipeline(config);

    std::string json1 = render_report(report, ReportFormat::json);
    RunReport again = parse_report(json1);
    std::string json2 = render_report(again, ReportFormat::json);
    CHECK(json1 == json2);

    // Tampered aggregates are rejected.
    auto j = nlohmann::ordered_json::parse(json1);
    j["aggregates"]["detected"] = 999;
    CHECK_THROWS_AS(parse_report(j.dump()), ParseError);

    std::string table = render_report(report, ReportFormat::table_text);
    CHECK(table.find("Module") != std::string::npos);
    CHECK(table.find("dma_sticky_abort") != std::string::npos);
}

TEST_CASE("run_pipeline: empty design list is a ConfigError") {
    RunConfig config;
    config.tmdb_path = testutil::data_path("tmdb.json");
    config.asset_definitions_path = testutil::data_path("asset_definitions.json");
    CHECK_THROWS_AS(run_pipeline(config), ConfigError);
}

TEST_CASE("run_pipeline: deterministic mode is reproducible byte for byte") {
    RunConfig config;
    config.tmdb_path = testutil::data_path("tmdb.json");
    config.asset_definitions_path = testutil::data_path("asset_definitions.json");
    config.corpus_dir = ATLAS_CORPUS_DIR;
    auto r1 = render_report(run_pipeline(config), ReportFormat::json);
    auto r2 = render_report(run_pipeline(config), ReportFormat::json);
    CHECK(r1 == r2);
}

TEST_CASE("config file: TOML-like sections and overrides") {
    std::string path = "/tmp/atlas_test_config.toml";
    {
        std::ofstream out(path);
        out << "# pipeline configuration\n";
        out << "[knowledge]\n";
        out << "tmdb = " << testutil::data_path("tmdb.json") << "\n";
        out << "asset_definitions = " << testutil::data_path("asset_definitions.json")
            << "\n";
        out << "[threat_mapper]\n";
        out << "top_k = 4\n";
        out << "[pipeline]\n";
        out << "corpus = " << std::string(ATLAS_CORPUS_DIR) << "\n";
        out << "jobs = 2\n";
    }
    RunConfig cfg = load_run_config(path);
    CHECK(cfg.top_k == 4);
    CHECK(cfg.jobs == 2);
    CHECK(!cfg.corpus_dir.empty());
    cfg.validate();

    std::ofstream bad(path);
    bad << "mystery = 1\n";
    bad.close();
    CHECK_THROWS_AS(load_run_config(path), ConfigError);
}
