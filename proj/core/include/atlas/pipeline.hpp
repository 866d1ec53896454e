//
// atlas — end-to-end pipeline orchestration, fixtures, and the run report
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "atlas/backend.hpp"
#include "atlas/context_builder.hpp"
#include "atlas/minicheck.hpp"
#include "atlas/propgen.hpp"
#include "atlas/threat_mapper.hpp"

namespace atlas {
namespace pipeline {

inline constexpr const char* kReportSchemaVersion = "1";

enum class ContextPart { tmdb, design_doc, ast_digest, rtl_summary };

const char* context_part_name(ContextPart part);
std::optional<ContextPart> context_part_from_name(const std::string& name);

struct RunConfig {
    std::string tmdb_path;
    std::string asset_definitions_path;
    std::vector<std::string> design_files;
    std::string design_doc_path;
    std::string traces_dir;
    BackendMode backend = BackendMode::deterministic_template;
    int top_k = 3;
    int max_iterations = 3;   // hard upper bound 3
    int path_depth = 1;
    std::string output_dir;
    std::string corpus_dir;   // corpus mode: one run per fixture
    int jobs = 1;

    void validate() const;    // throws ConfigError
};

/// TOML-like `key = value` file with [module] sections; CLI flags override.
RunConfig load_run_config(const std::string& path);

struct Fixture {
    std::string name;
    std::string buggy_rtl_path;
    std::string fixed_rtl_path;
    std::string doc_path;
    std::string buggy_trace_path;
    std::string fixed_trace_path;
    std::string bug_label;
    int target_cwe = 0;
    std::string expected_buggy_verdict; // "fails"
    std::string expected_fixed_verdict; // "holds"
};

std::vector<Fixture> load_corpus(const std::string& corpus_dir);

struct ReportRow {
    std::string module_name;
    std::string bug;
    std::string asset;
    std::vector<int> detected_cwes;
    bool property_generated = false;
    std::string property_name;
    std::string property_text;
    std::string verdict_buggy;
    std::string verdict_fixed;
    size_t fixed_cover_hits = 0;
    int iterations_used = 0;
    std::vector<std::string> flags;
    int golden_target = 0;       // 0 when no golden
    bool target_detected = false;
    bool prop_ok = false;        // verdict matches golden
    bool fv_ok = false;          // buggy fails and fixed holds with cover hit
};

struct Aggregates {
    double cwe_detection_rate = 0.0;
    double property_accuracy_given_detection = 0.0;
    size_t rows = 0;
    size_t detected = 0;
    size_t accurate = 0;

    bool operator==(const Aggregates&) const = default;
};

struct RunReport {
    std::string schema_version = kReportSchemaVersion;
    std::string backend_mode;
    std::vector<std::string> ablation; // dropped parts
    std::vector<ReportRow> rows;
    Aggregates aggregates;
};

/// Recomputes aggregates from rows; stored aggregates must match exactly.
Aggregates recompute_aggregates(const RunReport& report);

/// Full pipeline: parse, detect assets, map CWEs, build context, prune,
/// generate, validate, cover, check traces, refine, emit, report. Partial
/// per-module failures land in row flags; only an unloadable TMDB or a
/// fully unloadable design set is fatal.
RunReport run_pipeline(const RunConfig& config);

/// Re-runs with the dropped context parts replaced by empty stand-ins.
/// Dropping the TMDB downgrades mapping to a title-keyword fallback.
RunReport ablate(const RunConfig& config, const std::set<ContextPart>& drop);

enum class ReportFormat { json, table_text };

std::string render_report(const RunReport& report, ReportFormat format);
RunReport parse_report(const std::string& json_text);

struct GeneratedProperty {
    propgen::SecurityProperty property; // validated, covers attached
    std::string asset;
    int iterations = 1;
    std::vector<std::string> flags;
};

/// Single-design analysis used by both run_pipeline and the focused CLI
/// subcommands. Empty doc/trace paths are allowed.
struct DesignAnalysis {
    rtl::Ast ast;
    std::vector<rtl::SignalDecl> symbols;
    std::vector<rtl::FsmCandidate> fsms;
    std::vector<assets::DetectedAsset> detected;
    mapper::SocThreatModel threats;
    context::SocContext context;
    std::vector<GeneratedProperty> generated;
    std::vector<std::string> flags; // per-design notes (partial parse, ...)
};

struct AnalysisOptions {
    int top_k = 3;
    int max_iterations = 3;
    std::set<ContextPart> drop;
    std::string design_name;
    const minicheck::Trace* refine_trace = nullptr; // drives the refine loop
};

DesignAnalysis analyze_design(const std::string& rtl_source,
                              const std::string& doc_text,
                              const knowledge::Tmdb& tmdb,
                              const std::vector<knowledge::AssetDefinition>& defs,
                              GenerationBackend& backend,
                              const AnalysisOptions& options);

} // namespace pipeline
} // namespace atlas
