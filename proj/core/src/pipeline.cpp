//
// atlas — end-to-end orchestration: parse, detect, map, contextualize,
// generate, check, emit, report
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "atlas/emitter.hpp"
#include "atlas/errors.hpp"
#include "atlas/strings.hpp"
#include "json_detail.hpp"

namespace fs = std::filesystem;

namespace atlas {
namespace pipeline {

using detail::Json;

const char* context_part_name(ContextPart part) {
    switch (part) {
        case ContextPart::tmdb: return "tmdb";
        case ContextPart::design_doc: return "design_doc";
        case ContextPart::ast_digest: return "ast_digest";
        case ContextPart::rtl_summary: return "rtl_summary";
    }
    return "?";
}

std::optional<ContextPart> context_part_from_name(const std::string& name) {
    if (name == "tmdb") return ContextPart::tmdb;
    if (name == "design_doc") return ContextPart::design_doc;
    if (name == "ast_digest") return ContextPart::ast_digest;
    if (name == "rtl_summary") return ContextPart::rtl_summary;
    return std::nullopt;
}

void RunConfig::validate() const {
    if (max_iterations < 1 || max_iterations > 3)
        throw ConfigError("max_iterations must be between 1 and 3");
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    if (corpus_dir.empty()) {
        if (design_files.empty()) throw ConfigError("no design files configured");
        if (tmdb_path.empty()) throw ConfigError("no TMDB path configured");
        for (auto& f : design_files)
            if (!fs::exists(f)) throw ConfigError("design file missing: " + f);
    } else if (!fs::exists(corpus_dir)) {
        throw ConfigError("corpus directory missing: " + corpus_dir);
    }
    if (!tmdb_path.empty() && !fs::exists(tmdb_path))
        throw ConfigError("TMDB file missing: " + tmdb_path);
    if (!asset_definitions_path.empty() && !fs::exists(asset_definitions_path))
        throw ConfigError("asset definitions file missing: " + asset_definitions_path);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config: " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') continue; // section headers document intent
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if ((value.size() >= 2 && value.front() == '"' && value.back() == '"'))
            value = value.substr(1, value.size() - 2);

        if (key == "tmdb") cfg.tmdb_path = value;
        else if (key == "asset_definitions") cfg.asset_definitions_path = value;
        else if (key == "design_files") {
            for (auto& f : split(value, ','))
                if (!trim(f).empty()) cfg.design_files.push_back(trim(f));
        } else if (key == "design_doc") cfg.design_doc_path = value;
        else if (key == "traces_dir") cfg.traces_dir = value;
        else if (key == "backend") {
            if (value == "deterministic_template") cfg.backend = BackendMode::deterministic_template;
            else if (value == "remote") cfg.backend = BackendMode::remote;
            else throw ConfigError("unknown backend mode: " + value);
        } else if (key == "top_k") cfg.top_k = std::stoi(value);
        else if (key == "max_iterations") cfg.max_iterations = std::stoi(value);
        else if (key == "path_depth") cfg.path_depth = std::stoi(value);
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "corpus") cfg.corpus_dir = value;
        else if (key == "jobs") cfg.jobs = std::stoi(value);
        else throw ConfigError("unknown config key: " + key);
    }
    return cfg;
}

std::vector<Fixture> load_corpus(const std::string& corpus_dir) {
    if (!fs::exists(corpus_dir)) throw ConfigError("corpus directory missing: " + corpus_dir);
    std::vector<std::string> names;
    for (auto& entry : fs::directory_iterator(corpus_dir))
        if (entry.is_directory()) names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());

    std::vector<Fixture> fixtures;
    for (auto& name : names) {
        fs::path dir = fs::path(corpus_dir) / name;
        Fixture f;
        f.name = name;
        f.buggy_rtl_path = (dir / "buggy.sv").string();
        f.fixed_rtl_path = (dir / "fixed.sv").string();
        f.doc_path = (dir / "doc.md").string();
        f.buggy_trace_path = (dir / "buggy_trace.csv").string();
        f.fixed_trace_path = (dir / "fixed_trace.csv").string();
        for (auto& p : {f.buggy_rtl_path, f.fixed_rtl_path, f.doc_path,
                        f.buggy_trace_path, f.fixed_trace_path})
            if (!fs::exists(p)) throw ConfigError("fixture " + name + " missing " + p);

        std::ifstream g(dir / "golden.json");
        if (!g) throw ConfigError("fixture " + name + " missing golden.json");
        std::ostringstream ss;
        ss << g.rdbuf();
        Json j = detail::parse_json(ss.str(), "golden for " + name);
        f.bug_label = j.value("bug", name);
        f.target_cwe = detail::require_field(j, "target_cwe", "golden").get<int>();
        const Json& exp = detail::require_field(j, "expected", "golden");
        f.expected_buggy_verdict = exp.value("buggy", "fails");
        f.expected_fixed_verdict = exp.value("fixed", "holds");
        fixtures.push_back(std::move(f));
    }
    return fixtures;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Title-only CWE matching: the stand-in for running without the TMDB's
/// curated threat models. Tokens are matched with plural tolerance.
std::vector<mapper::CweHit> title_fallback_hits(const std::set<std::string>& query,
                                                const knowledge::Tmdb& tmdb, int top_k) {
    auto strip_plural = [](std::string w) {
        if (w.size() > 3 && w.back() == 's') w.pop_back();
        return w;
    };
    std::vector<mapper::CweHit> hits;
    for (auto& [id, rec] : tmdb.records) {
        std::vector<std::string> title_toks;
        for (auto& t : word_tokens(rec.title)) title_toks.push_back(strip_plural(t));
        std::set<std::string> title_set(title_toks.begin(), title_toks.end());

        double score = 0;
        std::set<std::string> matched;
        for (auto& q : query) {
            auto q_toks = word_tokens(q);
            for (auto& w : q_toks) w = strip_plural(w);
            if (q_toks.size() == 1) {
                if (title_set.count(q_toks[0])) {
                    score += 1.0;
                    matched.insert(q);
                }
            } else {
                for (size_t at = 0; at + q_toks.size() <= title_toks.size(); ++at) {
                    bool all = true;
                    for (size_t i = 0; i < q_toks.size(); ++i)
                        if (title_toks[at + i] != q_toks[i]) all = false;
                    if (all) {
                        score += 2.0;
                        matched.insert(q);
                        break;
                    }
                }
            }
        }
        if (score > 0) hits.push_back({id, score, matched});
    }
    std::sort(hits.begin(), hits.end(), [](auto& a, auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.cwe_id < b.cwe_id;
    });
    size_t keep = std::min<size_t>(hits.size(), static_cast<size_t>(top_k));
    if (hits.size() > keep && keep > 0 && hits[keep].score == hits[keep - 1].score) ++keep;
    hits.resize(keep);
    return hits;
}

} // namespace

DesignAnalysis analyze_design(const std::string& rtl_source, const std::string& doc_text,
                              const knowledge::Tmdb& tmdb,
                              const std::vector<knowledge::AssetDefinition>& defs,
                              GenerationBackend& backend, const AnalysisOptions& options) {
    DesignAnalysis out;
    out.ast = rtl::parse_rtl(rtl_source);
    if (out.ast.partial) out.flags.push_back("partial parse: " +
                                             join(out.ast.diagnostics, "; "));
    out.symbols = rtl::symbol_table(out.ast);
    // Partial modules stay out of property generation but their names still
    // feed asset detection.
    out.fsms = rtl::extract_fsms(out.ast);
    out.detected = assets::detect_assets(out.symbols, defs, out.fsms);

    bool drop_tmdb = options.drop.count(ContextPart::tmdb) != 0;
    bool drop_doc = options.drop.count(ContextPart::design_doc) != 0;
    bool drop_digest = options.drop.count(ContextPart::ast_digest) != 0;
    bool drop_summary = options.drop.count(ContextPart::rtl_summary) != 0;

    auto index = knowledge::build_keyword_index(tmdb);
    if (drop_tmdb) {
        out.threats.design = options.design_name;
        out.threats.tmdb_version = "(title fallback)";
        for (auto& asset : out.detected) {
            mapper::AssetThreats entry;
            entry.asset = asset;
            entry.top_k = options.top_k;
            auto query = assets::asset_query_keywords(asset, out.fsms, out.symbols);
            entry.hits = title_fallback_hits(query, tmdb, options.top_k);
            out.threats.entries.push_back(std::move(entry));
        }
    } else {
        out.threats = mapper::build_soc_threat_model(out.detected, tmdb, index,
                                                     options.top_k, options.design_name,
                                                     out.fsms, out.symbols);
    }

    // Watch set: asset signals plus whatever the digest flags as sticky.
    std::set<std::string> watch;
    for (auto& a : out.detected) watch.insert(a.signal);
    rtl::AstDigest probe = rtl::ast_digest(out.ast, {});
    for (auto& f : probe.sticky_flags) watch.insert(f);
    rtl::AstDigest full_digest = rtl::ast_digest(out.ast, watch);

    context::DesignDoc doc =
        drop_doc ? context::DesignDoc{} : context::ingest_design_doc(doc_text);
    if (doc.sections.empty()) doc.sections.emplace_back("body", "");
    context::RtlSummary summary;
    if (!drop_summary) summary = context::summarize_rtl(full_digest, out.detected);
    rtl::AstDigest context_digest = drop_digest ? rtl::AstDigest{} : full_digest;

    out.context = context::assemble_context(doc, context_digest, summary);
    out.context.discrepancies = context::find_discrepancies(doc, out.symbols);

    // Property generation with the bounded refine loop per (asset, CWE).
    std::set<std::string> seen_sva;
    for (auto& entry : out.threats.entries) {
        for (auto& hit : entry.hits) {
            auto rec = tmdb.records.find(hit.cwe_id);
            if (rec == tmdb.records.end()) continue;

            propgen::PromptBundle bundle;
            bundle.context = out.context;
            bundle.cwe = rec->second;
            bundle.asset = entry.asset;
            bundle.focus = propgen::prune_focus(out.context, entry.asset);
            bundle.iteration = 1;

            std::vector<std::string> task_flags;
            std::vector<propgen::SecurityProperty> accepted;
            int iterations_used = 1;
            while (true) {
                std::vector<propgen::SecurityProperty> drafts;
                try {
                    drafts = propgen::generate_properties(bundle, backend);
                } catch (const NoTemplate& e) {
                    task_flags.push_back(std::string("no template: ") + e.what());
                    break;
                } catch (const BackendError& e) {
                    task_flags.push_back(std::string("backend error: ") + e.what());
                    break;
                }

                std::vector<propgen::SecurityProperty> ready;
                for (auto& d : drafts) {
                    auto p = propgen::add_nonvacuity_covers(d);
                    auto errors = propgen::validate_binding(p, out.symbols);
                    if (!errors.empty()) {
                        task_flags.push_back("binding: " + p.name + ": " +
                                             errors.front().detail);
                        continue;
                    }
                    p.status = propgen::PropertyStatus::validated;
                    ready.push_back(std::move(p));
                }
                if (ready.empty()) break;
                iterations_used = bundle.iteration;

                if (!options.refine_trace) {
                    accepted = std::move(ready);
                    break;
                }
                minicheck::VerificationOutcome outcome;
                try {
                    auto ast = minicheck::parse_sva_subset(ready.front().sva_text());
                    outcome = minicheck::eval_property(*options.refine_trace, ast);
                } catch (const Error& e) {
                    task_flags.push_back(std::string("eval: ") + e.what());
                    accepted = std::move(ready);
                    break;
                }
                auto decision =
                    propgen::refine(ready.front(), outcome, bundle.iteration);
                if (std::holds_alternative<propgen::Accept>(decision)) {
                    accepted = std::move(ready);
                    break;
                }
                if (auto* flag = std::get_if<propgen::FlagManual>(&decision)) {
                    task_flags.push_back("manual review: " + flag->reason);
                    accepted = std::move(ready);
                    break;
                }
                auto& retry = std::get<propgen::Retry>(decision);
                if (retry.next_iteration > options.max_iterations) {
                    task_flags.push_back("iteration budget exhausted");
                    accepted = std::move(ready);
                    break;
                }
                bundle.iteration = retry.next_iteration;
                bundle.prior_feedback = retry.feedback;
            }

            for (auto& p : accepted) {
                if (!seen_sva.insert(p.sva_text()).second) continue;
                GeneratedProperty g;
                g.property = std::move(p);
                g.asset = entry.asset.signal;
                g.iterations = iterations_used;
                g.flags = task_flags;
                out.generated.push_back(std::move(g));
            }
            if (accepted.empty() && !task_flags.empty()) {
                GeneratedProperty g;
                g.asset = entry.asset.signal;
                g.flags = task_flags;
                g.property.cwe_id = hit.cwe_id;
                g.property.name =
                    "cwe" + std::to_string(hit.cwe_id) + "_" + entry.asset.signal;
                out.generated.push_back(std::move(g)); // failed task, flags only
                out.generated.back().property.status = propgen::PropertyStatus::draft;
            }
        }
    }
    return out;
}

// ----------------------------------------------------------- reporting ----

Aggregates recompute_aggregates(const RunReport& report) {
    Aggregates agg;
    size_t golden_rows = 0;
    for (auto& row : report.rows) {
        if (row.golden_target == 0) continue;
        ++golden_rows;
        if (row.target_detected) {
            ++agg.detected;
            if (row.prop_ok) ++agg.accurate;
        }
    }
    agg.rows = report.rows.size();
    agg.cwe_detection_rate =
        golden_rows == 0 ? 0.0 : static_cast<double>(agg.detected) / golden_rows;
    agg.property_accuracy_given_detection =
        agg.detected == 0 ? 0.0 : static_cast<double>(agg.accurate) / agg.detected;
    return agg;
}

namespace {

ReportRow fixture_row(const Fixture& fixture, const knowledge::Tmdb& tmdb,
                      const std::vector<knowledge::AssetDefinition>& defs,
                      GenerationBackend& backend, const RunConfig& config,
                      const std::set<ContextPart>& drop) {
    ReportRow row;
    row.module_name = fixture.name;
    row.bug = fixture.bug_label;
    row.golden_target = fixture.target_cwe;

    std::string rtl;
    std::string doc;
    minicheck::Trace buggy;
    minicheck::Trace fixed;
    try {
        rtl = read_file(fixture.buggy_rtl_path);
        doc = read_file(fixture.doc_path);
        buggy = minicheck::load_trace_csv(fixture.buggy_trace_path);
        fixed = minicheck::load_trace_csv(fixture.fixed_trace_path);
    } catch (const Error& e) {
        row.flags.push_back(std::string("fixture load: ") + e.what());
        return row;
    }

    AnalysisOptions options;
    options.top_k = config.top_k;
    options.max_iterations = config.max_iterations;
    options.drop = drop;
    options.design_name = fixture.name;
    options.refine_trace = &buggy;

    DesignAnalysis analysis;
    try {
        analysis = analyze_design(rtl, doc, tmdb, defs, backend, options);
    } catch (const Error& e) {
        row.flags.push_back(std::string("analysis: ") + e.what());
        return row;
    }
    for (auto& f : analysis.flags) row.flags.push_back(f);

    // The displayed CWE list: the asset entry ranking the golden target
    // best, otherwise the strongest entry.
    const mapper::AssetThreats* shown = nullptr;
    size_t best_rank = SIZE_MAX;
    for (auto& entry : analysis.threats.entries) {
        for (size_t i = 0; i < entry.hits.size(); ++i) {
            if (entry.hits[i].cwe_id == fixture.target_cwe && i < best_rank) {
                best_rank = i;
                shown = &entry;
            }
        }
    }
    if (!shown) {
        double best_score = -1;
        for (auto& entry : analysis.threats.entries) {
            if (!entry.hits.empty() && entry.hits.front().score > best_score) {
                best_score = entry.hits.front().score;
                shown = &entry;
            }
        }
    }
    if (shown) {
        row.asset = shown->asset.signal;
        for (auto& h : shown->hits) row.detected_cwes.push_back(h.cwe_id);
    }
    row.target_detected =
        std::find(row.detected_cwes.begin(), row.detected_cwes.end(),
                  fixture.target_cwe) != row.detected_cwes.end();

    // The property for the golden CWE: first validated one.
    const GeneratedProperty* chosen = nullptr;
    for (auto& g : analysis.generated) {
        if (g.property.cwe_id == fixture.target_cwe &&
            g.property.status == propgen::PropertyStatus::validated) {
            chosen = &g;
            break;
        }
    }
    if (chosen) {
        row.property_generated = true;
        row.property_name = chosen->property.name;
        row.property_text = chosen->property.sva_text();
        row.iterations_used = chosen->iterations;
        for (auto& f : chosen->flags) row.flags.push_back(f);
        try {
            auto ast = minicheck::parse_sva_subset(chosen->property.sva_text());
            auto buggy_out = minicheck::eval_property(buggy, ast);
            auto fixed_out = minicheck::eval_property(fixed, ast);
            row.verdict_buggy = minicheck::verdict_name(buggy_out.verdict);
            row.verdict_fixed = minicheck::verdict_name(fixed_out.verdict);
            for (auto& cover : chosen->property.covers)
                row.fixed_cover_hits += minicheck::eval_cover(fixed, cover).size();
        } catch (const Error& e) {
            row.flags.push_back(std::string("trace check: ") + e.what());
        }
        row.prop_ok = row.verdict_buggy == fixture.expected_buggy_verdict &&
                      row.verdict_fixed == fixture.expected_fixed_verdict;
        row.fv_ok = row.verdict_buggy == "fails" && row.verdict_fixed == "holds" &&
                    row.fixed_cover_hits >= 1;
    }

    // Emission: the design's validated properties become the checker.
    if (!config.output_dir.empty()) {
        try {
            emitter::EmitPlan plan;
            plan.design_files = {fixture.buggy_rtl_path};
            plan.top_module = analysis.ast.root.label;
            plan.clock = analysis.context.digest.clocking.clock.empty()
                             ? "clk"
                             : analysis.context.digest.clocking.clock;
            plan.reset = analysis.context.digest.clocking.reset;
            plan.reset_active_low = analysis.context.digest.clocking.reset_active_low;
            plan.symbols = analysis.symbols;
            for (auto& g : analysis.generated)
                if (g.property.status == propgen::PropertyStatus::validated)
                    plan.properties.push_back(g.property);
            fs::create_directories(config.output_dir);
            std::ofstream sv(fs::path(config.output_dir) /
                             (plan.top_module + "_checker.sv"));
            sv << emitter::emit_sva_checker(plan);
            std::ofstream tcl(fs::path(config.output_dir) /
                              (plan.top_module + "_fpv.tcl"));
            tcl << emitter::emit_tcl_harness(plan);
        } catch (const Error& e) {
            row.flags.push_back(std::string("emit: ") + e.what());
        }
    }
    return row;
}

RunReport run_common(const RunConfig& config, const std::set<ContextPart>& drop) {
    config.validate();
    if (drop.size() == 4) throw ConfigError("cannot drop every context and the TMDB");

    RunReport report;
    report.backend_mode = config.backend == BackendMode::deterministic_template
                              ? "deterministic_template"
                              : "remote";
    for (auto& part : drop) report.ablation.push_back(context_part_name(part));
    std::sort(report.ablation.begin(), report.ablation.end());

    std::string tmdb_path = config.tmdb_path;
    std::string defs_path = config.asset_definitions_path;
    knowledge::Tmdb tmdb = knowledge::load_tmdb(tmdb_path); // fatal when unloadable
    auto defs = knowledge::load_asset_definitions(defs_path);

    if (!config.corpus_dir.empty()) {
        auto fixtures = load_corpus(config.corpus_dir);
        std::vector<ReportRow> rows(fixtures.size());
        auto worker = [&](size_t i) {
            auto backend = make_backend(config.backend);
            rows[i] = fixture_row(fixtures[i], tmdb, defs, *backend, config, drop);
        };
        if (config.jobs > 1) {
            std::vector<std::future<void>> futures;
            for (size_t i = 0; i < fixtures.size(); ++i)
                futures.push_back(std::async(std::launch::async, worker, i));
            for (auto& f : futures) f.get();
        } else {
            for (size_t i = 0; i < fixtures.size(); ++i) worker(i);
        }
        // Stable reduction: fixture name order regardless of completion.
        report.rows = std::move(rows);
    } else {
        // Single-design mode: one row per detected asset.
        std::string rtl;
        bool any_loaded = false;
        std::string load_errors;
        for (auto& f : config.design_files) {
            try {
                rtl += read_file(f);
                rtl += "\n";
                any_loaded = true;
            } catch (const Error& e) {
                load_errors += std::string(e.what()) + "; ";
            }
        }
        if (!any_loaded) throw ConfigError("no design file could be read: " + load_errors);
        std::string doc =
            config.design_doc_path.empty() ? "" : read_file(config.design_doc_path);

        std::optional<minicheck::Trace> trace;
        if (!config.traces_dir.empty()) {
            for (auto& entry : fs::directory_iterator(config.traces_dir)) {
                if (entry.path().extension() == ".csv") {
                    trace = minicheck::load_trace_csv(entry.path().string());
                    break;
                }
            }
        }

        AnalysisOptions options;
        options.top_k = config.top_k;
        options.max_iterations = config.max_iterations;
        options.drop = drop;
        options.design_name = fs::path(config.design_files.front()).stem().string();
        if (trace) options.refine_trace = &*trace;

        auto backend = make_backend(config.backend);
        DesignAnalysis analysis = analyze_design(rtl, doc, tmdb, defs, *backend, options);
        for (auto& entry : analysis.threats.entries) {
            ReportRow row;
            row.module_name = analysis.ast.root.label;
            row.bug = "asset " + entry.asset.signal;
            row.asset = entry.asset.signal;
            for (auto& h : entry.hits) row.detected_cwes.push_back(h.cwe_id);
            for (auto& g : analysis.generated) {
                if (g.asset == entry.asset.signal &&
                    g.property.status == propgen::PropertyStatus::validated) {
                    row.property_generated = true;
                    row.property_name = g.property.name;
                    row.property_text = g.property.sva_text();
                    row.iterations_used = g.iterations;
                    break;
                }
            }
            report.rows.push_back(std::move(row));
        }
        if (!config.output_dir.empty()) {
            emitter::EmitPlan plan;
            plan.design_files = config.design_files;
            plan.top_module = analysis.ast.root.label;
            plan.clock = analysis.context.digest.clocking.clock.empty()
                             ? "clk"
                             : analysis.context.digest.clocking.clock;
            plan.reset = analysis.context.digest.clocking.reset;
            plan.reset_active_low = analysis.context.digest.clocking.reset_active_low;
            plan.symbols = analysis.symbols;
            for (auto& g : analysis.generated)
                if (g.property.status == propgen::PropertyStatus::validated)
                    plan.properties.push_back(g.property);
            fs::create_directories(config.output_dir);
            std::ofstream sv(fs::path(config.output_dir) / (plan.top_module + "_checker.sv"));
            sv << emitter::emit_sva_checker(plan);
            std::ofstream tcl(fs::path(config.output_dir) / (plan.top_module + "_fpv.tcl"));
            tcl << emitter::emit_tcl_harness(plan);
        }
    }

    report.aggregates = recompute_aggregates(report);
    return report;
}

} // namespace

RunReport run_pipeline(const RunConfig& config) { return run_common(config, {}); }

RunReport ablate(const RunConfig& config, const std::set<ContextPart>& drop) {
    return run_common(config, drop);
}

// ------------------------------------------------------- report formats ----

namespace {

Json row_to_json(const ReportRow& row) {
    Json j;
    j["module"] = row.module_name;
    j["bug"] = row.bug;
    j["asset"] = row.asset;
    j["detected_cwes"] = row.detected_cwes;
    j["property_generated"] = row.property_generated;
    j["property_name"] = row.property_name;
    j["property_text"] = row.property_text;
    j["verdict_buggy"] = row.verdict_buggy;
    j["verdict_fixed"] = row.verdict_fixed;
    j["fixed_cover_hits"] = row.fixed_cover_hits;
    j["iterations_used"] = row.iterations_used;
    j["flags"] = row.flags;
    j["golden_target"] = row.golden_target;
    j["target_detected"] = row.target_detected;
    j["prop_ok"] = row.prop_ok;
    j["fv_ok"] = row.fv_ok;
    return j;
}

ReportRow row_from_json(const Json& j) {
    ReportRow row;
    row.module_name = j.value("module", "");
    row.bug = j.value("bug", "");
    row.asset = j.value("asset", "");
    for (auto& c : j.value("detected_cwes", Json::array()))
        row.detected_cwes.push_back(c.get<int>());
    row.property_generated = j.value("property_generated", false);
    row.property_name = j.value("property_name", "");
    row.property_text = j.value("property_text", "");
    row.verdict_buggy = j.value("verdict_buggy", "");
    row.verdict_fixed = j.value("verdict_fixed", "");
    row.fixed_cover_hits = j.value("fixed_cover_hits", size_t{0});
    row.iterations_used = j.value("iterations_used", 0);
    for (auto& f : j.value("flags", Json::array()))
        row.flags.push_back(f.get<std::string>());
    row.golden_target = j.value("golden_target", 0);
    row.target_detected = j.value("target_detected", false);
    row.prop_ok = j.value("prop_ok", false);
    row.fv_ok = j.value("fv_ok", false);
    return row;
}

std::string cwe_list(const std::vector<int>& cwes) {
    std::vector<std::string> parts;
    for (int c : cwes) parts.push_back(std::to_string(c));
    return join(parts, ",");
}

} // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        Json j;
        j["schema_version"] = report.schema_version;
        j["backend_mode"] = report.backend_mode;
        j["ablation"] = report.ablation;
        Json rows = Json::array();
        for (auto& r : report.rows) rows.push_back(row_to_json(r));
        j["rows"] = rows;
        Json agg;
        agg["cwe_detection_rate"] = report.aggregates.cwe_detection_rate;
        agg["property_accuracy_given_detection"] =
            report.aggregates.property_accuracy_given_detection;
        agg["rows"] = report.aggregates.rows;
        agg["detected"] = report.aggregates.detected;
        agg["accurate"] = report.aggregates.accurate;
        j["aggregates"] = agg;
        return j.dump(2) + "\n";
    }

    // Table shaped after the evaluation summary: Module | Bug | Detected
    // CWEs | Prop | FV.
    std::vector<std::array<std::string, 5>> cells;
    cells.push_back({"Module", "Bug", "Detected CWEs", "Prop", "FV"});
    for (auto& r : report.rows) {
        std::string prop = r.golden_target ? (r.prop_ok ? "✓" : "✗")
                                           : (r.property_generated ? "✓" : "-");
        std::string fv = r.golden_target ? (r.fv_ok ? "✓" : "✗") : "-";
        cells.push_back({r.module_name, r.bug, cwe_list(r.detected_cwes), prop, fv});
    }
    std::array<size_t, 5> width = {0, 0, 0, 0, 0};
    for (auto& row : cells)
        for (size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], row[i].size());

    std::ostringstream out;
    for (size_t r = 0; r < cells.size(); ++r) {
        for (size_t i = 0; i < 5; ++i) {
            out << std::left << std::setw(static_cast<int>(width[i])) << cells[r][i];
            if (i + 1 < 5) out << " | ";
        }
        out << "\n";
        if (r == 0) {
            for (size_t i = 0; i < 5; ++i) {
                out << std::string(width[i], '-');
                if (i + 1 < 5) out << "-+-";
            }
            out << "\n";
        }
    }
    if (!report.rows.empty()) {
        out << "\n";
        out << "cwe_detection_rate: " << report.aggregates.detected << "/"
            << report.aggregates.rows << "\n";
        out << "property_accuracy_given_detection: " << report.aggregates.accurate << "/"
            << report.aggregates.detected << "\n";
    }
    return out.str();
}

RunReport parse_report(const std::string& json_text) {
    Json j = detail::parse_json(json_text, "report");
    RunReport report;
    report.schema_version = j.value("schema_version", "");
    if (report.schema_version != kReportSchemaVersion)
        throw ParseError("unsupported report schema version: " + report.schema_version);
    report.backend_mode = j.value("backend_mode", "");
    for (auto& a : j.value("ablation", Json::array()))
        report.ablation.push_back(a.get<std::string>());
    for (auto& r : j.value("rows", Json::array())) report.rows.push_back(row_from_json(r));
    const Json& agg = detail::require_field(j, "aggregates", "report");
    report.aggregates.cwe_detection_rate = agg.value("cwe_detection_rate", 0.0);
    report.aggregates.property_accuracy_given_detection =
        agg.value("property_accuracy_given_detection", 0.0);
    report.aggregates.rows = agg.value("rows", size_t{0});
    report.aggregates.detected = agg.value("detected", size_t{0});
    report.aggregates.accurate = agg.value("accurate", size_t{0});

    Aggregates check = recompute_aggregates(report);
    if (!(check == report.aggregates))
        throw ParseError("report aggregates do not match their rows");
    return report;
}

} // namespace pipeline
} // namespace atlas
