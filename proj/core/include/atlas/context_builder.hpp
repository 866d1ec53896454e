//
// atlas — assembles the three generation contexts: design document, AST
// digest, RTL summary
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlas/asset_detector.hpp"
#include "atlas/rtl_frontend.hpp"

namespace atlas {
namespace context {

struct RegisterRow {
    std::string name;
    uint64_t offset = 0;
    std::string access;
    std::string description;

    bool operator==(const RegisterRow&) const = default;
};

struct DesignDoc {
    std::vector<std::pair<std::string, std::string>> sections; // (heading, body)
    std::vector<RegisterRow> register_map;
    std::string source_path;

    const std::string* section_body(const std::string& heading) const;

    bool operator==(const DesignDoc&) const = default;
};

/// Markdown-like ingest: sections split on '#' headings, register map from
/// the first pipe table whose header mentions "offset".
DesignDoc ingest_design_doc(const std::string& text);

enum class SummaryProvenance { deterministic, backend };

struct Highlight {
    std::string signal;
    std::string why;

    bool operator==(const Highlight&) const = default;
};

struct RtlSummary {
    std::string text;
    std::vector<Highlight> highlighted;
    SummaryProvenance provenance = SummaryProvenance::deterministic;
    std::vector<std::string> warnings; // dropped backend highlights etc.

    bool operator==(const RtlSummary& other) const {
        return text == other.text && highlighted == other.highlighted &&
               provenance == other.provenance;
    }
};

/// Deterministic security synopsis from structural facts: one sentence per
/// asset, per FSM, and per sticky flag. Backend-provided summaries are
/// validated so highlights only ever name real signals.
RtlSummary summarize_rtl(const rtl::AstDigest& digest,
                         const std::vector<assets::DetectedAsset>& detected);

/// Validates a backend summary against the symbol table: highlights naming
/// unknown signals are dropped and recorded as warnings.
RtlSummary sanitize_backend_summary(RtlSummary summary,
                                    const std::vector<rtl::SignalDecl>& symbols);

struct Discrepancy {
    std::string subject;
    std::string note;

    bool operator==(const Discrepancy&) const = default;
};

/// The assembled generation context: three named parts, no ordering.
struct SocContext {
    DesignDoc doc;
    rtl::AstDigest digest;
    RtlSummary summary;
    std::vector<Discrepancy> discrepancies;

    bool operator==(const SocContext& other) const {
        return doc == other.doc && digest == other.digest &&
               summary == other.summary && discrepancies == other.discrepancies;
    }
};

SocContext assemble_context(const std::optional<DesignDoc>& doc,
                            const std::optional<rtl::AstDigest>& digest,
                            const std::optional<RtlSummary>& summary);

/// Order-free assembly: parts may be supplied in any order and the result
/// compares equal. assemble() throws MissingContext for an absent part.
class ContextAssembly {
public:
    ContextAssembly& with_doc(DesignDoc doc);
    ContextAssembly& with_digest(rtl::AstDigest digest);
    ContextAssembly& with_summary(RtlSummary summary);
    SocContext assemble() const;

private:
    std::optional<DesignDoc> doc_;
    std::optional<rtl::AstDigest> digest_;
    std::optional<RtlSummary> summary_;
};

/// Doc-vs-RTL cross-check: register-map names missing from the symbol
/// table become discrepancy notes, never failures.
std::vector<Discrepancy> find_discrepancies(const DesignDoc& doc,
                                            const std::vector<rtl::SignalDecl>& symbols);

/// Context bundle file: {design_doc, ast_digest, rtl_summary, discrepancies}.
std::string serialize_context(const SocContext& context);
SocContext parse_context(const std::string& json_text);

} // namespace context
} // namespace atlas
