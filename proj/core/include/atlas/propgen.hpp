//
// atlas — security property generation: focus pruning, CWE-family
// templates, binding validation, non-vacuity covers, refinement loop
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "atlas/context_builder.hpp"
#include "atlas/knowledge.hpp"
#include "atlas/minicheck.hpp"

namespace atlas {

class GenerationBackend;

namespace propgen {

enum class FocusSource { summary_asset, dd_attack_surface, ast_path };

struct FocusSet {
    std::map<std::string, std::set<FocusSource>> signals; // signal -> source tags

    std::set<std::string> names() const;
    bool contains(const std::string& name) const { return signals.count(name) != 0; }
};

/// Signals named in design-doc sections that talk about interfaces, attack
/// surfaces or security, restricted to real symbol names, in doc order.
std::vector<std::string> doc_surface_signals(const context::SocContext& context);

/// Intersection pruning: asset/summary signals, doc attack-surface signals,
/// and the single-hop AST cone of the asset. An empty strict intersection
/// falls back to summary-and-path so generation still gets concrete
/// hypotheses.
FocusSet prune_focus(const context::SocContext& context,
                     const assets::DetectedAsset& asset);

struct PromptBundle {
    context::SocContext context;
    knowledge::ThreatModelRecord cwe;
    assets::DetectedAsset asset;
    FocusSet focus;
    int iteration = 1; // 1..3
    std::string prior_feedback;
};

/// Wire form of the bundle (stable field names) for the remote backend.
std::string serialize_prompt_bundle(const PromptBundle& bundle);

enum class PropertyStatus { draft, validated };

struct SecurityProperty {
    std::string name;
    int cwe_id = 0;
    std::string clock;
    std::string disable_expr;   // reset-based, "" when the property targets reset itself
    std::string antecedent;
    std::string consequent;     // may carry a leading "##n "
    std::vector<std::string> covers;
    std::set<std::string> bound_signals;
    std::string rationale;
    PropertyStatus status = PropertyStatus::draft;

    /// Full property text, regenerable from the parts (pure render).
    std::string sva_text() const;
};

std::string serialize_properties(const std::vector<SecurityProperty>& props);
std::vector<SecurityProperty> parse_properties(const std::string& json_text);

/// CWE-id to template family table; shipped data, editable.
struct FamilyTable {
    struct Family {
        std::string name;
        std::vector<int> cwes;
        std::set<std::string> keywords; // fallback overlap matching
    };
    std::vector<Family> families;

    static const FamilyTable& builtin();
    static FamilyTable load(const std::string& path);

    /// Family owning the CWE, or the nearest family by keyword overlap with
    /// the record (recorded by the caller in the rationale). Throws
    /// NoTemplate when there is no owner and no overlap.
    std::pair<const Family*, bool /*fallback*/> resolve(
        const knowledge::ThreatModelRecord& record) const;
};

std::vector<SecurityProperty> generate_properties(const PromptBundle& bundle,
                                                  GenerationBackend& backend);

enum class BindingErrorKind { unbound, width_mismatch, missing_clock };

struct BindingError {
    BindingErrorKind kind;
    std::string detail;
};

std::vector<BindingError> validate_binding(const SecurityProperty& prop,
                                           const std::vector<rtl::SignalDecl>& symbols);

/// Marks validated after a clean binding check; throws otherwise.
SecurityProperty mark_validated(SecurityProperty prop,
                                const std::vector<rtl::SignalDecl>& symbols);

/// Ensures the covers exercise the antecedent: the antecedent itself, plus
/// its delay-start prefix for multi-cycle antecedents. Idempotent.
SecurityProperty add_nonvacuity_covers(SecurityProperty prop);

struct Retry {
    int next_iteration = 0;
    std::string feedback;
};
struct Accept {};
struct FlagManual {
    std::string reason;
};
using RefineDecision = std::variant<Retry, Accept, FlagManual>;

/// Outcome-driven refinement, bounded at three iterations: counterexamples
/// and proofs are accepted, vacuous results retry with feedback,
/// inconclusive results are re-run twice then flagged for manual review.
RefineDecision refine(const SecurityProperty& prop,
                      const minicheck::VerificationOutcome& outcome,
                      int iteration);

} // namespace propgen
} // namespace atlas
