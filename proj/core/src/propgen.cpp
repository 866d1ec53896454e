//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/propgen.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "atlas/backend.hpp"
#include "atlas/errors.hpp"
#include "atlas/strings.hpp"
#include "json_detail.hpp"

namespace atlas {
namespace propgen {

std::set<std::string> FocusSet::names() const {
    std::set<std::string> out;
    for (auto& [name, tags] : signals) out.insert(name);
    return out;
}

std::vector<std::string> doc_surface_signals(const context::SocContext& ctx) {
    static const std::vector<std::string> kSurfaceWords = {
        "interface", "interfaces", "attack", "surface", "security",
        "boundary", "access", "protection",
    };
    std::set<std::string> symbol_names;
    for (auto& [name, w] : ctx.digest.widths) symbol_names.insert(name);

    std::vector<std::string> out;
    std::set<std::string> seen;
    for (auto& [heading, body] : ctx.doc.sections) {
        bool qualifies = false;
        auto heading_toks = word_tokens(heading);
        auto body_toks = word_tokens(body);
        for (auto& w : kSurfaceWords) {
            if (std::find(heading_toks.begin(), heading_toks.end(), w) !=
                    heading_toks.end() ||
                std::find(body_toks.begin(), body_toks.end(), w) != body_toks.end()) {
                qualifies = true;
                break;
            }
        }
        if (!qualifies) continue;
        // Token match against the symbol table, in order of appearance.
        std::istringstream words(body);
        std::string raw;
        while (words >> raw) {
            std::string t;
            for (char c : raw)
                if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') t += c;
            if (symbol_names.count(t) && seen.insert(t).second) out.push_back(t);
        }
    }
    return out;
}

FocusSet prune_focus(const context::SocContext& ctx, const assets::DetectedAsset& asset) {
    std::set<std::string> a; // summary highlights + the asset
    for (auto& h : ctx.summary.highlighted) a.insert(h.signal);
    a.insert(asset.signal);

    std::set<std::string> b; // doc attack-surface signals
    for (auto& s : doc_surface_signals(ctx)) b.insert(s);

    std::set<std::string> c; // single-hop cone of the asset
    auto d = ctx.digest.drivers.find(asset.signal);
    if (d != ctx.digest.drivers.end()) c.insert(d->second.begin(), d->second.end());
    auto f = ctx.digest.fanout.find(asset.signal);
    if (f != ctx.digest.fanout.end()) c.insert(f->second.begin(), f->second.end());
    if (!c.empty()) c.insert(asset.signal);

    auto build = [&](const std::set<std::string>& names) {
        FocusSet focus;
        for (auto& n : names) {
            std::set<FocusSource> tags;
            if (a.count(n)) tags.insert(FocusSource::summary_asset);
            if (b.count(n)) tags.insert(FocusSource::dd_attack_surface);
            if (c.count(n)) tags.insert(FocusSource::ast_path);
            focus.signals[n] = std::move(tags);
        }
        return focus;
    };

    std::set<std::string> strict;
    for (auto& n : a)
        if (b.count(n) && c.count(n)) strict.insert(n);
    if (!strict.empty()) return build(strict);

    std::set<std::string> relaxed;
    for (auto& n : a)
        if (c.count(n)) relaxed.insert(n);
    if (!relaxed.empty()) return build(relaxed);

    // Last resort: the asset alone still gives generation a hypothesis.
    return build({asset.signal});
}

std::string SecurityProperty::sva_text() const {
    std::string text = "@(posedge " + (clock.empty() ? std::string("clk") : clock) + ") ";
    if (!disable_expr.empty()) text += "disable iff (" + disable_expr + ") ";
    std::string ante = antecedent;
    if (ante.find(' ') != std::string::npos && ante.front() != '(')
        ante = "(" + ante + ")";
    text += ante + " |-> " + consequent;
    return text;
}

// ------------------------------------------------------- family table ----

const FamilyTable& FamilyTable::builtin() {
    static const FamilyTable table = [] {
        FamilyTable t;
        t.families = {
            {"fsm_integrity",
             {1245},
             {"fsm", "finite state machine", "state", "transition", "deadlock", "hang"}},
            {"reset_hygiene",
             {1271, 1329},
             {"reset", "uninitialized", "initialization", "password", "key", "boot"}},
            {"lock_protect",
             {1207, 1232, 1233},
             {"lock", "register lock", "write protection"}},
            {"priv_gating",
             {1191, 1243, 1244, 1220, 1262},
             {"debug", "privilege", "access control", "mode", "level"}},
            {"uncleared_data",
             {226, 1239, 1258},
             {"clear", "residual", "zeroize", "data", "reuse", "buffer"}},
            {"decode_onehot",
             {1257, 1260, 1203},
             {"address decode", "overlap", "memory map", "alias", "select"}},
            {"access_default",
             {276},
             {"default", "permission", "permissive", "reset", "open"}},
        };
        return t;
    }();
    return table;
}

FamilyTable FamilyTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto j = detail::parse_json(ss.str(), "family table");
    FamilyTable t;
    for (auto& fj : j) {
        Family f;
        f.name = detail::require_field(fj, "name", "family").get<std::string>();
        for (auto& c : detail::require_field(fj, "cwes", "family")) f.cwes.push_back(c.get<int>());
        for (auto& k : detail::require_field(fj, "keywords", "family"))
            f.keywords.insert(to_lower(k.get<std::string>()));
        t.families.push_back(std::move(f));
    }
    return t;
}

std::pair<const FamilyTable::Family*, bool> FamilyTable::resolve(
    const knowledge::ThreatModelRecord& record) const {
    for (auto& f : families)
        for (int c : f.cwes)
            if (c == record.cwe_id) return {&f, false};

    // Nearest family by keyword overlap against the record's keywords
    // (phrases count whole and through their tokens).
    std::set<std::string> expanded(record.keywords.begin(), record.keywords.end());
    for (auto& k : record.keywords) {
        auto toks = word_tokens(k);
        if (toks.size() > 1) expanded.insert(toks.begin(), toks.end());
    }
    const Family* best = nullptr;
    size_t best_overlap = 0;
    for (auto& f : families) {
        size_t overlap = 0;
        for (auto& k : f.keywords)
            if (expanded.count(k)) ++overlap;
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = &f;
        }
    }
    if (!best) throw NoTemplate(record.cwe_id);
    return {best, true};
}

// --------------------------------------------------------- generation ----

std::vector<SecurityProperty> generate_properties(const PromptBundle& bundle,
                                                  GenerationBackend& backend) {
    if (bundle.iteration < 1 || bundle.iteration > 3)
        throw IterationExceeded("prompt bundle iteration " +
                                std::to_string(bundle.iteration));
    std::vector<PropertyCandidate> candidates = backend.request(bundle);
    std::vector<SecurityProperty> out;
    for (auto& c : candidates) {
        SecurityProperty p;
        p.name = c.name;
        p.cwe_id = bundle.cwe.cwe_id;
        p.clock = c.clock;
        p.disable_expr = c.disable_expr;
        p.antecedent = c.antecedent;
        p.consequent = c.consequent;
        p.covers = c.covers;
        p.rationale = c.rationale;
        p.status = PropertyStatus::draft;
        for (auto& part : {c.antecedent, c.consequent, c.disable_expr}) {
            for (auto& id : minicheck::collect_identifiers(part)) p.bound_signals.insert(id);
        }
        for (auto& cover : c.covers)
            for (auto& id : minicheck::collect_identifiers(cover)) p.bound_signals.insert(id);
        if (!p.clock.empty()) p.bound_signals.insert(p.clock);
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------- validation ----

namespace {

void check_widths(const minicheck::Expr* e,
                  const std::map<std::string, int>& widths,
                  std::vector<BindingError>& out) {
    using minicheck::ExprOp;
    if (e->op == ExprOp::eq || e->op == ExprOp::ne || e->op == ExprOp::lt) {
        const minicheck::Expr* sig = nullptr;
        const minicheck::Expr* lit = nullptr;
        for (auto* side : {e->arg(0), e->arg(1)}) {
            if (side->op == ExprOp::signal) sig = side;
            if (side->op == ExprOp::literal) lit = side;
        }
        if (sig && lit && !lit->literal.is_x) {
            auto w = widths.find(sig->name);
            if (w != widths.end() && w->second < 64 &&
                lit->literal.v >= (uint64_t{1} << w->second)) {
                out.push_back({BindingErrorKind::width_mismatch,
                               sig->name + " is " + std::to_string(w->second) +
                                   " bits but compared against " +
                                   std::to_string(lit->literal.v)});
            }
        }
    }
    for (auto& a : e->args) check_widths(a.get(), widths, out);
}

} // namespace

std::vector<BindingError> validate_binding(const SecurityProperty& prop,
                                           const std::vector<rtl::SignalDecl>& symbols) {
    std::vector<BindingError> errors;
    std::set<std::string> names;
    std::map<std::string, int> widths;
    std::set<std::string> registers;
    for (auto& s : symbols) {
        names.insert(s.name);
        widths[s.name] = s.width;
        if (s.storage == rtl::Storage::reg) registers.insert(s.name);
    }

    for (auto& id : prop.bound_signals) {
        if (!names.count(id))
            errors.push_back({BindingErrorKind::unbound, id});
    }

    // Width compatibility over every expression part that parses.
    auto check_part = [&](const std::string& text) {
        if (trim(text).empty()) return;
        try {
            minicheck::SvaSubsetAst ast = minicheck::parse_sva_subset(text);
            for (auto& item : ast.antecedent.items) check_widths(item.get(), widths, errors);
            for (auto& item : ast.consequent.items) check_widths(item.get(), widths, errors);
            if (ast.disable_iff) check_widths(ast.disable_iff.get(), widths, errors);
        } catch (const Error&) {
            // unparseable parts surface as unbound/SVA errors elsewhere
        }
    };
    check_part(prop.antecedent);
    check_part(prop.consequent);
    for (auto& c : prop.covers) check_part(c);

    if (prop.clock.empty()) {
        for (auto& id : prop.bound_signals)
            if (registers.count(id)) {
                errors.push_back({BindingErrorKind::missing_clock,
                                  "registered signal " + id + " without a clock"});
                break;
            }
    }
    return errors;
}

SecurityProperty mark_validated(SecurityProperty prop,
                                const std::vector<rtl::SignalDecl>& symbols) {
    auto errors = validate_binding(prop, symbols);
    if (!errors.empty())
        throw UnvalidatedProperty(prop.name + " (" + errors.front().detail + ")");
    prop.status = PropertyStatus::validated;
    return prop;
}

SecurityProperty add_nonvacuity_covers(SecurityProperty prop) {
    if (trim(prop.antecedent).empty())
        throw ConfigError("add_nonvacuity_covers: empty antecedent");
    auto add = [&](const std::string& text) {
        std::string t = trim(text);
        if (t.empty()) return;
        if (std::find(prop.covers.begin(), prop.covers.end(), t) == prop.covers.end())
            prop.covers.push_back(t);
    };
    size_t delay = prop.antecedent.find("##");
    if (delay != std::string::npos) add(prop.antecedent.substr(0, delay));
    add(prop.antecedent);
    return prop;
}

RefineDecision refine(const SecurityProperty& prop,
                      const minicheck::VerificationOutcome& outcome, int iteration) {
    (void)prop;
    if (iteration < 1 || iteration > 3)
        throw IterationExceeded("refine called with iteration " +
                                std::to_string(iteration));
    using minicheck::Verdict;
    switch (outcome.verdict) {
        case Verdict::fails:
            // The counterexample is the demonstration the flow wants.
            return Accept{};
        case Verdict::holds:
            return Accept{};
        case Verdict::vacuous:
            if (iteration >= 3) return FlagManual{"vacuous after 3 iterations"};
            return Retry{iteration + 1, "antecedent never exercised"};
        case Verdict::inconclusive:
            if (iteration >= 3)
                return FlagManual{"inconclusive after two re-runs"};
            return Retry{iteration + 1, "inconclusive: relax assumptions"};
    }
    return Accept{};
}

// ------------------------------------------------------- serialization ----

using detail::Json;

std::string serialize_prompt_bundle(const PromptBundle& bundle) {
    Json j;
    j["context"] = Json::parse(context::serialize_context(bundle.context));
    Json cwe;
    cwe["cwe_id"] = bundle.cwe.cwe_id;
    cwe["title"] = bundle.cwe.title;
    Json adversaries = Json::array();
    for (auto a : bundle.cwe.adversaries)
        adversaries.push_back(knowledge::adversary_kind_name(a));
    cwe["adversaries"] = adversaries;
    cwe["assets"] = bundle.cwe.assets;
    cwe["attack_surfaces"] = bundle.cwe.attack_surfaces;
    cwe["vulnerabilities"] = bundle.cwe.vulnerabilities;
    cwe["threats"] = bundle.cwe.threats;
    cwe["keywords"] =
        std::vector<std::string>(bundle.cwe.keywords.begin(), bundle.cwe.keywords.end());
    j["cwe"] = cwe;
    Json asset;
    asset["signal"] = bundle.asset.signal;
    asset["asset_type"] = knowledge::asset_type_name(bundle.asset.asset_type);
    asset["role"] = bundle.asset.role;
    j["asset"] = asset;
    Json focus;
    for (auto& [name, tags] : bundle.focus.signals) {
        Json t = Json::array();
        for (auto tag : tags) {
            switch (tag) {
                case FocusSource::summary_asset: t.push_back("summary_asset"); break;
                case FocusSource::dd_attack_surface: t.push_back("dd_attack_surface"); break;
                case FocusSource::ast_path: t.push_back("ast_path"); break;
            }
        }
        focus[name] = t;
    }
    j["focus"] = focus;
    j["iteration"] = bundle.iteration;
    j["prior_feedback"] = bundle.prior_feedback;
    return j.dump();
}

std::string serialize_properties(const std::vector<SecurityProperty>& props) {
    Json arr = Json::array();
    for (auto& p : props) {
        Json j;
        j["name"] = p.name;
        j["cwe_id"] = p.cwe_id;
        j["clock"] = p.clock;
        j["disable_expr"] = p.disable_expr;
        j["antecedent"] = p.antecedent;
        j["consequent"] = p.consequent;
        j["covers"] = p.covers;
        j["bound_signals"] =
            std::vector<std::string>(p.bound_signals.begin(), p.bound_signals.end());
        j["rationale"] = p.rationale;
        j["status"] = p.status == PropertyStatus::validated ? "validated" : "draft";
        j["sva"] = p.sva_text();
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::vector<SecurityProperty> parse_properties(const std::string& json_text) {
    Json arr = detail::parse_json(json_text, "property set");
    std::vector<SecurityProperty> out;
    for (auto& j : arr) {
        SecurityProperty p;
        p.name = detail::require_field(j, "name", "property").get<std::string>();
        p.cwe_id = detail::require_field(j, "cwe_id", "property").get<int>();
        p.clock = j.value("clock", "");
        p.disable_expr = j.value("disable_expr", "");
        p.antecedent = j.value("antecedent", "");
        p.consequent = j.value("consequent", "");
        for (auto& c : j.value("covers", Json::array()))
            p.covers.push_back(c.get<std::string>());
        for (auto& b : j.value("bound_signals", Json::array()))
            p.bound_signals.insert(b.get<std::string>());
        p.rationale = j.value("rationale", "");
        p.status = j.value("status", "draft") == std::string("validated")
                       ? PropertyStatus::validated
                       : PropertyStatus::draft;
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace propgen
} // namespace atlas
