//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/context_builder.hpp"

#include <algorithm>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/strings.hpp"
#include "json_detail.hpp"

namespace atlas {
namespace context {

namespace {

std::string normalize_heading(const std::string& h) {
    std::string s = h;
    while (!s.empty() && s.front() == '#') s.erase(s.begin());
    return to_lower(trim(s));
}

std::vector<std::string> table_cells(const std::string& line) {
    std::vector<std::string> cells;
    for (auto& c : split(line, '|')) cells.push_back(trim(c));
    // Leading/trailing pipes leave empty edge cells.
    if (!cells.empty() && cells.front().empty()) cells.erase(cells.begin());
    if (!cells.empty() && cells.back().empty()) cells.pop_back();
    return cells;
}

bool is_separator_row(const std::vector<std::string>& cells) {
    for (auto& c : cells) {
        for (char ch : c)
            if (ch != '-' && ch != ':' && ch != ' ') return false;
    }
    return !cells.empty();
}

std::optional<uint64_t> parse_offset(const std::string& text) {
    std::string t = to_lower(trim(text));
    try {
        size_t used = 0;
        uint64_t v;
        if (starts_with(t, "0x"))
            v = std::stoull(t.substr(2), &used, 16);
        else
            v = std::stoull(t, &used);
        return v;
    } catch (...) {
        return std::nullopt;
    }
}

} // namespace

const std::string* DesignDoc::section_body(const std::string& heading) const {
    std::string want = normalize_heading(heading);
    for (auto& [h, body] : sections)
        if (normalize_heading(h) == want) return &body;
    return nullptr;
}

DesignDoc ingest_design_doc(const std::string& text) {
    DesignDoc doc;
    std::istringstream in(text);
    std::string line;

    std::string heading = "body";
    std::string body;
    std::vector<std::pair<std::string, std::string>> raw_sections;
    auto flush = [&] {
        raw_sections.emplace_back(heading, body);
        body.clear();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            flush();
            heading = trim(line.substr(line.find_first_not_of('#')));
        } else {
            body += line;
            body += "\n";
        }
    }
    flush();

    // Merge sections whose normalized headings collide; drop an empty
    // leading "body" when real headings exist.
    for (auto& [h, b] : raw_sections) {
        if (h == "body" && trim(b).empty() && raw_sections.size() > 1) continue;
        bool merged = false;
        for (auto& [eh, eb] : doc.sections) {
            if (normalize_heading(eh) == normalize_heading(h)) {
                eb += b;
                merged = true;
                break;
            }
        }
        if (!merged) doc.sections.emplace_back(h, b);
    }
    if (doc.sections.empty()) doc.sections.emplace_back("body", "");

    // Register map: first pipe table whose header mentions "offset".
    std::istringstream in2(text);
    std::vector<std::string> lines;
    while (std::getline(in2, line)) lines.push_back(line);
    for (size_t i = 0; i < lines.size() && doc.register_map.empty(); ++i) {
        if (lines[i].find('|') == std::string::npos) continue;
        auto header = table_cells(lines[i]);
        int name_col = -1;
        int offset_col = -1;
        int access_col = -1;
        int desc_col = -1;
        for (size_t c = 0; c < header.size(); ++c) {
            std::string h = to_lower(header[c]);
            if (h.find("offset") != std::string::npos) offset_col = static_cast<int>(c);
            else if (h.find("access") != std::string::npos) access_col = static_cast<int>(c);
            else if (h.find("desc") != std::string::npos) desc_col = static_cast<int>(c);
            else if (name_col < 0) name_col = static_cast<int>(c);
        }
        if (offset_col < 0) continue;

        std::set<uint64_t> seen_offsets;
        for (size_t r = i + 1; r < lines.size(); ++r) {
            if (lines[r].find('|') == std::string::npos) break;
            auto cells = table_cells(lines[r]);
            if (is_separator_row(cells)) continue;
            if (static_cast<int>(cells.size()) <= offset_col) continue;
            auto offset = parse_offset(cells[offset_col]);
            if (!offset) continue;
            if (!seen_offsets.insert(*offset).second) continue; // first row wins
            RegisterRow row;
            row.offset = *offset;
            if (name_col >= 0 && name_col < static_cast<int>(cells.size()))
                row.name = cells[name_col];
            if (access_col >= 0 && access_col < static_cast<int>(cells.size()))
                row.access = cells[access_col];
            if (desc_col >= 0 && desc_col < static_cast<int>(cells.size()))
                row.description = cells[desc_col];
            doc.register_map.push_back(std::move(row));
        }
    }
    return doc;
}

RtlSummary summarize_rtl(const rtl::AstDigest& digest,
                         const std::vector<assets::DetectedAsset>& detected) {
    RtlSummary summary;
    summary.provenance = SummaryProvenance::deterministic;
    std::ostringstream text;
    std::set<std::string> highlighted_names;
    auto highlight = [&](const std::string& sig, const std::string& why) {
        if (highlighted_names.insert(sig).second) {
            summary.highlighted.push_back(Highlight{sig, why});
            return;
        }
        for (auto& h : summary.highlighted)
            if (h.signal == sig && h.why.find(why) == std::string::npos)
                h.why += "; " + why;
    };

    text << "Module " << digest.module_name << ": " << digest.reg_count << " registers, "
         << digest.net_count << " nets, " << digest.always_count << " always blocks, "
         << digest.case_count << " case statements.";
    if (!digest.clocking.clock.empty()) {
        text << " Clocked by " << digest.clocking.edge << " " << digest.clocking.clock;
        if (!digest.clocking.reset.empty())
            text << " with " << (digest.clocking.reset_active_low ? "active-low "
                                                                  : "active-high ")
                 << "reset " << digest.clocking.reset;
        text << ".";
    }

    for (auto& asset : detected) {
        text << " " << asset.signal << " is a "
             << knowledge::asset_type_name(asset.asset_type) << " asset (" << asset.role
             << ")";
        auto d = digest.drivers.find(asset.signal);
        if (d != digest.drivers.end() && !d->second.empty())
            text << " driven by " << join(d->second, ", ");
        text << ".";
        highlight(asset.signal, asset.rationale);
    }

    for (auto& fsm : digest.fsms) {
        text << " FSM over " << fsm.state_signal << " with " << fsm.state_names.size()
             << " states and " << fsm.transition_count << " transitions"
             << (fsm.has_default_arm ? " (default arm present)" : " (no default arm)");
        if (!fsm.armless_states.empty())
            text << "; no exit from " << join(fsm.armless_states, ", ");
        text << ".";
        highlight(fsm.state_signal, "FSM state register");
    }

    // Sticky flags and the conditions that let them persist.
    for (auto& flag : digest.sticky_flags) {
        std::string guard;
        auto facts = digest.assignments.find(flag);
        if (facts != digest.assignments.end()) {
            for (auto& f : facts->second)
                if (f.self_referential && !f.guard.empty()) guard = f.guard;
        }
        std::string why = "sticky flag: holds its own value";
        if (!guard.empty()) why += "; no clear while " + guard;
        text << " " << flag << " is sticky" << (guard.empty() ? "" : " under " + guard)
             << " and could persist or go unknown.";
        highlight(flag, why);
        if (!guard.empty()) {
            for (auto& g : word_tokens(guard)) {
                if (digest.widths.count(g) && g != flag)
                    highlight(g, "guards the persist path of " + flag);
            }
        }
    }
    summary.text = text.str();
    return summary;
}

RtlSummary sanitize_backend_summary(RtlSummary summary,
                                    const std::vector<rtl::SignalDecl>& symbols) {
    std::set<std::string> names;
    for (auto& s : symbols) names.insert(s.name);
    std::vector<Highlight> kept;
    for (auto& h : summary.highlighted) {
        if (names.count(h.signal)) {
            kept.push_back(h);
        } else {
            summary.warnings.push_back("dropped highlight for unknown signal '" +
                                       h.signal + "'");
        }
    }
    summary.highlighted = std::move(kept);
    return summary;
}

SocContext assemble_context(const std::optional<DesignDoc>& doc,
                            const std::optional<rtl::AstDigest>& digest,
                            const std::optional<RtlSummary>& summary) {
    if (!doc) throw MissingContext("design_doc");
    if (!digest) throw MissingContext("ast_digest");
    if (!summary) throw MissingContext("rtl_summary");
    SocContext ctx;
    ctx.doc = *doc;
    ctx.digest = *digest;
    ctx.summary = *summary;
    return ctx;
}

ContextAssembly& ContextAssembly::with_doc(DesignDoc doc) {
    doc_ = std::move(doc);
    return *this;
}
ContextAssembly& ContextAssembly::with_digest(rtl::AstDigest digest) {
    digest_ = std::move(digest);
    return *this;
}
ContextAssembly& ContextAssembly::with_summary(RtlSummary summary) {
    summary_ = std::move(summary);
    return *this;
}
SocContext ContextAssembly::assemble() const {
    return assemble_context(doc_, digest_, summary_);
}

std::vector<Discrepancy> find_discrepancies(const DesignDoc& doc,
                                            const std::vector<rtl::SignalDecl>& symbols) {
    std::vector<Discrepancy> out;
    std::set<std::string> tokens;
    for (auto& s : symbols)
        for (auto& t : word_tokens(s.name)) tokens.insert(t);
    for (auto& row : doc.register_map) {
        bool present = false;
        for (auto& t : word_tokens(row.name))
            if (tokens.count(t)) present = true;
        if (!present && !row.name.empty())
            out.push_back({row.name, "register map row has no matching RTL signal"});
    }
    return out;
}

// ------------------------------------------------------- serialization ----

namespace {

using detail::Json;

Json digest_to_json(const rtl::AstDigest& d) {
    Json j;
    j["module"] = d.module_name;
    Json ports = Json::array();
    for (auto& p : d.ports)
        ports.push_back({{"name", p.name}, {"direction", p.direction}, {"width", p.width}});
    j["ports"] = ports;
    j["reg_count"] = d.reg_count;
    j["net_count"] = d.net_count;
    j["always_count"] = d.always_count;
    j["case_count"] = d.case_count;
    j["clock"] = d.clocking.clock;
    j["reset"] = d.clocking.reset;
    j["reset_active_low"] = d.clocking.reset_active_low;
    j["edge"] = d.clocking.edge;
    Json fsms = Json::array();
    for (auto& f : d.fsms) {
        fsms.push_back({{"state_signal", f.state_signal},
                        {"state_names", f.state_names},
                        {"state_values", f.state_values},
                        {"transition_count", f.transition_count},
                        {"has_default_arm", f.has_default_arm},
                        {"armless_states", f.armless_states}});
    }
    j["fsms"] = fsms;
    j["drivers"] = d.drivers;
    j["fanout"] = d.fanout;
    Json assigns = Json::object();
    for (auto& [name, facts] : d.assignments) {
        Json arr = Json::array();
        for (auto& f : facts)
            arr.push_back({{"lhs", f.lhs},
                           {"rhs", f.rhs},
                           {"guard", f.guard},
                           {"self_referential", f.self_referential}});
        assigns[name] = arr;
    }
    j["assignments"] = assigns;
    j["widths"] = d.widths;
    j["registers"] = std::vector<std::string>(d.registers.begin(), d.registers.end());
    j["reset_values"] = d.reset_values;
    j["sticky_flags"] = d.sticky_flags;
    return j;
}

rtl::AstDigest digest_from_json(const Json& j) {
    rtl::AstDigest d;
    d.module_name = j.value("module", "");
    for (auto& p : j.value("ports", Json::array()))
        d.ports.push_back({p.value("name", ""), p.value("direction", ""),
                           p.value("width", 1)});
    d.reg_count = j.value("reg_count", size_t{0});
    d.net_count = j.value("net_count", size_t{0});
    d.always_count = j.value("always_count", size_t{0});
    d.case_count = j.value("case_count", size_t{0});
    d.clocking.clock = j.value("clock", "");
    d.clocking.reset = j.value("reset", "");
    d.clocking.reset_active_low = j.value("reset_active_low", true);
    d.clocking.edge = j.value("edge", "posedge");
    for (auto& f : j.value("fsms", Json::array())) {
        rtl::FsmSummary s;
        s.state_signal = f.value("state_signal", "");
        for (auto& n : f.value("state_names", Json::array()))
            s.state_names.push_back(n.get<std::string>());
        for (auto& n : f.value("state_values", Json::array()))
            s.state_values.push_back(n.get<uint64_t>());
        s.transition_count = f.value("transition_count", size_t{0});
        s.has_default_arm = f.value("has_default_arm", false);
        for (auto& n : f.value("armless_states", Json::array()))
            s.armless_states.push_back(n.get<std::string>());
        d.fsms.push_back(std::move(s));
    }
    if (j.contains("drivers"))
        d.drivers = j["drivers"].get<std::map<std::string, std::vector<std::string>>>();
    if (j.contains("fanout"))
        d.fanout = j["fanout"].get<std::map<std::string, std::vector<std::string>>>();
    if (j.contains("assignments")) {
        for (auto it = j["assignments"].begin(); it != j["assignments"].end(); ++it) {
            std::vector<rtl::AssignmentFact> facts;
            for (auto& f : it.value()) {
                rtl::AssignmentFact fact;
                fact.lhs = f.value("lhs", "");
                fact.rhs = f.value("rhs", "");
                fact.guard = f.value("guard", "");
                fact.self_referential = f.value("self_referential", false);
                facts.push_back(std::move(fact));
            }
            d.assignments[it.key()] = std::move(facts);
        }
    }
    if (j.contains("widths")) d.widths = j["widths"].get<std::map<std::string, int>>();
    for (auto& s : j.value("registers", Json::array()))
        d.registers.insert(s.get<std::string>());
    if (j.contains("reset_values"))
        d.reset_values = j["reset_values"].get<std::map<std::string, uint64_t>>();
    for (auto& s : j.value("sticky_flags", Json::array()))
        d.sticky_flags.push_back(s.get<std::string>());
    return d;
}

} // namespace

std::string serialize_context(const SocContext& ctx) {
    Json j;
    Json doc;
    Json sections = Json::array();
    for (auto& [h, b] : ctx.doc.sections) sections.push_back({{"heading", h}, {"body", b}});
    doc["sections"] = sections;
    Json regs = Json::array();
    for (auto& r : ctx.doc.register_map)
        regs.push_back({{"name", r.name},
                        {"offset", r.offset},
                        {"access", r.access},
                        {"description", r.description}});
    doc["register_map"] = regs;
    doc["source_path"] = ctx.doc.source_path;
    j["design_doc"] = doc;

    j["ast_digest"] = digest_to_json(ctx.digest);

    Json sum;
    sum["text"] = ctx.summary.text;
    Json hl = Json::array();
    for (auto& h : ctx.summary.highlighted)
        hl.push_back({{"signal", h.signal}, {"why", h.why}});
    sum["highlighted"] = hl;
    sum["provenance"] = ctx.summary.provenance == SummaryProvenance::deterministic
                            ? "deterministic"
                            : "backend";
    sum["warnings"] = ctx.summary.warnings;
    j["rtl_summary"] = sum;

    Json disc = Json::array();
    for (auto& d : ctx.discrepancies)
        disc.push_back({{"subject", d.subject}, {"note", d.note}});
    j["discrepancies"] = disc;
    return j.dump(2) + "\n";
}

SocContext parse_context(const std::string& json_text) {
    Json j = detail::parse_json(json_text, "context bundle");
    SocContext ctx;
    const Json& doc = detail::require_field(j, "design_doc", "context bundle");
    for (auto& s : doc.value("sections", Json::array()))
        ctx.doc.sections.emplace_back(s.value("heading", ""), s.value("body", ""));
    for (auto& r : doc.value("register_map", Json::array())) {
        RegisterRow row;
        row.name = r.value("name", "");
        row.offset = r.value("offset", uint64_t{0});
        row.access = r.value("access", "");
        row.description = r.value("description", "");
        ctx.doc.register_map.push_back(std::move(row));
    }
    ctx.doc.source_path = doc.value("source_path", "");

    ctx.digest = digest_from_json(detail::require_field(j, "ast_digest", "context bundle"));

    const Json& sum = detail::require_field(j, "rtl_summary", "context bundle");
    ctx.summary.text = sum.value("text", "");
    for (auto& h : sum.value("highlighted", Json::array()))
        ctx.summary.highlighted.push_back({h.value("signal", ""), h.value("why", "")});
    ctx.summary.provenance =
        sum.value("provenance", "deterministic") == std::string("backend")
            ? SummaryProvenance::backend
            : SummaryProvenance::deterministic;
    for (auto& w : sum.value("warnings", Json::array()))
        ctx.summary.warnings.push_back(w.get<std::string>());

    for (auto& d : j.value("discrepancies", Json::array()))
        ctx.discrepancies.push_back({d.value("subject", ""), d.value("note", "")});
    return ctx;
}

} // namespace context
} // namespace atlas
