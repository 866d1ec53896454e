//
// atlas — generation backends: deterministic CWE-family templates and the
// remote HTTP contract
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <semaphore>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/strings.hpp"
#include "json_detail.hpp"

#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include "httplib.h"

namespace atlas {

using propgen::FocusSource;
using propgen::PromptBundle;

namespace {

std::string literal_of(int width, uint64_t value) {
    if (width <= 1) return value ? "1'b1" : "1'b0";
    return std::to_string(width) + "'d" + std::to_string(value);
}

std::string wrap_guard(const std::string& guard) {
    // Parenthesize compound guards so the conjunction reads unambiguously.
    if (guard.find("&&") != std::string::npos || guard.find("||") != std::string::npos)
        return "(" + guard + ")";
    return guard;
}

bool has_token(const std::string& name, const std::string& token) {
    auto toks = assets::tokenize_identifier(name);
    return std::find(toks.begin(), toks.end(), token) != toks.end();
}

/// Deterministic slot filling: focus signals first, then doc-named
/// attack-surface signals, then declared registers/ports; within a tier the
/// earliest preference token wins, then name order.
class SlotPicker {
public:
    explicit SlotPicker(const PromptBundle& bundle) : bundle_(bundle) {
        for (auto& [name, tags] : bundle.focus.signals) tiers_[0].push_back(name);
        std::sort(tiers_[0].begin(), tiers_[0].end());
        tiers_[1] = propgen::doc_surface_signals(bundle.context);
        for (auto& r : bundle.context.digest.registers) tiers_[2].push_back(r);
        for (auto& p : bundle.context.digest.ports) tiers_[2].push_back(p.name);
    }

    std::optional<std::string> pick(const std::vector<std::string>& token_prefs,
                                    const std::set<std::string>& exclude,
                                    int width_filter = -1) const {
        auto ok = [&](const std::string& name) {
            if (exclude.count(name)) return false;
            auto w = bundle_.context.digest.widths.find(name);
            if (w == bundle_.context.digest.widths.end()) return false;
            if (width_filter > 0 && w->second != width_filter) return false;
            return true;
        };
        for (auto& tier : tiers_) {
            for (auto& pref : token_prefs) {
                for (auto& name : tier)
                    if (ok(name) && has_token(name, pref)) return name;
            }
        }
        // No preferred token anywhere: first viable candidate in tier order.
        for (auto& tier : tiers_) {
            for (auto& name : tier)
                if (ok(name)) return name;
        }
        return std::nullopt;
    }

private:
    const PromptBundle& bundle_;
    std::array<std::vector<std::string>, 3> tiers_;
};

struct TemplateSlots {
    std::string clock;
    std::string disable;      // reset-based disable-iff expression
    std::string reset_active; // expression true while reset asserts
};

TemplateSlots common_slots(const PromptBundle& bundle) {
    TemplateSlots s;
    const auto& clocking = bundle.context.digest.clocking;
    s.clock = clocking.clock.empty() ? "clk" : clocking.clock;
    if (!clocking.reset.empty()) {
        s.reset_active = clocking.reset_active_low ? "!" + clocking.reset : clocking.reset;
        s.disable = s.reset_active;
    }
    return s;
}

PropertyCandidate base_candidate(const PromptBundle& bundle, const TemplateSlots& slots,
                                 const std::string& stem) {
    PropertyCandidate c;
    c.name = "cwe" + std::to_string(bundle.cwe.cwe_id) + "_" + bundle.asset.signal + "_" +
             stem;
    c.clock = slots.clock;
    c.disable_expr = slots.disable;
    return c;
}

/// Fallback shape when a family cannot fill its slots: watch the asset for
/// unknown values after it is set. Degenerate but legal.
PropertyCandidate degenerate_candidate(const PromptBundle& bundle,
                                       const TemplateSlots& slots,
                                       const std::string& note) {
    PropertyCandidate c = base_candidate(bundle, slots, "known");
    const std::string& sig = bundle.asset.signal;
    int width = 1;
    auto w = bundle.context.digest.widths.find(sig);
    if (w != bundle.context.digest.widths.end()) width = w->second;
    c.antecedent = width == 1 ? sig : sig + " != " + literal_of(width, 0);
    c.consequent = "##1 !$isunknown(" + sig + ")";
    c.rationale = "degenerate asset-watch form: " + note;
    return c;
}

int width_of(const PromptBundle& bundle, const std::string& name) {
    auto it = bundle.context.digest.widths.find(name);
    return it == bundle.context.digest.widths.end() ? 1 : it->second;
}

// ---- family templates ----

std::vector<PropertyCandidate> fsm_integrity(const PromptBundle& bundle,
                                             const TemplateSlots& slots, bool relaxed) {
    std::vector<PropertyCandidate> out;
    const auto& digest = bundle.context.digest;

    // Form 1: a sticky flag in the focus cone must clear while its persist
    // guard holds.
    std::vector<std::string> flags;
    for (auto& f : digest.sticky_flags)
        if (bundle.focus.contains(f) || f == bundle.asset.signal) flags.push_back(f);
    for (auto& flag : flags) {
        std::string guard;
        auto facts = digest.assignments.find(flag);
        if (facts != digest.assignments.end()) {
            for (auto& fact : facts->second)
                if (fact.self_referential && !fact.guard.empty()) guard = fact.guard;
        }
        PropertyCandidate c = base_candidate(bundle, slots, flag + "_clears");
        if (guard.empty() || relaxed)
            c.antecedent = flag;
        else
            c.antecedent = wrap_guard(guard) + " && " + flag;
        c.consequent = "##1 !" + flag;
        c.rationale = "sticky flag " + flag +
                      (guard.empty() ? " has no clear path"
                                     : " may persist while " + guard);
        if (relaxed) c.rationale += " (antecedent relaxed after feedback)";
        out.push_back(std::move(c));
    }

    // Form 2: a state with no outgoing arc must not trap the machine.
    for (auto& fsm : digest.fsms) {
        if (fsm.state_signal != bundle.asset.signal) continue;
        int width = width_of(bundle, fsm.state_signal);
        for (auto& armless : fsm.armless_states) {
            for (size_t i = 0; i < fsm.state_names.size(); ++i) {
                if (fsm.state_names[i] != armless) continue;
                std::string lit = literal_of(width, fsm.state_values[i]);
                PropertyCandidate c =
                    base_candidate(bundle, slots, "leaves_" + to_lower(armless));
                c.antecedent = fsm.state_signal + " == " + lit;
                c.consequent = "##1 " + fsm.state_signal + " != " + lit;
                c.rationale = "state " + armless + " has no outgoing transition" +
                              (fsm.has_default_arm ? "" : " and the case has no default arm");
                out.push_back(std::move(c));
            }
        }
    }

    if (out.empty())
        out.push_back(degenerate_candidate(bundle, slots, "no sticky flag or armless state"));
    return out;
}

std::vector<PropertyCandidate> reset_hygiene(const PromptBundle& bundle,
                                             const TemplateSlots& slots) {
    using knowledge::AssetType;
    const std::string& sig = bundle.asset.signal;
    int width = width_of(bundle, sig);

    // Secret-bearing assets must come out of reset cleared whatever the RTL
    // says; other assets are held to their declared reset value.
    uint64_t expected = 0;
    bool secretish = bundle.asset.asset_type == AssetType::SensitiveData ||
                     bundle.asset.asset_type == AssetType::BootIntegrity ||
                     bundle.asset.asset_type == AssetType::AttestationMeasurement;
    auto rv = bundle.context.digest.reset_values.find(sig);
    if (!secretish && rv != bundle.context.digest.reset_values.end())
        expected = rv->second;

    PropertyCandidate c = base_candidate(bundle, slots, "reset_value");
    c.disable_expr = ""; // the property is about reset itself
    c.antecedent = slots.reset_active.empty() ? "1'b1" : slots.reset_active;
    c.consequent = "##1 " + sig + " == " + literal_of(width, expected);
    c.rationale = secretish ? "secret-bearing register must clear on reset"
                            : "register must take its reset value";
    return {c};
}

std::vector<PropertyCandidate> lock_protect(const PromptBundle& bundle,
                                            const TemplateSlots& slots) {
    const auto& digest = bundle.context.digest;
    SlotPicker picker(bundle);

    std::string lock;
    if (width_of(bundle, bundle.asset.signal) == 1 &&
        (has_token(bundle.asset.signal, "lock") || has_token(bundle.asset.signal, "lk")))
        lock = bundle.asset.signal;
    if (lock.empty())
        if (auto p = picker.pick({"lock", "lk"}, {}, 1)) lock = *p;
    if (lock.empty())
        return {degenerate_candidate(bundle, slots, "no lock signal found")};

    std::set<std::string> exclude = {lock, slots.clock, digest.clocking.reset};
    auto target = picker.pick({"cfg", "ctrl", "data", "reg", "val", "key"}, exclude);
    if (!target) return {degenerate_candidate(bundle, slots, "no locked register found")};

    PropertyCandidate c = base_candidate(bundle, slots, *target + "_stable");
    c.antecedent = lock;
    c.consequent = "##1 $stable(" + *target + ")";
    c.rationale = *target + " must hold its value while " + lock + " is set";
    return {c};
}

std::vector<PropertyCandidate> priv_gating(const PromptBundle& bundle,
                                           const TemplateSlots& slots) {
    const auto& digest = bundle.context.digest;
    SlotPicker picker(bundle);

    std::string gate;
    if (width_of(bundle, bundle.asset.signal) == 1) gate = bundle.asset.signal;
    if (gate.empty())
        if (auto p = picker.pick({"mode", "auth", "en", "priv", "level"}, {}, 1)) gate = *p;
    if (gate.empty())
        return {degenerate_candidate(bundle, slots, "no gate signal found")};

    std::set<std::string> exclude = {gate, slots.clock, digest.clocking.reset};
    auto action =
        picker.pick({"accept", "grant", "dump", "act", "we", "wr", "rd", "en", "req"},
                    exclude, 1);
    if (!action) return {degenerate_candidate(bundle, slots, "no gated action found")};

    PropertyCandidate c = base_candidate(bundle, slots, *action + "_gated");
    c.antecedent = *action;
    c.consequent = gate;
    c.rationale = *action + " must only happen under " + gate;
    return {c};
}

std::vector<PropertyCandidate> uncleared_data(const PromptBundle& bundle,
                                              const TemplateSlots& slots) {
    const auto& digest = bundle.context.digest;
    SlotPicker picker(bundle);
    const std::string& data = bundle.asset.signal;
    int width = width_of(bundle, data);

    std::set<std::string> exclude = {data, slots.clock, digest.clocking.reset};
    auto event = picker.pick({"ack", "clear", "clr", "done", "consume", "rd"}, exclude, 1);
    if (!event) return {degenerate_candidate(bundle, slots, "no clear event found")};

    PropertyCandidate c = base_candidate(bundle, slots, "cleared_after_" + *event);
    c.antecedent = *event;
    c.consequent = "##1 " + data + " == " + literal_of(width, 0);
    c.rationale = data + " must clear once " + *event + " hands the data off";
    return {c};
}

std::vector<PropertyCandidate> decode_onehot(const PromptBundle& bundle,
                                             const TemplateSlots& slots) {
    SlotPicker picker(bundle);
    const std::string& a = bundle.asset.signal;
    auto a_toks = assets::tokenize_identifier(a);
    std::string anchor = a_toks.empty() ? "sel" : a_toks.front();

    std::set<std::string> exclude = {a, slots.clock,
                                     bundle.context.digest.clocking.reset};
    auto b = picker.pick({anchor, "sel", "grant", "cs"}, exclude, 1);
    if (!b) return {degenerate_candidate(bundle, slots, "no second select found")};

    PropertyCandidate c = base_candidate(bundle, slots, "exclusive_with_" + *b);
    c.antecedent = a;
    c.consequent = "!" + *b;
    c.rationale = "selects " + a + " and " + *b + " must never assert together";
    return {c};
}

std::vector<PropertyCandidate> access_default(const PromptBundle& bundle,
                                              const TemplateSlots& slots) {
    const std::string& sig = bundle.asset.signal;
    static const std::vector<std::string> kSecureHigh = {"lock", "lk", "reglk",
                                                         "protect", "prot", "secure"};
    bool secure_high = false;
    for (auto& t : kSecureHigh)
        if (has_token(sig, t)) secure_high = true;

    PropertyCandidate c = base_candidate(bundle, slots, "secure_after_reset");
    c.disable_expr = "";
    c.antecedent = slots.reset_active.empty() ? "1'b1" : slots.reset_active;
    c.consequent = std::string("##1 ") + (secure_high ? sig : "!" + sig);
    c.rationale = secure_high
                      ? sig + " must come out of reset engaged (protection on)"
                      : sig + " must come out of reset deasserted (no permissive default)";
    return {c};
}

} // namespace

DeterministicBackend::DeterministicBackend(const propgen::FamilyTable& families)
    : families_(families) {}

std::vector<PropertyCandidate> DeterministicBackend::request(const PromptBundle& bundle) {
    auto [family, fallback] = families_.resolve(bundle.cwe);
    TemplateSlots slots = common_slots(bundle);
    bool relaxed = bundle.iteration > 1 &&
                   bundle.prior_feedback.find("never exercised") != std::string::npos;

    std::vector<PropertyCandidate> out;
    if (family->name == "fsm_integrity")
        out = fsm_integrity(bundle, slots, relaxed);
    else if (family->name == "reset_hygiene")
        out = reset_hygiene(bundle, slots);
    else if (family->name == "lock_protect")
        out = lock_protect(bundle, slots);
    else if (family->name == "priv_gating")
        out = priv_gating(bundle, slots);
    else if (family->name == "uncleared_data")
        out = uncleared_data(bundle, slots);
    else if (family->name == "decode_onehot")
        out = decode_onehot(bundle, slots);
    else if (family->name == "access_default")
        out = access_default(bundle, slots);
    else
        throw NoTemplate(bundle.cwe.cwe_id);

    if (fallback)
        for (auto& c : out)
            c.rationale += " [nearest family " + family->name + " by keyword overlap]";
    return out;
}

knowledge::ThreatModelRecord DeterministicBackend::draft_record(
    const knowledge::CweMeta& meta, const std::vector<knowledge::ThreatModelRecord>& examples,
    const std::string& feedback) {
    (void)feedback; // deterministic drafts validate first time
    using knowledge::AdversaryKind;

    // Identity case: an exemplar for the same CWE is the draft.
    for (auto& ex : examples) {
        if (ex.cwe_id == meta.cwe_id) {
            knowledge::ThreatModelRecord r = ex;
            r.reviewed = false;
            return r;
        }
    }

    knowledge::ThreatModelRecord r;
    r.cwe_id = meta.cwe_id;
    r.title = meta.title.empty() ? "CWE-" + std::to_string(meta.cwe_id) : meta.title;

    std::string lowered = to_lower(meta.title + " " + meta.description);
    auto mentions = [&](const char* w) { return lowered.find(w) != std::string::npos; };
    if (mentions("debug") || mentions("test") || mentions("jtag") || mentions("physical"))
        r.adversaries.push_back(AdversaryKind::SimpleHardware);
    if (mentions("network") || mentions("remote"))
        r.adversaries.push_back(AdversaryKind::Network);
    if (mentions("privilege") || mentions("software") || mentions("register"))
        r.adversaries.push_back(AdversaryKind::SystemSoftware);
    if (r.adversaries.empty()) r.adversaries.push_back(AdversaryKind::SystemSoftware);

    r.assets = "Assets threatened by " + r.title;
    r.attack_surfaces = "Interfaces reaching the weakness described by " + r.title;
    r.vulnerabilities =
        meta.description.empty() ? "Weakness class: " + r.title : meta.description;
    r.threats = "An adversary exploits the weakness: " + to_lower(r.title);

    // CVE/CAPEC links are lifted from the linked summaries.
    for (auto& s : meta.linked_summaries) {
        auto toks = word_tokens(s);
        for (size_t i = 0; i + 1 < toks.size(); ++i) {
            if (toks[i] == "capec") {
                try {
                    r.related_capecs.push_back(std::stoi(toks[i + 1]));
                } catch (...) {
                }
            }
        }
        size_t pos = 0;
        while ((pos = s.find("CVE-", pos)) != std::string::npos) {
            size_t end = pos + 4;
            while (end < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '-'))
                ++end;
            std::string cve = s.substr(pos, end - pos);
            if (cve.size() > 8) r.related_cves.push_back(cve);
            pos = end;
        }
    }
    std::sort(r.related_capecs.begin(), r.related_capecs.end());
    r.related_capecs.erase(std::unique(r.related_capecs.begin(), r.related_capecs.end()),
                           r.related_capecs.end());
    std::sort(r.related_cves.begin(), r.related_cves.end());
    r.related_cves.erase(std::unique(r.related_cves.begin(), r.related_cves.end()),
                         r.related_cves.end());

    // Keywords seeded from title nouns, exemplar style.
    for (auto& t : word_tokens(r.title)) {
        if (t.size() >= 4 && t != "with" && t != "that" && t != "this")
            r.keywords.insert(t);
    }
    if (r.keywords.empty()) r.keywords.insert("hardware");
    r.reviewed = false;
    return r;
}

// ------------------------------------------------------ remote backend ----

namespace {

struct ParsedUrl {
    std::string scheme_host_port;
    std::string path = "/";
};

ParsedUrl parse_url(const std::string& url) {
    ParsedUrl out;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw BackendError("bad backend url: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        out.scheme_host_port = url;
    } else {
        out.scheme_host_port = url.substr(0, path_start);
        out.path = url.substr(path_start);
    }
    return out;
}

} // namespace

struct RemoteBackend::Impl {
    RemoteBackendConfig config;
    ParsedUrl url;
    std::counting_semaphore<16> inflight;

    explicit Impl(RemoteBackendConfig cfg)
        : config(std::move(cfg)), url(parse_url(config.url)),
          inflight(std::max(1, std::min(16, config.max_inflight))) {}
};

RemoteBackend::RemoteBackend(RemoteBackendConfig config) {
    if (config.url.empty()) {
        const char* env = std::getenv("ATLAS_BACKEND_URL");
        if (env) config.url = env;
    }
    if (config.token.empty()) {
        const char* env = std::getenv("ATLAS_BACKEND_TOKEN");
        if (env) config.token = env;
    }
    if (config.url.empty())
        throw BackendError("remote backend needs ATLAS_BACKEND_URL");
    impl_ = std::make_unique<Impl>(std::move(config));
}

RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::post_json(const std::string& body) {
    // Bounded in-flight requests; the guard releases on every exit path.
    struct SlotGuard {
        std::counting_semaphore<16>& sem;
        explicit SlotGuard(std::counting_semaphore<16>& s) : sem(s) { sem.acquire(); }
        ~SlotGuard() { sem.release(); }
    } guard(impl_->inflight);

    httplib::Client client(impl_->url.scheme_host_port);
    client.set_connection_timeout(impl_->config.timeout_seconds, 0);
    client.set_read_timeout(impl_->config.timeout_seconds, 0);
    httplib::Headers headers;
    if (!impl_->config.token.empty())
        headers.emplace("Authorization", "Bearer " + impl_->config.token);

    auto res = client.Post(impl_->url.path, headers, body, "application/json");
    if (!res) throw BackendError("backend unreachable: " + impl_->config.url);
    if (res->status != 200)
        throw BackendError("backend returned status " + std::to_string(res->status));
    return res->body;
}

std::vector<PropertyCandidate> RemoteBackend::request(const PromptBundle& bundle) {
    std::string body = propgen::serialize_prompt_bundle(bundle);
    std::string response = post_json(body);

    detail::Json j;
    try {
        j = detail::Json::parse(response);
    } catch (...) {
        throw BackendError("backend response is not JSON");
    }
    if (!j.is_object() || !j.contains("candidates") || !j["candidates"].is_array())
        throw BackendError("backend response lacks structured candidates");

    std::vector<PropertyCandidate> out;
    for (auto& cj : j["candidates"]) {
        PropertyCandidate c;
        if (!cj.is_object() || !cj.contains("antecedent") || !cj.contains("consequent"))
            throw BackendError("candidate is not structured (free prose rejected)");
        c.name = cj.value("name", "remote_candidate");
        c.clock = cj.value("clock", "");
        c.disable_expr = cj.value("disable_expr", "");
        c.antecedent = cj["antecedent"].get<std::string>();
        c.consequent = cj["consequent"].get<std::string>();
        for (auto& cov : cj.value("covers", detail::Json::array()))
            c.covers.push_back(cov.get<std::string>());
        c.rationale = cj.value("rationale", "");
        out.push_back(std::move(c));
    }
    return out;
}

knowledge::ThreatModelRecord RemoteBackend::draft_record(
    const knowledge::CweMeta& meta, const std::vector<knowledge::ThreatModelRecord>& examples,
    const std::string& feedback) {
    detail::Json j;
    j["task"] = "draft_threat_model";
    j["cwe_id"] = meta.cwe_id;
    j["title"] = meta.title;
    j["description"] = meta.description;
    j["linked_summaries"] = meta.linked_summaries;
    j["feedback"] = feedback;
    detail::Json ex = detail::Json::array();
    for (auto& e : examples) {
        knowledge::Tmdb one;
        one.version = "exemplar";
        one.records[e.cwe_id] = e;
        ex.push_back(detail::Json::parse(knowledge::serialize_tmdb(one))["records"][0]);
    }
    j["examples"] = ex;

    std::string response = post_json(j.dump());
    detail::Json rj;
    try {
        rj = detail::Json::parse(response);
    } catch (...) {
        throw BackendError("backend response is not JSON");
    }
    if (!rj.contains("record")) throw BackendError("draft response lacks 'record'");
    knowledge::Tmdb wrapper;
    detail::Json tm;
    tm["version"] = "draft";
    tm["records"] = detail::Json::array({rj["record"]});
    return knowledge::parse_tmdb(tm.dump()).records.begin()->second;
}

std::unique_ptr<GenerationBackend> make_backend(BackendMode mode) {
    if (mode == BackendMode::deterministic_template)
        return std::make_unique<DeterministicBackend>();
    return std::make_unique<RemoteBackend>(RemoteBackendConfig{});
}

} // namespace atlas
