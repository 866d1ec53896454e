//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/asset_detector.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/strings.hpp"
#include "json_detail.hpp"

namespace atlas {
namespace assets {

using knowledge::AssetType;

std::vector<std::string> tokenize_identifier(const std::string& name) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(to_lower(cur));
            cur.clear();
        }
    };
    for (size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '_') {
            flush();
            continue;
        }
        // camelCase boundary: lower (or digit) followed by upper.
        if (!cur.empty() && std::isupper(static_cast<unsigned char>(c)) &&
            !std::isupper(static_cast<unsigned char>(cur.back())))
            flush();
        cur += c;
    }
    flush();
    return out;
}

namespace {

// Bus/direction prefixes a prefix-anchored pattern may skip over.
bool is_bus_prefix(const std::string& token) {
    return token == "i" || token == "o" || token == "n" || token == "r" || token == "w";
}

bool tokens_start_with(const std::vector<std::string>& toks,
                       const std::vector<std::string>& parts, size_t at) {
    if (at + parts.size() > toks.size()) return false;
    for (size_t i = 0; i < parts.size(); ++i)
        if (toks[at + i] != parts[i]) return false;
    return true;
}

bool tokens_contain(const std::vector<std::string>& toks,
                    const std::vector<std::string>& parts) {
    if (parts.empty()) return false;
    for (size_t at = 0; at + parts.size() <= toks.size(); ++at)
        if (tokens_start_with(toks, parts, at)) return true;
    return false;
}

} // namespace

bool match_identifier(const std::string& name, const KeywordPattern& pattern) {
    auto toks = tokenize_identifier(name);
    if (toks.empty()) return false;
    auto parts = pattern.token_parts();
    if (parts.empty()) return false;

    switch (pattern.anchor) {
        case KeywordPattern::Anchor::prefix: {
            if (tokens_start_with(toks, parts, 0)) return true;
            // One leading bus prefix may be skipped: i_secret_key still
            // matches secret_*.
            if (toks.size() > parts.size() && is_bus_prefix(toks[0]) &&
                tokens_start_with(toks, parts, 1))
                return true;
            return false;
        }
        case KeywordPattern::Anchor::suffix: {
            if (toks.size() < parts.size()) return false;
            return tokens_start_with(toks, parts, toks.size() - parts.size());
        }
        case KeywordPattern::Anchor::contains:
            return tokens_contain(toks, parts);
    }
    return false;
}

namespace {

std::string role_text(const rtl::SignalDecl& decl, AssetType type) {
    std::string kind;
    switch (decl.storage) {
        case rtl::Storage::reg: kind = "registered"; break;
        case rtl::Storage::net: kind = "combinational"; break;
        case rtl::Storage::parameter: kind = "elaboration-time"; break;
    }
    std::string what;
    switch (type) {
        case AssetType::SensitiveData: what = "secret-bearing"; break;
        case AssetType::BootIntegrity: what = "boot-trust"; break;
        case AssetType::AttestationMeasurement: what = "measurement"; break;
        case AssetType::ParametricData: what = "device-parameter"; break;
        case AssetType::PrivilegedSystemResources: what = "privileged-control"; break;
        case AssetType::SharedResources: what = "shared-resource"; break;
        case AssetType::RuntimeIntegrityState: what = "control-state"; break;
    }
    return kind + " " + what + " signal";
}

const rtl::SignalDecl* find_decl(const std::vector<rtl::SignalDecl>& symbols,
                                 const std::string& name) {
    for (auto& s : symbols)
        if (s.name == name) return &s;
    return nullptr;
}

} // namespace

std::vector<DetectedAsset> detect_assets(const std::vector<rtl::SignalDecl>& symbols,
                                         const std::vector<knowledge::AssetDefinition>& defs,
                                         const std::vector<rtl::FsmCandidate>& fsms) {
    if (defs.empty()) throw NoDefinitions();

    // (signal, type) -> asset under construction.
    std::map<std::pair<std::string, int>, DetectedAsset> found;

    for (auto& decl : symbols) {
        if (decl.storage == rtl::Storage::parameter) continue;
        for (auto& def : defs) {
            std::vector<KeywordPattern> matched;
            for (auto& p : def.patterns)
                if (match_identifier(decl.name, p)) matched.push_back(p);
            if (matched.empty()) continue;
            DetectedAsset a;
            a.signal = decl.name;
            a.asset_type = def.asset_type;
            a.role = role_text(decl, def.asset_type);
            std::vector<std::string> raws;
            for (auto& m : matched) raws.push_back(m.raw);
            a.rationale = "matched " + join(raws, ", ") + " (" +
                          knowledge::asset_type_name(def.asset_type) + ")";
            a.matched_patterns = matched;
            a.confidence = static_cast<double>(matched.size()) /
                           static_cast<double>(def.patterns.size());
            found.emplace(std::make_pair(decl.name, static_cast<int>(def.asset_type)),
                          std::move(a));
        }
    }

    // Structural evidence: FSM state signals are runtime-integrity assets
    // whatever their name; so are the 1-bit registered flags steering the
    // transitions, since the machine's control flow runs through them.
    size_t ris_patterns = 1;
    for (auto& def : defs)
        if (def.asset_type == AssetType::RuntimeIntegrityState)
            ris_patterns = std::max<size_t>(1, def.patterns.size());

    auto add_structural = [&](const std::string& signal, const std::string& why) {
        const rtl::SignalDecl* decl = find_decl(symbols, signal);
        if (!decl) return;
        auto key =
            std::make_pair(signal, static_cast<int>(AssetType::RuntimeIntegrityState));
        auto it = found.find(key);
        if (it != found.end()) {
            it->second.rationale += "; " + why;
            return;
        }
        DetectedAsset a;
        a.signal = signal;
        a.asset_type = AssetType::RuntimeIntegrityState;
        a.role = role_text(*decl, AssetType::RuntimeIntegrityState);
        a.rationale = why;
        // Structural evidence counts as one matching pattern; the bare-token
        // pattern keeps the match-soundness invariant checkable.
        auto toks = tokenize_identifier(signal);
        if (!toks.empty()) a.matched_patterns.push_back(KeywordPattern::parse(toks[0]));
        a.confidence = 1.0 / static_cast<double>(ris_patterns);
        found.emplace(key, std::move(a));
    };

    for (auto& fsm : fsms) {
        add_structural(fsm.state_signal, "state register of an extracted FSM (structural)");
        std::set<std::string> guard_ids;
        for (auto& t : fsm.transitions)
            for (auto& tok : word_tokens(t.guard)) guard_ids.insert(tok);
        for (auto& id : guard_ids) {
            const rtl::SignalDecl* decl = find_decl(symbols, id);
            if (decl && decl->storage == rtl::Storage::reg && decl->width == 1 &&
                id != fsm.state_signal)
                add_structural(id, "1-bit flag steering FSM transitions (structural)");
        }
    }

    std::vector<DetectedAsset> out;
    for (auto& [key, a] : found) out.push_back(std::move(a));
    std::sort(out.begin(), out.end());
    return out;
}

const KeywordTable& KeywordTable::builtin() {
    static const KeywordTable table = [] {
        KeywordTable t;
        using AT = AssetType;
        t.canonical[AT::SensitiveData] = {"secret",   "key",  "confidentiality",
                                          "password", "leak", "data",
                                          "residual", "clear"};
        t.canonical[AT::BootIntegrity] = {"boot", "key",       "hash",
                                          "rom",  "integrity", "root of trust"};
        t.canonical[AT::AttestationMeasurement] = {"attestation", "measurement", "pcr",
                                                   "report", "integrity"};
        t.canonical[AT::ParametricData] = {"calibration", "configuration", "identity",
                                           "fuse", "serial"};
        t.canonical[AT::PrivilegedSystemResources] = {"privilege", "access control",
                                                      "debug",     "mode",
                                                      "lock",      "register lock"};
        t.canonical[AT::SharedResources] = {"shared",         "arbitration", "bus",
                                            "grant",          "overlap",     "memory map",
                                            "address decode"};
        // The FSM set is fixed: these six are the query the mapper runs for
        // control-state assets.
        t.canonical[AT::RuntimeIntegrityState] = {"fsm",
                                                  "finite state machine",
                                                  "state",
                                                  "control flow",
                                                  "transition",
                                                  "deadlock"};
        return t;
    }();
    return table;
}

KeywordTable KeywordTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto j = detail::parse_json(ss.str(), "keyword table");
    KeywordTable t;
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto type = knowledge::asset_type_from_name(it.key());
        if (!type) throw UnknownAssetType("unknown asset type: " + it.key());
        std::set<std::string> words;
        for (auto& w : it.value()) words.insert(to_lower(w.get<std::string>()));
        t.canonical[*type] = std::move(words);
    }
    return t;
}

std::set<std::string> asset_query_keywords(const DetectedAsset& asset,
                                           const std::vector<rtl::FsmCandidate>& fsms,
                                           const std::vector<rtl::SignalDecl>& symbols,
                                           const KeywordTable& table) {
    (void)fsms;
    std::set<std::string> out;
    for (auto& p : asset.matched_patterns)
        for (auto& part : p.token_parts()) out.insert(part);
    auto it = table.canonical.find(asset.asset_type);
    if (it != table.canonical.end()) out.insert(it->second.begin(), it->second.end());
    const rtl::SignalDecl* decl = find_decl(symbols, asset.signal);
    if (decl && decl->reset_value) out.insert("reset");
    return out;
}

std::string serialize_assets(const std::vector<DetectedAsset>& list) {
    detail::Json arr = detail::Json::array();
    for (auto& a : list) {
        detail::Json j;
        j["signal"] = a.signal;
        j["asset_type"] = knowledge::asset_type_name(a.asset_type);
        j["role"] = a.role;
        j["rationale"] = a.rationale;
        std::vector<std::string> pats;
        for (auto& p : a.matched_patterns) pats.push_back(p.raw);
        j["matched_patterns"] = pats;
        j["confidence"] = a.confidence;
        j["provenance"] = a.provenance == Provenance::matcher ? "matcher" : "backend";
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::vector<DetectedAsset> parse_assets(const std::string& json_text) {
    auto j = detail::parse_json(json_text, "asset report");
    std::vector<DetectedAsset> out;
    for (auto& aj : j) {
        DetectedAsset a;
        a.signal = detail::require_field(aj, "signal", "asset").get<std::string>();
        auto type = knowledge::asset_type_from_name(
            detail::require_field(aj, "asset_type", "asset").get<std::string>());
        if (!type) throw UnknownAssetType("unknown asset type in report");
        a.asset_type = *type;
        a.role = aj.value("role", "");
        a.rationale = aj.value("rationale", "");
        for (auto& p : detail::require_field(aj, "matched_patterns", "asset"))
            a.matched_patterns.push_back(KeywordPattern::parse(p.get<std::string>()));
        a.confidence = aj.value("confidence", 0.0);
        a.provenance = aj.value("provenance", "matcher") == std::string("backend")
                           ? Provenance::backend
                           : Provenance::matcher;
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace assets
} // namespace atlas
