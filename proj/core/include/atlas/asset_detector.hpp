//
// atlas — classifies RTL signals into generic asset types
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "atlas/knowledge.hpp"
#include "atlas/rtl_frontend.hpp"

namespace atlas {
namespace assets {

enum class Provenance { matcher, backend };

struct DetectedAsset {
    std::string signal;
    knowledge::AssetType asset_type;
    std::string role;
    std::string rationale;
    std::vector<KeywordPattern> matched_patterns;
    double confidence = 0.0;
    Provenance provenance = Provenance::matcher;

    bool operator<(const DetectedAsset& other) const {
        if (signal != other.signal) return signal < other.signal;
        return static_cast<int>(asset_type) < static_cast<int>(other.asset_type);
    }
};

/// Splits an identifier on `_` and on lower->upper camelCase boundaries;
/// digits stay attached to the preceding token. Everything lowercase.
std::vector<std::string> tokenize_identifier(const std::string& name);

/// Token-equality matching, not substring: "*_mode" matches debug_mode but
/// never modem_tx. Prefix patterns also match one position in after a bus
/// prefix token from {i, o, n, r, w}.
bool match_identifier(const std::string& name, const KeywordPattern& pattern);

std::vector<DetectedAsset> detect_assets(const std::vector<rtl::SignalDecl>& symbols,
                                         const std::vector<knowledge::AssetDefinition>& defs,
                                         const std::vector<rtl::FsmCandidate>& fsms);

/// Canonical per-type keyword sets used to query the TMDB. Shipped as an
/// editable data table; builtin() mirrors the bundled file.
struct KeywordTable {
    std::map<knowledge::AssetType, std::set<std::string>> canonical;

    static const KeywordTable& builtin();
    static KeywordTable load(const std::string& path);
};

/// Union of the asset's matched pattern tokens, its type's canonical set,
/// and "reset" when the signal carries a reset value.
std::set<std::string> asset_query_keywords(const DetectedAsset& asset,
                                           const std::vector<rtl::FsmCandidate>& fsms,
                                           const std::vector<rtl::SignalDecl>& symbols,
                                           const KeywordTable& table = KeywordTable::builtin());

/// JSON array of detected assets (stable field names).
std::string serialize_assets(const std::vector<DetectedAsset>& assets);
std::vector<DetectedAsset> parse_assets(const std::string& json_text);

} // namespace assets
} // namespace atlas
