//
// atlas — keyword scoring from detected assets to ranked CWE threat models
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <set>
#include <string>
#include <vector>

#include "atlas/asset_detector.hpp"
#include "atlas/knowledge.hpp"

namespace atlas {
namespace mapper {

struct CweHit {
    int cwe_id = 0;
    double score = 0.0;
    std::set<std::string> matched_keywords;

    bool operator==(const CweHit&) const = default;
};

struct AssetThreats {
    assets::DetectedAsset asset;
    std::vector<CweHit> hits; // sorted by (score desc, cwe_id asc)
    int top_k = 0;
};

struct SocThreatModel {
    std::string design;
    std::vector<AssetThreats> entries;
    std::string tmdb_version;
};

/// Weighted hit count: multi-word phrase matches score 2.0, single tokens
/// 1.0. A query keyword matches when the record carries it as a keyword or
/// as a component token of one of its phrases.
std::pair<double, std::set<std::string>> score_cwe(const std::set<std::string>& query,
                                                   const knowledge::ThreatModelRecord& record);

/// Ranked hits, zero scores dropped, ties broken by ascending cwe_id. When
/// the scores at ranks top_k and top_k+1 are equal the extra hit is
/// co-reported (the two CWEs describe the same rule in different words).
std::vector<CweHit> map_asset_to_cwes(const std::set<std::string>& query,
                                      const knowledge::Tmdb& tmdb,
                                      const knowledge::KeywordIndex& index,
                                      int top_k);

SocThreatModel build_soc_threat_model(const std::vector<assets::DetectedAsset>& assets,
                                      const knowledge::Tmdb& tmdb,
                                      const knowledge::KeywordIndex& index,
                                      int top_k,
                                      const std::string& design_name,
                                      const std::vector<rtl::FsmCandidate>& fsms,
                                      const std::vector<rtl::SignalDecl>& symbols,
                                      const assets::KeywordTable& table = assets::KeywordTable::builtin());

std::string serialize_soc_threat_model(const SocThreatModel& model);

} // namespace mapper
} // namespace atlas
