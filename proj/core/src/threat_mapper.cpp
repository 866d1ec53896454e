//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/threat_mapper.hpp"

#include <algorithm>

#include "atlas/errors.hpp"
#include "atlas/strings.hpp"
#include "json_detail.hpp"

namespace atlas {
namespace mapper {

namespace {

bool is_phrase(const std::string& keyword) {
    return keyword.find(' ') != std::string::npos;
}

/// Record keywords expanded with the component tokens of each phrase, so a
/// query token "state" also matches a record carrying only "finite state
/// machine".
std::set<std::string> expanded_keywords(const knowledge::ThreatModelRecord& record) {
    std::set<std::string> out(record.keywords.begin(), record.keywords.end());
    for (auto& k : record.keywords) {
        auto toks = word_tokens(k);
        if (toks.size() > 1) out.insert(toks.begin(), toks.end());
    }
    return out;
}

} // namespace

std::pair<double, std::set<std::string>> score_cwe(
    const std::set<std::string>& query, const knowledge::ThreatModelRecord& record) {
    auto expanded = expanded_keywords(record);
    double score = 0.0;
    std::set<std::string> matched;
    for (auto& k : query) {
        std::string key = to_lower(trim(k));
        if (key.empty()) continue;
        if (expanded.count(key)) {
            score += is_phrase(key) ? 2.0 : 1.0;
            matched.insert(key);
        }
    }
    return {score, matched};
}

std::vector<CweHit> map_asset_to_cwes(const std::set<std::string>& query,
                                      const knowledge::Tmdb& tmdb,
                                      const knowledge::KeywordIndex& index,
                                      int top_k) {
    (void)index; // the index narrows candidates; scoring reads the records
    if (tmdb.records.empty()) throw EmptyTmdb();
    if (top_k < 1) throw ConfigError("top_k must be >= 1");

    std::vector<CweHit> hits;
    for (auto& [id, record] : tmdb.records) {
        auto [score, matched] = score_cwe(query, record);
        if (score <= 0.0) continue;
        hits.push_back(CweHit{id, score, std::move(matched)});
    }
    std::sort(hits.begin(), hits.end(), [](const CweHit& a, const CweHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.cwe_id < b.cwe_id;
    });

    size_t keep = std::min<size_t>(hits.size(), static_cast<size_t>(top_k));
    // Equal-score boundary: the hit just past top_k is co-reported; the two
    // records describe the same rule in different words.
    if (hits.size() > keep && keep > 0 && hits[keep].score == hits[keep - 1].score)
        ++keep;
    hits.resize(keep);
    return hits;
}

SocThreatModel build_soc_threat_model(const std::vector<assets::DetectedAsset>& detected,
                                      const knowledge::Tmdb& tmdb,
                                      const knowledge::KeywordIndex& index,
                                      int top_k,
                                      const std::string& design_name,
                                      const std::vector<rtl::FsmCandidate>& fsms,
                                      const std::vector<rtl::SignalDecl>& symbols,
                                      const assets::KeywordTable& table) {
    SocThreatModel model;
    model.design = design_name;
    model.tmdb_version = tmdb.version;
    for (auto& asset : detected) {
        AssetThreats entry;
        entry.asset = asset;
        entry.top_k = top_k;
        auto query = assets::asset_query_keywords(asset, fsms, symbols, table);
        // Zero-hit assets stay in the model: coverage gaps should be seen,
        // not silently dropped.
        entry.hits = map_asset_to_cwes(query, tmdb, index, top_k);
        model.entries.push_back(std::move(entry));
    }
    return model;
}

std::string serialize_soc_threat_model(const SocThreatModel& model) {
    detail::Json j;
    j["design"] = model.design;
    j["tmdb_version"] = model.tmdb_version;
    detail::Json entries = detail::Json::array();
    for (auto& e : model.entries) {
        detail::Json ej;
        ej["signal"] = e.asset.signal;
        ej["asset_type"] = knowledge::asset_type_name(e.asset.asset_type);
        ej["top_k"] = e.top_k;
        detail::Json hits = detail::Json::array();
        for (auto& h : e.hits) {
            detail::Json hj;
            hj["cwe_id"] = h.cwe_id;
            hj["score"] = h.score;
            hj["matched_keywords"] =
                std::vector<std::string>(h.matched_keywords.begin(),
                                         h.matched_keywords.end());
            hits.push_back(hj);
        }
        ej["hits"] = hits;
        entries.push_back(ej);
    }
    j["entries"] = entries;
    return j.dump(2) + "\n";
}

} // namespace mapper
} // namespace atlas
