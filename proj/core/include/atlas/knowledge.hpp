//
// atlas — threat-model knowledge base: template records, TMDB, generic
// asset definitions, keyword index
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "atlas/keyword_pattern.hpp"

namespace atlas {

class GenerationBackend; // backend.hpp

namespace knowledge {

/// The eight adversary classes a threat model may name, ordered from pure
/// software access up to insiders.
enum class AdversaryKind {
    UnprivilegedSoftware,
    SystemSoftware,
    StartupCodeSMM,
    Network,
    SoftwareSideChannel,
    SimpleHardware,
    SkilledHardware,
    InsiderThreat,
};

const char* adversary_kind_name(AdversaryKind kind);
std::optional<AdversaryKind> adversary_kind_from_name(const std::string& name);

struct AdversaryModel {
    AdversaryKind kind;
    std::string capabilities;
};

/// One CWE's standardized threat model. The five template fields
/// (adversaries, assets, attack_surfaces, vulnerabilities, threats) must all
/// be populated, and vulnerabilities/threats are deliberately distinct
/// fields: a weakness is not the attack that exploits it.
struct ThreatModelRecord {
    int cwe_id = 0;
    std::string title;
    std::vector<AdversaryKind> adversaries;
    std::string assets;
    std::string attack_surfaces;
    std::string vulnerabilities;
    std::string threats;
    std::vector<std::string> related_cves;   // "CVE-YYYY-NNNN..."
    std::vector<int> related_capecs;
    std::set<std::string> keywords;          // lowercase tokens and phrases
    bool reviewed = false;
    std::string review_notes;
};

struct Violation {
    std::string field;
    std::string reason;
};

struct Tmdb {
    std::string version;
    std::map<int, ThreatModelRecord> records;

    bool operator==(const Tmdb& other) const;
};

/// The seven generic asset classes signals are sorted into.
enum class AssetType {
    SensitiveData,
    BootIntegrity,
    AttestationMeasurement,
    ParametricData,
    PrivilegedSystemResources,
    SharedResources,
    RuntimeIntegrityState,
};

constexpr int kAssetTypeCount = 7;

const char* asset_type_name(AssetType type);
std::optional<AssetType> asset_type_from_name(const std::string& name);

struct AssetDefinition {
    AssetType asset_type;
    std::vector<std::string> definition;     // prose lines
    std::vector<KeywordPattern> patterns;
};

/// Inverted keyword index over a TMDB. Multi-word phrases are stored both
/// whole and under each component token, so a lookup for "state" also finds
/// records that only carry "finite state machine".
struct KeywordIndex {
    std::map<std::string, std::set<int>> entries;
    std::string source_version;

    /// Case-insensitive lookup; empty set if absent.
    const std::set<int>& lookup(const std::string& keyword) const;

    bool operator==(const KeywordIndex& other) const {
        return entries == other.entries && source_version == other.source_version;
    }
};

// --- operations ---

Tmdb load_tmdb(const std::string& path);
Tmdb parse_tmdb(const std::string& json_text);
std::string serialize_tmdb(const Tmdb& tmdb);
void save_tmdb(const Tmdb& tmdb, const std::string& path);

/// Total: always returns a (possibly empty) violation list, never throws.
std::vector<Violation> validate_record(const ThreatModelRecord& record);

KeywordIndex build_keyword_index(const Tmdb& tmdb);

std::vector<AssetDefinition> load_asset_definitions(const std::string& path);
std::vector<AssetDefinition> parse_asset_definitions(const std::string& json_text);

/// Raw CWE metadata handed to the drafting flow: catalog text plus linked
/// CVE/CAPEC summaries used as context.
struct CweMeta {
    int cwe_id = 0;
    std::string title;
    std::string description;
    std::vector<std::string> linked_summaries;
};

/// Drafts a threat model for one CWE via the backend, re-prompting on
/// invalid drafts up to three attempts. The draft always comes back with
/// reviewed=false; flipping it is a human step recorded in the TMDB file.
ThreatModelRecord draft_threat_model(const CweMeta& meta,
                                     const std::vector<ThreatModelRecord>& examples,
                                     GenerationBackend& backend);

} // namespace knowledge
} // namespace atlas
