//
// atlas — generation backend contract: deterministic templates or a remote
// HTTP endpoint returning structured candidates
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "atlas/knowledge.hpp"
#include "atlas/propgen.hpp"

namespace atlas {

enum class BackendMode { deterministic_template, remote };

/// Structured property candidate as the wire contract carries it.
struct PropertyCandidate {
    std::string name;
    std::string clock;
    std::string disable_expr;
    std::string antecedent;
    std::string consequent;
    std::vector<std::string> covers;
    std::string rationale;
};

class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;

    virtual BackendMode mode() const = 0;

    /// Property candidates for one (context, CWE, asset, focus) bundle.
    virtual std::vector<PropertyCandidate> request(const propgen::PromptBundle& bundle) = 0;

    /// Threat-model draft for one CWE given exemplar records.
    virtual knowledge::ThreatModelRecord draft_record(
        const knowledge::CweMeta& meta,
        const std::vector<knowledge::ThreatModelRecord>& examples,
        const std::string& feedback) = 0;
};

/// Pure function of the prompt bundle: same bundle, same candidates,
/// byte-for-byte. Template selection is by CWE family.
class DeterministicBackend : public GenerationBackend {
public:
    explicit DeterministicBackend(
        const propgen::FamilyTable& families = propgen::FamilyTable::builtin());

    BackendMode mode() const override { return BackendMode::deterministic_template; }
    std::vector<PropertyCandidate> request(const propgen::PromptBundle& bundle) override;
    knowledge::ThreatModelRecord draft_record(
        const knowledge::CweMeta& meta,
        const std::vector<knowledge::ThreatModelRecord>& examples,
        const std::string& feedback) override;

private:
    propgen::FamilyTable families_;
};

struct RemoteBackendConfig {
    std::string url;          // defaults to $ATLAS_BACKEND_URL
    std::string token;        // defaults to $ATLAS_BACKEND_TOKEN
    int max_inflight = 2;
    int timeout_seconds = 60;
};

/// HTTP POST per request; responses must parse as structured candidates —
/// free prose is rejected with BackendError. In-flight requests are bounded
/// by a semaphore and each request carries its own timeout.
class RemoteBackend : public GenerationBackend {
public:
    explicit RemoteBackend(RemoteBackendConfig config);
    ~RemoteBackend() override;

    BackendMode mode() const override { return BackendMode::remote; }
    std::vector<PropertyCandidate> request(const propgen::PromptBundle& bundle) override;
    knowledge::ThreatModelRecord draft_record(
        const knowledge::CweMeta& meta,
        const std::vector<knowledge::ThreatModelRecord>& examples,
        const std::string& feedback) override;

private:
    std::string post_json(const std::string& body);

    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::unique_ptr<GenerationBackend> make_backend(BackendMode mode);

} // namespace atlas
