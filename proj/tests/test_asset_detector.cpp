//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "doctest.h"

#include <algorithm>
#include <random>

#include "atlas/asset_detector.hpp"
#include "atlas/errors.hpp"
#include "test_helpers.hpp"

using namespace atlas;
using namespace atlas::assets;
using knowledge::AssetType;

namespace {

std::vector<knowledge::AssetDefinition> default_defs() {
    static auto defs =
        knowledge::load_asset_definitions(testutil::data_path("asset_definitions.json"));
    return defs;
}

rtl::SignalDecl decl(const std::string& name, int width = 1,
                     rtl::Storage storage = rtl::Storage::reg) {
    rtl::SignalDecl d;
    d.name = name;
    d.width = width;
    d.storage = storage;
    d.direction = rtl::Direction::internal;
    return d;
}

// The five-signal golden fixture used by the acceptance suite.
std::vector<rtl::SignalDecl> five_signal_fixture() {
    return {decl("secret_key", 128), decl("boot_hash", 256), decl("debug_en"),
            decl("state_q", 2), decl("dma_req")};
}

} // namespace

TEST_CASE("tokenize_identifier") {
    CHECK(tokenize_identifier("secret_key_reg") ==
          std::vector<std::string>{"secret", "key", "reg"});
    CHECK(tokenize_identifier("BootHashValid") ==
          std::vector<std::string>{"boot", "hash", "valid"});
    CHECK(tokenize_identifier("").empty());
    // Digits stay attached to the preceding token.
    CHECK(tokenize_identifier("aes192_key") == std::vector<std::string>{"aes192", "key"});
}

TEST_CASE("match_identifier semantics") {
    CHECK(match_identifier("secret_key_reg", KeywordPattern::parse("secret_*")));
    CHECK(match_identifier("debug_mode", KeywordPattern::parse("*_mode")));
    CHECK(!match_identifier("modem_tx", KeywordPattern::parse("*_mode")));
    // Bus prefix skip on prefix-anchored patterns.
    CHECK(match_identifier("i_secret_key", KeywordPattern::parse("secret_*")));
    CHECK(!match_identifier("rx_secret_key", KeywordPattern::parse("secret_*")));
    // Multi-token pattern.
    CHECK(match_identifier("nvm_cfg_base", KeywordPattern::parse("nvm_cfg_*")));
    CHECK(!match_identifier("nvm_base", KeywordPattern::parse("nvm_cfg_*")));
    // Contains.
    CHECK(match_identifier("soc_key_store", KeywordPattern::parse("*key*")));
}

TEST_CASE("detect_assets: five-signal golden set") {
    auto detected = detect_assets(five_signal_fixture(), default_defs(), {});
    REQUIRE(detected.size() == 5);
    std::set<std::pair<std::string, AssetType>> got;
    for (auto& a : detected) got.emplace(a.signal, a.asset_type);
    std::set<std::pair<std::string, AssetType>> want = {
        {"secret_key", AssetType::SensitiveData},
        {"boot_hash", AssetType::BootIntegrity},
        {"debug_en", AssetType::PrivilegedSystemResources},
        {"state_q", AssetType::RuntimeIntegrityState},
        {"dma_req", AssetType::SharedResources},
    };
    CHECK(got == want);
}

TEST_CASE("detect_assets: empty symbol list") {
    CHECK(detect_assets({}, default_defs(), {}).empty());
}

TEST_CASE("detect_assets: no definitions is an error") {
    CHECK_THROWS_AS(detect_assets(five_signal_fixture(), {}, {}), NoDefinitions);
}

TEST_CASE("detect_assets: FSM state signal without a name match (structural)") {
    rtl::FsmCandidate fsm;
    fsm.state_signal = "ctrl_fsm_q";
    fsm.state_consts = {{"A", 0}, {"B", 1}};
    fsm.transitions = {{"A", "B", ""}};
    auto detected = detect_assets({decl("ctrl_fsm_q", 2)}, default_defs(), {fsm});
    REQUIRE(detected.size() == 1);
    CHECK(detected[0].asset_type == AssetType::RuntimeIntegrityState);
    CHECK(detected[0].rationale.find("structural") != std::string::npos);
    CHECK(detected[0].confidence > 0.0);
    CHECK(detected[0].confidence <= 1.0);
}

TEST_CASE("detect_assets: soundness of matches") {
    auto symbols = five_signal_fixture();
    symbols.push_back(decl("ctrl_fsm_q", 2));
    rtl::FsmCandidate fsm;
    fsm.state_signal = "ctrl_fsm_q";
    fsm.state_consts = {{"A", 0}};
    for (auto& a : detect_assets(symbols, default_defs(), {fsm})) {
        REQUIRE(!a.matched_patterns.empty());
        for (auto& p : a.matched_patterns) CHECK(match_identifier(a.signal, p));
    }
}

TEST_CASE("detect_assets: order independence and monotonicity") {
    auto symbols = five_signal_fixture();
    auto baseline = detect_assets(symbols, default_defs(), {});

    std::mt19937 rng(7);
    for (int round = 0; round < 10; ++round) {
        auto shuffled = symbols;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto detected = detect_assets(shuffled, default_defs(), {});
        REQUIRE(detected.size() == baseline.size());
        for (size_t i = 0; i < detected.size(); ++i) {
            CHECK(detected[i].signal == baseline[i].signal);
            CHECK(detected[i].asset_type == baseline[i].asset_type);
        }
    }

    // Adding a pattern never removes a detected asset.
    auto defs = default_defs();
    for (auto& d : defs)
        if (d.asset_type == AssetType::SharedResources)
            d.patterns.push_back(KeywordPattern::parse("fifo_*"));
    auto wider = detect_assets(symbols, defs, {});
    for (auto& a : baseline) {
        bool still = false;
        for (auto& b : wider)
            if (b.signal == a.signal && b.asset_type == a.asset_type) still = true;
        CHECK(still);
    }
}

TEST_CASE("asset_query_keywords: RuntimeIntegrityState carries the six FSM keywords") {
    auto detected = detect_assets({decl("state_q", 2)}, default_defs(), {});
    REQUIRE(detected.size() == 1);
    auto kw = asset_query_keywords(detected[0], {}, {decl("state_q", 2)});
    for (auto& k : {"fsm", "finite state machine", "state", "control flow", "transition",
                    "deadlock"})
        CHECK(kw.count(k) == 1);
}

TEST_CASE("asset_query_keywords: SensitiveData canonical set") {
    auto detected = detect_assets({decl("secret_key", 128)}, default_defs(), {});
    REQUIRE(detected.size() == 1);
    auto kw = asset_query_keywords(detected[0], {}, {decl("secret_key", 128)});
    CHECK(kw.count("secret"));
    CHECK(kw.count("key"));
    CHECK(kw.count("confidentiality"));
    CHECK(!kw.count("reset")); // no reset value on the decl
}

TEST_CASE("asset_query_keywords: reset keyword added when a reset value exists") {
    auto d = decl("secret_key", 128);
    d.reset_value = 0;
    auto detected = detect_assets({d}, default_defs(), {});
    REQUIRE(detected.size() == 1);
    CHECK(asset_query_keywords(detected[0], {}, {d}).count("reset") == 1);
}

TEST_CASE("keyword table: bundled file mirrors the builtin") {
    auto loaded = KeywordTable::load(testutil::data_path("canonical_keywords.json"));
    CHECK(loaded.canonical == KeywordTable::builtin().canonical);
}

TEST_CASE("asset report serialization round trip") {
    auto detected = detect_assets(five_signal_fixture(), default_defs(), {});
    auto again = parse_assets(serialize_assets(detected));
    REQUIRE(again.size() == detected.size());
    for (size_t i = 0; i < detected.size(); ++i) {
        CHECK(again[i].signal == detected[i].signal);
        CHECK(again[i].asset_type == detected[i].asset_type);
        CHECK(again[i].matched_patterns.size() == detected[i].matched_patterns.size());
    }
}
