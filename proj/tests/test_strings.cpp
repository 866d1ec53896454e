//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "doctest.h"

#include "atlas/keyword_pattern.hpp"
#include "atlas/strings.hpp"

using namespace atlas;

TEST_CASE("word_tokens splits free text") {
    CHECK(word_tokens("Finite State-Machine logic!") ==
          std::vector<std::string>{"finite", "state", "machine", "logic"});
    CHECK(word_tokens("").empty());
}

TEST_CASE("KeywordPattern anchor derivation") {
    auto p = KeywordPattern::parse("secret_*");
    CHECK(p.anchor == KeywordPattern::Anchor::prefix);
    CHECK(p.token == "secret");

    auto s = KeywordPattern::parse("*_mode");
    CHECK(s.anchor == KeywordPattern::Anchor::suffix);
    CHECK(s.token == "mode");

    auto c = KeywordPattern::parse("*key*");
    CHECK(c.anchor == KeywordPattern::Anchor::contains);
    CHECK(c.token == "key");

    auto multi = KeywordPattern::parse("nvm_cfg_*");
    CHECK(multi.token_parts() == std::vector<std::string>{"nvm", "cfg"});
}
