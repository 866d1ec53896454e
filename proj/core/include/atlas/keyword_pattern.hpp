//
// atlas — identifier keyword patterns ("secret_*", "*_mode", ...)
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <string>
#include <vector>

namespace atlas {

/// A pattern over signal identifiers. The anchor is derived from where the
/// `*` sits in the raw text: leading `*` anchors at the suffix, trailing `*`
/// at the prefix, both ends means contains. The token is the lowercase
/// remainder; it may itself span several `_`-separated words ("nvm_cfg").
struct KeywordPattern {
    enum class Anchor { prefix, suffix, contains };

    std::string raw;
    Anchor anchor = Anchor::contains;
    std::string token;

    /// Token split into its `_`-separated parts, for sequence matching
    /// against tokenized identifiers.
    std::vector<std::string> token_parts() const;

    static KeywordPattern parse(const std::string& raw);

    bool operator==(const KeywordPattern& other) const {
        return raw == other.raw;
    }
};

} // namespace atlas
