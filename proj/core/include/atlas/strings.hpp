//
// atlas — small string helpers used throughout
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <string>
#include <vector>

namespace atlas {

std::string to_lower(std::string s);
std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

/// Splits free text into lowercase word tokens (letters/digits/underscore
/// runs); everything else is a separator.
std::vector<std::string> word_tokens(const std::string& text);

bool starts_with(const std::string& s, const std::string& prefix);
bool ends_with(const std::string& s, const std::string& suffix);

/// Joins with sep, e.g. join({"a","b"}, ", ") == "a, b".
std::string join(const std::vector<std::string>& parts, const std::string& sep);

} // namespace atlas
