//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/keyword_pattern.hpp"

#include "atlas/errors.hpp"
#include "atlas/strings.hpp"

namespace atlas {

std::vector<std::string> KeywordPattern::token_parts() const {
    std::vector<std::string> parts;
    for (auto& p : split(token, '_'))
        if (!p.empty()) parts.push_back(p);
    return parts;
}

KeywordPattern KeywordPattern::parse(const std::string& raw) {
    std::string t = trim(raw);
    if (t.empty()) throw ParseError("empty keyword pattern");

    bool leading = t.front() == '*';
    bool trailing = t.back() == '*';

    KeywordPattern p;
    p.raw = t;
    if (leading && trailing)
        p.anchor = Anchor::contains;
    else if (leading)
        p.anchor = Anchor::suffix;
    else if (trailing)
        p.anchor = Anchor::prefix;
    else
        p.anchor = Anchor::contains; // bare token, e.g. "lock"

    size_t b = leading ? 1 : 0;
    size_t e = trailing ? t.size() - 1 : t.size();
    std::string token = to_lower(t.substr(b, e - b));
    // Strip the separator that usually sits next to the star.
    while (!token.empty() && token.front() == '_') token.erase(token.begin());
    while (!token.empty() && token.back() == '_') token.pop_back();
    if (token.empty()) throw ParseError("keyword pattern has empty token: " + raw);
    p.token = token;
    return p;
}

} // namespace atlas
