//
// atlas — internal JSON helpers (strict field handling)
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <set>
#include <string>

#include "atlas/errors.hpp"
#include "json.hpp"

namespace atlas::detail {

using Json = nlohmann::ordered_json;

inline Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline const Json& require_field(const Json& obj, const std::string& field,
                                 const std::string& context) {
    auto it = obj.find(field);
    if (it == obj.end())
        throw SchemaError(field, context + ": missing field '" + field + "'");
    return *it;
}

inline void reject_unknown(const Json& obj, const std::set<std::string>& allowed,
                           const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw SchemaError(it.key(), context + ": unknown field '" + it.key() + "'");
    }
}

} // namespace atlas::detail
