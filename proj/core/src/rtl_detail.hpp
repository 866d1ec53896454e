//
// atlas — internal helpers shared by the RTL parser and analyses
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "atlas/rtl_frontend.hpp"

namespace atlas::rtl::detail {

/// Expression kind of a leaf node: identifiers never start with a digit or
/// an apostrophe, literals always do.
bool is_identifier_leaf(const AstNode& node);
bool is_literal_leaf(const AstNode& node);

/// Renders an expression subtree back to source text with minimal parens.
std::string render_expr(const AstNode& expr);

/// All identifiers referenced in an expression subtree.
void collect_expr_identifiers(const AstNode& expr, std::set<std::string>& out);

/// Literal text -> value; x/z digits make the whole value unknown.
struct LiteralValue {
    bool is_x = false;
    uint64_t value = 0;
    int width = 0; // 0 when unsized
};
std::optional<LiteralValue> parse_literal(const std::string& text);

/// Constant folding over +,-,*,/ and parameter lookups; nullopt when the
/// expression is not constant.
std::optional<uint64_t> const_eval(const AstNode& expr,
                                   const std::map<std::string, uint64_t>& params);

/// Declared parameter environment of a module.
std::map<std::string, uint64_t> param_env(const AstNode& module_node);

/// True when the lowered identifier has a token "rst" or "reset".
bool is_reset_name(const std::string& name);

struct ResetInfo {
    std::string signal;
    ResetLevel level = ResetLevel::active_low;
};

/// Reset style of an always block: an edge-sensitivity signal whose name
/// says reset; the active level comes from the polarity of the guarding if.
std::optional<ResetInfo> detect_reset(const AstNode& always_block);

/// Clock of an always block: edge-sensitive non-reset signal, name "clk"
/// preferred on ties.
std::string detect_clock(const AstNode& always_block);

/// True when `cond` references exactly the given reset signal (the guard
/// drivers_of treats as infrastructure).
bool is_reset_guard(const AstNode& cond, const std::string& reset_signal);

} // namespace atlas::rtl::detail
