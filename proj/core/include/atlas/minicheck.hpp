//
// atlas — desk-scale stand-in for the formal tool: SVA subset parsing,
// trace-bounded assertion evaluation, bounded FSM reachability
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "atlas/rtl_frontend.hpp"

namespace atlas {
namespace minicheck {

/// One signal sample: an unsigned value or X (unknown).
struct Value {
    bool is_x = false;
    uint64_t v = 0;

    static Value x() { return Value{true, 0}; }
    static Value of(uint64_t v) { return Value{false, v}; }
    bool operator==(const Value&) const = default;
};

struct Trace {
    size_t length = 0;
    std::map<std::string, std::vector<Value>> signals;
    std::map<std::string, int> widths;

    const std::vector<Value>& column(const std::string& name) const;
    bool has(const std::string& name) const { return signals.count(name) != 0; }
};

/// CSV format: header `cycle,<sig>,...`, values unsigned decimal or `x`,
/// cycle strictly increasing from 0. Widths, when supplied, are checked.
Trace load_trace_csv(const std::string& path,
                     const std::map<std::string, int>& widths = {});
Trace parse_trace_csv(const std::string& text,
                      const std::map<std::string, int>& widths = {});

// --- SVA subset ---

enum class ExprOp {
    literal, signal, bit_index,
    logical_not, logical_and, logical_or,
    eq, ne, lt,
    past, stable, rose, fell, isunknown,
};

struct Expr {
    ExprOp op;
    Value literal;                       // literal
    std::string name;                    // signal
    int index = 0;                       // bit_index / past depth
    std::vector<std::unique_ptr<Expr>> args;

    Expr* arg(size_t i) const { return args[i].get(); }
};

/// `a ##1 b ##[0:2] c` — boolean items separated by cycle delays. A leading
/// `##n` (common in consequents) lands in lead_min/lead_max.
struct Sequence {
    int lead_min = 0;
    int lead_max = 0;
    std::vector<std::unique_ptr<Expr>> items;
    std::vector<std::pair<int, int>> delays; // delays[i] between items i and i+1

    bool empty() const { return items.empty(); }
};

struct SvaSubsetAst {
    std::string clock;                   // "" when no @(...) given
    std::string clock_edge = "posedge";
    std::unique_ptr<Expr> disable_iff;   // null if absent
    Sequence antecedent;                 // non-empty; `true` for bare properties
    Sequence consequent;
    bool has_implication = false;
    bool overlapping = true;             // |-> vs |=> (|=> is |-> ##1)
    std::string text;                    // original source
};

SvaSubsetAst parse_sva_subset(const std::string& text);

/// Parses a plain boolean expression (no sequences) — also used for FSM
/// transition guards and cover expressions.
std::unique_ptr<Expr> parse_bool_expr(const std::string& text);

/// Identifiers referenced by an expression text (binding validation).
std::set<std::string> collect_identifiers(const std::string& text);

enum class Verdict { holds, fails, vacuous, inconclusive };

const char* verdict_name(Verdict verdict);

struct VerificationOutcome {
    Verdict verdict = Verdict::holds;
    std::optional<size_t> fail_cycle;                 // earliest obligation miss
    std::vector<std::pair<std::string, Value>> witness; // signal values at failure
    std::map<std::string, std::vector<size_t>> covers_hit;
};

/// Trace-bounded evaluation with 3-valued semantics: X reaching a decided
/// consequent is a failure witness, X in antecedents and covers is neutral,
/// obligations falling past the end of the trace are dropped.
VerificationOutcome eval_property(const Trace& trace, const SvaSubsetAst& prop);

/// Cycles where the expression is definitely true (X is not true).
std::vector<size_t> eval_cover(const Trace& trace, const std::string& cover_expr);

// --- bounded FSM reachability ---

struct ReachResult {
    std::set<std::string> reachable;                     // state const names
    std::map<std::string, std::vector<uint64_t>> witnesses; // state -> input seq
    bool budget_exhausted = false;
};

/// Breadth-first exploration of (state x input assignment) up to `depth`
/// cycles. Guards must be boolean over the free inputs; anything else is
/// GuardUnsupported. At most 8 free inputs and depth 16.
ReachResult bounded_reach(const rtl::FsmCandidate& fsm,
                          const std::vector<std::string>& free_inputs,
                          int depth);

} // namespace minicheck
} // namespace atlas
