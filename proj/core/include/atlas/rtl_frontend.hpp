//
// atlas — SystemVerilog subset frontend: parser, symbol table, FSM and
// driver extraction, structural digest
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

namespace atlas {
namespace rtl {

struct Pos {
    int line = 1;
    int col = 1;
    bool operator==(const Pos&) const = default;
};

struct Span {
    Pos begin;
    Pos end;
    bool operator==(const Span&) const = default;
};

enum class NodeKind {
    Module,
    Port,
    NetDecl,
    RegDecl,
    Param,
    LocalParam,
    AlwaysBlock,
    Assign,
    CaseStmt,
    CaseItem,
    IfStmt,
    InstanceDecl,
    Expr,
    // Directive kinds emitted checkers rely on; the reparse self-check
    // requires the parser to accept its own assert/cover/bind output.
    AssertDirective,
    CoverDirective,
    // Statement grouping for multi-statement if/else branches.
    Block,
};

const char* node_kind_name(NodeKind kind);

/// Generic syntax-tree node. `label` holds the identifier, operator, or
/// literal text depending on the kind; kind-specific details live in the
/// auxiliary fields below.
struct AstNode {
    NodeKind kind = NodeKind::Expr;
    Span span;
    std::string label;
    std::vector<AstNode> children;

    // Port/decl extras
    std::string direction;       // input/output/inout ("" for non-ports)
    std::string net_type;        // wire/logic/reg/bit
    int width = 1;

    // AlwaysBlock extras
    std::string always_kind;     // always / always_ff / always_comb
    std::vector<std::pair<std::string, std::string>> sensitivity; // (edge, signal)

    // Assign extras
    bool nonblocking = false;
    bool continuous = false;

    // CaseStmt extras
    std::string case_kind;       // case / casez
    bool has_default = false;

    // InstanceDecl extras; binds carry always_kind == "bind"
    std::string type_name;       // instantiated / checker module
    std::string bind_target;     // module a bind attaches to
};

/// Structural equality ignoring spans; used by the parse-print-parse check.
bool structurally_equal(const AstNode& a, const AstNode& b);

struct Ast {
    AstNode root;                          // kind == Module
    bool partial = false;                  // recovery was taken
    std::vector<std::string> diagnostics;  // recovered errors, in order
    std::vector<std::pair<std::string, Span>> unresolved; // unknown identifiers
};

Ast parse_rtl(const std::string& source);

/// Renders an AST back to source; parse(print(ast)) is structurally equal
/// to ast over the supported subset.
std::string print_rtl(const Ast& ast);

/// JSON tree dump {kind, label, span, children}; debug aid, schema stable.
std::string dump_ast_json(const Ast& ast);

enum class Direction { input, output, inout, internal };
enum class Storage { net, reg, parameter };

struct SignalDecl {
    std::string name;
    Direction direction = Direction::internal;
    int width = 1;
    Storage storage = Storage::net;
    std::optional<uint64_t> reset_value;
    Span span;
};

std::vector<SignalDecl> symbol_table(const Ast& ast);

enum class ResetLevel { active_high, active_low };

struct FsmTransition {
    std::string from_const;
    std::string to_const;
    std::string guard; // conjunction of enclosing if-conditions, "" if none

    bool operator==(const FsmTransition&) const = default;
};

struct FsmCandidate {
    std::string state_signal;
    std::vector<std::pair<std::string, uint64_t>> state_consts;
    std::vector<FsmTransition> transitions;
    bool has_default_arm = false;
    std::string clock;
    std::optional<std::pair<std::string, ResetLevel>> reset;

    /// States with no outgoing transition arc (hang suspects).
    std::vector<std::string> armless_states() const;
};

std::vector<FsmCandidate> extract_fsms(const Ast& ast);

struct DriverSite {
    std::string driver;
    Span site;

    bool operator<(const DriverSite& other) const {
        if (driver != other.driver) return driver < other.driver;
        if (site.begin.line != other.site.begin.line)
            return site.begin.line < other.site.begin.line;
        return site.begin.col < other.site.begin.col;
    }
};

/// Single-hop driver set of `signal`: right-hand-side signals of every
/// assignment to it plus guard signals of enclosing conditionals. The
/// detected reset guard is infrastructure and is excluded.
std::set<DriverSite> drivers_of(const Ast& ast, const std::string& signal);

struct PortSummary {
    std::string name;
    std::string direction;
    int width = 1;
};

struct FsmSummary {
    std::string state_signal;
    std::vector<std::string> state_names;
    std::vector<uint64_t> state_values; // parallel to state_names
    size_t transition_count = 0;
    bool has_default_arm = false;
    std::vector<std::string> armless_states;
};

/// One assignment to a signal as the digest records it: the rendered
/// right-hand side plus the conjunction of enclosing if-conditions.
struct AssignmentFact {
    std::string lhs;
    std::string rhs;
    std::string guard;
    bool self_referential = false; // rhs mentions lhs (sticky/hold pattern)
};

struct ClockResetStyle {
    std::string clock;
    std::string reset;
    bool reset_active_low = true;
    std::string edge = "posedge";
};

/// Deterministic structural digest: what generation needs to know about the
/// module without rereading source.
struct AstDigest {
    std::string module_name;
    std::vector<PortSummary> ports;
    size_t reg_count = 0;
    size_t net_count = 0;
    size_t always_count = 0;
    size_t case_count = 0;
    ClockResetStyle clocking;
    std::vector<FsmSummary> fsms;
    std::map<std::string, std::vector<std::string>> drivers; // watch signal -> drivers
    std::map<std::string, std::vector<std::string>> fanout;  // watch signal -> driven
    std::map<std::string, std::vector<AssignmentFact>> assignments; // watch -> facts
    std::map<std::string, int> widths; // every declared signal
    std::set<std::string> registers;   // signals with register storage
    std::map<std::string, uint64_t> reset_values;
    std::vector<std::string> sticky_flags; // 1-bit regs holding themselves

    bool operator==(const AstDigest& other) const;
};

AstDigest ast_digest(const Ast& ast, const std::set<std::string>& watch);

} // namespace rtl
} // namespace atlas
