//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "doctest.h"

#include <algorithm>

#include "atlas/errors.hpp"
#include "atlas/rtl_frontend.hpp"
#include "test_helpers.hpp"

using namespace atlas;
using namespace atlas::rtl;

namespace {

std::string dma_source() {
    return testutil::read_file(testutil::corpus_path("dma_sticky_abort/buggy.sv"));
}

size_t count_kind(const AstNode& node, NodeKind kind) {
    size_t n = node.kind == kind ? 1 : 0;
    for (auto& c : node.children) n += count_kind(c, kind);
    return n;
}

const SignalDecl& find_signal(const std::vector<SignalDecl>& symbols,
                              const std::string& name) {
    for (auto& s : symbols)
        if (s.name == name) return s;
    REQUIRE_MESSAGE(false, "signal not found: " << name);
    static SignalDecl dummy;
    return dummy;
}

} // namespace

TEST_CASE("parse_rtl: dma fixture structure") {
    Ast ast = parse_rtl(dma_source());
    CHECK(!ast.partial);
    CHECK(ast.root.kind == NodeKind::Module);
    CHECK(ast.root.label == "dma_ctrl");
    CHECK(count_kind(ast.root, NodeKind::Module) == 1);
    CHECK(count_kind(ast.root, NodeKind::RegDecl) >= 3);
    CHECK(count_kind(ast.root, NodeKind::CaseStmt) == 1);
    CHECK(count_kind(ast.root, NodeKind::Port) == 6);
}

TEST_CASE("parse_rtl: empty input") {
    try {
        parse_rtl("");
        CHECK(false);
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 1);
        CHECK(e.col() == 1);
        CHECK(std::string(e.what()).find("expected 'module'") != std::string::npos);
    }
}

TEST_CASE("parse_rtl: unsupported class declaration recovers with ports intact") {
    std::string src = R"(
module m (
  input logic clk,
  output logic q
);
  class helper;
  endclass
  logic r;
endmodule
)";
    Ast ast = parse_rtl(src);
    CHECK(ast.partial);
    bool named = false;
    for (auto& d : ast.diagnostics)
        if (d.find("unsupported construct: class") != std::string::npos) named = true;
    CHECK(named);
    CHECK(count_kind(ast.root, NodeKind::Port) == 2);
    // Recovery continues past the class body.
    CHECK(count_kind(ast.root, NodeKind::RegDecl) == 1);
}

TEST_CASE("parse-print-parse fixpoint on the dma fixture") {
    Ast first = parse_rtl(dma_source());
    std::string printed = print_rtl(first);
    Ast second = parse_rtl(printed);
    CHECK(structurally_equal(first.root, second.root));
    // And once more for idempotence of the printer itself.
    CHECK(print_rtl(second) == printed);
}

TEST_CASE("symbol_table: dma fixture") {
    Ast ast = parse_rtl(dma_source());
    auto symbols = symbol_table(ast);

    const SignalDecl& abort = find_signal(symbols, "abort");
    CHECK(abort.storage == Storage::reg);
    CHECK(abort.width == 1);
    CHECK(abort.direction == Direction::internal);
    REQUIRE(abort.reset_value.has_value());
    CHECK(*abort.reset_value == 0);

    const SignalDecl& state = find_signal(symbols, "state_q");
    CHECK(state.width == 2);
    CHECK(state.storage == Storage::reg);

    const SignalDecl& busy = find_signal(symbols, "busy_o");
    CHECK(busy.direction == Direction::output);
    CHECK(busy.storage == Storage::net); // driven by a continuous assign

    CHECK(symbols.front().name == "clk");
}

TEST_CASE("symbol_table: module with no body lists ports only") {
    Ast ast = parse_rtl("module empty (input logic a, output logic b);\nendmodule\n");
    auto symbols = symbol_table(ast);
    REQUIRE(symbols.size() == 2);
    CHECK(symbols[0].name == "a");
    CHECK(symbols[1].name == "b");
}

TEST_CASE("symbol_table: duplicate declaration") {
    std::string src = R"(
module m (input logic clk);
  logic state_q;
  logic state_q;
endmodule
)";
    Ast ast = parse_rtl(src);
    CHECK_THROWS_AS(symbol_table(ast), DuplicateDecl);
}

TEST_CASE("extract_fsms: dma fixture") {
    Ast ast = parse_rtl(dma_source());
    auto fsms = extract_fsms(ast);
    REQUIRE(fsms.size() == 1);
    const FsmCandidate& fsm = fsms[0];
    CHECK(fsm.state_signal == "state_q");
    CHECK(fsm.state_consts.size() == 3);
    CHECK(fsm.transitions.size() == 4);
    CHECK(fsm.has_default_arm);
    CHECK(fsm.clock == "clk");
    REQUIRE(fsm.reset.has_value());
    CHECK(fsm.reset->first == "rst_n");
    CHECK(fsm.reset->second == ResetLevel::active_low);

    // Every from/to resolves to a declared constant.
    std::set<std::string> names;
    for (auto& [n, v] : fsm.state_consts) names.insert(n);
    for (auto& t : fsm.transitions) {
        CHECK(names.count(t.from_const));
        CHECK(names.count(t.to_const));
    }

    // The else-if arm guard is the conjunction of enclosing conditions.
    bool found = false;
    for (auto& t : fsm.transitions)
        if (t.from_const == "BUSY" && t.to_const == "DONE") {
            found = true;
            CHECK(t.guard == "!abort && done_i");
        }
    CHECK(found);
}

TEST_CASE("extract_fsms: combinational case over a net is not a candidate") {
    std::string src = R"(
module m (input logic [1:0] sel, input logic a, input logic b, output logic y);
  wire pick;
  assign pick = a;
  always_comb begin
    case (sel)
      2'd0: y = a;
      2'd1: y = b;
      default: y = pick;
    endcase
  end
endmodule
)";
    Ast ast = parse_rtl(src);
    CHECK(extract_fsms(ast).empty());
}

TEST_CASE("extract_fsms: case without default arm") {
    std::string src = R"(
module m (input logic clk, input logic rst_n, input logic go);
  localparam A = 1'd0;
  localparam B = 1'd1;
  logic s_q;
  always_ff @(posedge clk or negedge rst_n) begin
    if (!rst_n) s_q <= A;
    else begin
      case (s_q)
        A: if (go) s_q <= B;
        B: s_q <= A;
      endcase
    end
  end
endmodule
)";
    auto fsms = extract_fsms(parse_rtl(src));
    REQUIRE(fsms.size() == 1);
    CHECK(!fsms[0].has_default_arm);
}

TEST_CASE("drivers_of: dma abort") {
    Ast ast = parse_rtl(dma_source());
    auto sites = drivers_of(ast, "abort");
    std::set<std::string> names;
    for (auto& s : sites) names.insert(s.driver);
    CHECK(names == std::set<std::string>{"abort", "trigger", "done_i"});
}

TEST_CASE("drivers_of: undriven input port is empty") {
    Ast ast = parse_rtl(dma_source());
    CHECK(drivers_of(ast, "start").empty());
}

TEST_CASE("drivers_of: unknown signal") {
    Ast ast = parse_rtl(dma_source());
    CHECK_THROWS_AS(drivers_of(ast, "ghost"), UnknownSignal);
}

TEST_CASE("drivers_of stays within the symbol table") {
    Ast ast = parse_rtl(dma_source());
    std::set<std::string> names;
    for (auto& s : symbol_table(ast)) names.insert(s.name);
    for (auto& s : symbol_table(ast)) {
        for (auto& site : drivers_of(ast, s.name)) CHECK(names.count(site.driver) == 1);
    }
}

TEST_CASE("ast_digest: dma watch abort") {
    Ast ast = parse_rtl(dma_source());
    AstDigest digest = ast_digest(ast, {"abort"});
    CHECK(digest.module_name == "dma_ctrl");
    CHECK(digest.reg_count == 3);
    CHECK(digest.always_count == 1);
    CHECK(digest.case_count == 1);
    CHECK(digest.clocking.clock == "clk");
    CHECK(digest.clocking.reset == "rst_n");
    CHECK(digest.clocking.reset_active_low);
    REQUIRE(digest.drivers.count("abort"));
    auto& drv = digest.drivers.at("abort");
    CHECK(std::find(drv.begin(), drv.end(), "done_i") != drv.end());
    CHECK(digest.sticky_flags == std::vector<std::string>{"abort"});
    REQUIRE(digest.fsms.size() == 1);
    CHECK(digest.fsms[0].state_signal == "state_q");

    // Guard text survives into the assignment facts.
    REQUIRE(digest.assignments.count("abort"));
    bool sticky_site = false;
    for (auto& f : digest.assignments.at("abort"))
        if (f.self_referential) {
            sticky_site = true;
            CHECK(f.guard == "!done_i");
        }
    CHECK(sticky_site);
}

TEST_CASE("ast_digest: empty watch keeps counts") {
    Ast ast = parse_rtl(dma_source());
    AstDigest digest = ast_digest(ast, {});
    CHECK(digest.drivers.empty());
    CHECK(digest.fanout.empty());
    CHECK(digest.reg_count == 3);
}

TEST_CASE("ast_digest: determinism") {
    Ast ast = parse_rtl(dma_source());
    CHECK(ast_digest(ast, {"abort", "state_q"}) == ast_digest(ast, {"abort", "state_q"}));
}

TEST_CASE("ast_digest: unknown watch entry") {
    Ast ast = parse_rtl(dma_source());
    CHECK_THROWS_AS(ast_digest(ast, {"ghost"}), UnknownSignal);
}

TEST_CASE("parser accepts its own directive output") {
    std::string src = R"(
module m_checker (
  input logic clk,
  input logic abort
);
  a_p1: assert property (@(posedge clk) abort |-> ##1 !abort);
  c_p1: cover property (@(posedge clk) abort);
endmodule

bind m m_checker m_checker_i (.clk(clk), .abort(abort));
)";
    Ast ast = parse_rtl(src);
    CHECK(!ast.partial);
    CHECK(ast.diagnostics.empty());
    CHECK(count_kind(ast.root, NodeKind::AssertDirective) == 1);
    CHECK(count_kind(ast.root, NodeKind::CoverDirective) == 1);

    std::string printed = print_rtl(ast);
    Ast again = parse_rtl(printed);
    CHECK(structurally_equal(ast.root, again.root));
}

TEST_CASE("x/z literals are preserved") {
    std::string src = R"(
module m (input logic clk, output logic q);
  logic r;
  always_ff @(posedge clk) begin
    r <= 1'bx;
  end
  assign q = r;
endmodule
)";
    Ast ast = parse_rtl(src);
    CHECK(!ast.partial);
    CHECK(print_rtl(ast).find("1'bx") != std::string::npos);
}
