//
// atlas — recursive-descent parser and printer for the SystemVerilog subset
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include <cassert>
#include <cctype>
#include <cstring>
#include <functional>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/rtl_frontend.hpp"
#include "atlas/strings.hpp"
#include "json_detail.hpp"
#include "rtl_detail.hpp"

namespace atlas {
namespace rtl {

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::Module: return "Module";
        case NodeKind::Port: return "Port";
        case NodeKind::NetDecl: return "NetDecl";
        case NodeKind::RegDecl: return "RegDecl";
        case NodeKind::Param: return "Param";
        case NodeKind::LocalParam: return "LocalParam";
        case NodeKind::AlwaysBlock: return "AlwaysBlock";
        case NodeKind::Assign: return "Assign";
        case NodeKind::CaseStmt: return "CaseStmt";
        case NodeKind::CaseItem: return "CaseItem";
        case NodeKind::IfStmt: return "IfStmt";
        case NodeKind::InstanceDecl: return "InstanceDecl";
        case NodeKind::Expr: return "Expr";
        case NodeKind::AssertDirective: return "AssertDirective";
        case NodeKind::CoverDirective: return "CoverDirective";
        case NodeKind::Block: return "Block";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------- lexer --

enum class TokKind { ident, number, punct, eof };

struct Token {
    TokKind kind = TokKind::eof;
    std::string text;
    Pos pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token t;
        t.pos = pos();
        if (i_ >= src_.size()) {
            t.kind = TokKind::eof;
            return t;
        }
        char c = src_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            t.kind = TokKind::ident;
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                    src_[i_] == '_' || src_[i_] == '$'))
                t.text += take();
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
            t.kind = TokKind::number;
            t.text = lex_number();
            return t;
        }
        t.kind = TokKind::punct;
        t.text = lex_punct();
        return t;
    }

private:
    char take() {
        char c = src_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    Pos pos() const { return Pos{line_, col_}; }

    void skip_trivia() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') take();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '*') {
                take();
                take();
                while (i_ + 1 < src_.size() && !(src_[i_] == '*' && src_[i_ + 1] == '/'))
                    take();
                if (i_ + 1 < src_.size()) {
                    take();
                    take();
                }
            } else {
                break;
            }
        }
    }

    // Decimal, or [size]'[sbodh]digits with x/z/_ digits, or 'x.
    std::string lex_number() {
        std::string out;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
            out += take();
        if (i_ < src_.size() && src_[i_] == '\'') {
            out += take();
            if (i_ < src_.size() && (src_[i_] == 's' || src_[i_] == 'S')) out += take();
            if (i_ < src_.size() &&
                std::strchr("bBoOdDhH", src_[i_]) != nullptr)
                out += take();
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
                out += take();
        }
        return out;
    }

    std::string lex_punct() {
        static const char* const two[] = {"|->", "|=>", nullptr};
        for (int k = 0; two[k]; ++k) {
            std::string s = two[k];
            if (src_.compare(i_, s.size(), s) == 0) {
                for (size_t j = 0; j < s.size(); ++j) take();
                return s;
            }
        }
        static const char* const pairs[] = {"&&", "||", "==", "!=", "<=", ">=",
                                            "<<", ">>", "##", "::", "^~", "~^",
                                            nullptr};
        for (int k = 0; pairs[k]; ++k) {
            if (src_.compare(i_, 2, pairs[k]) == 0) {
                take();
                take();
                return pairs[k];
            }
        }
        std::string s(1, take());
        return s;
    }

    const std::string& src_;
    size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_keyword(const std::string& s) {
    static const std::set<std::string> kw = {
        "module", "endmodule", "input", "output", "inout", "wire", "logic",
        "reg", "bit", "parameter", "localparam", "assign", "always",
        "always_ff", "always_comb", "always_latch", "begin", "end", "if",
        "else", "case", "casez", "casex", "endcase", "default", "posedge",
        "negedge", "or", "assert", "cover", "property", "bind", "disable",
        "iff",
    };
    return kw.count(s) != 0;
}

// ------------------------------------------------------------- parser ----

struct Precedence {
    int level;
    const char* op;
};

int binary_precedence(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "|") return 3;
    if (op == "^" || op == "^~" || op == "~^") return 4;
    if (op == "&") return 5;
    if (op == "==" || op == "!=") return 6;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 7;
    if (op == "<<" || op == ">>") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    return -1;
}

class Parser {
public:
    explicit Parser(const std::string& src) : lexer_(src) { advance(); }

    Ast parse() {
        Ast ast;
        if (cur_.kind == TokKind::eof)
            throw SyntaxError(cur_.pos.line, cur_.pos.col, "expected 'module'");
        if (!at_ident("module"))
            throw SyntaxError(cur_.pos.line, cur_.pos.col,
                              "expected 'module', got '" + cur_.text + "'");
        ast_ = &ast;
        ast.root = parse_module();
        // Top-level bind statements (checker files) attach under the module
        // they target.
        while (cur_.kind != TokKind::eof) {
            if (at_ident("bind")) {
                ast.root.children.push_back(parse_bind());
            } else if (at_ident("module")) {
                diag(cur_.pos, "only the first module is analyzed");
                ast.partial = true;
                skip_past_ident("endmodule");
            } else {
                diag(cur_.pos, "unexpected trailing token '" + cur_.text + "'");
                ast.partial = true;
                advance();
            }
        }
        return ast;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool at_ident(const std::string& s) const {
        return cur_.kind == TokKind::ident && cur_.text == s;
    }
    bool at_punct(const std::string& s) const {
        return cur_.kind == TokKind::punct && cur_.text == s;
    }

    Token expect_ident_any(const char* what) {
        if (cur_.kind != TokKind::ident || is_keyword(cur_.text))
            throw SyntaxError(cur_.pos.line, cur_.pos.col,
                              std::string("expected ") + what + ", got '" + cur_.text + "'");
        Token t = cur_;
        advance();
        return t;
    }

    void expect_punct(const std::string& s) {
        if (!at_punct(s))
            throw SyntaxError(cur_.pos.line, cur_.pos.col,
                              "expected '" + s + "', got '" + cur_.text + "'");
        advance();
    }

    void expect_keyword(const std::string& s) {
        if (!at_ident(s))
            throw SyntaxError(cur_.pos.line, cur_.pos.col,
                              "expected '" + s + "', got '" + cur_.text + "'");
        advance();
    }

    void diag(Pos pos, const std::string& msg) {
        ast_->diagnostics.push_back(std::to_string(pos.line) + ":" +
                                    std::to_string(pos.col) + ": " + msg);
    }

    // Recovery: skip to just past the next ';' or to 'end'/'endmodule'.
    void recover() {
        while (cur_.kind != TokKind::eof) {
            if (at_punct(";")) {
                advance();
                return;
            }
            if (at_ident("end") || at_ident("endmodule") || at_ident("endcase")) return;
            advance();
        }
    }

    void skip_past_ident(const std::string& name) {
        while (cur_.kind != TokKind::eof && !at_ident(name)) advance();
        if (at_ident(name)) advance();
    }

    // ------------------------------------------------------ module ------

    AstNode parse_module() {
        AstNode mod;
        mod.kind = NodeKind::Module;
        mod.span.begin = cur_.pos;
        expect_keyword("module");
        mod.label = expect_ident_any("module name").text;

        if (at_punct("#")) { // parameter port list: #(parameter W = 8, ...)
            advance();
            expect_punct("(");
            while (!at_punct(")") && cur_.kind != TokKind::eof) {
                if (at_ident("parameter")) advance();
                AstNode p = parse_param_binding(NodeKind::Param);
                mod.children.push_back(std::move(p));
                if (at_punct(",")) advance();
            }
            expect_punct(")");
        }

        if (at_punct("(")) {
            advance();
            if (!at_punct(")")) parse_port_list(mod);
            expect_punct(")");
        }
        expect_punct(";");

        while (cur_.kind != TokKind::eof && !at_ident("endmodule")) {
            try {
                parse_module_item(mod);
            } catch (const SyntaxError& e) {
                diag(cur_.pos, std::string("syntax error: ") + e.what());
                ast_->partial = true;
                recover();
            }
        }
        mod.span.end = cur_.pos;
        if (at_ident("endmodule"))
            advance();
        else {
            diag(cur_.pos, "missing 'endmodule'");
            ast_->partial = true;
        }
        return mod;
    }

    void parse_port_list(AstNode& mod) {
        std::string dir = "input";
        std::string net_type = "wire";
        int width = 1;
        for (;;) {
            if (at_ident("input") || at_ident("output") || at_ident("inout")) {
                dir = cur_.text;
                advance();
                net_type = "wire";
                width = 1;
                if (at_ident("wire") || at_ident("logic") || at_ident("reg") ||
                    at_ident("bit")) {
                    net_type = cur_.text;
                    advance();
                }
                if (at_punct("[")) width = parse_range_width();
            }
            AstNode port;
            port.kind = NodeKind::Port;
            port.span.begin = cur_.pos;
            port.label = expect_ident_any("port name").text;
            port.span.end = cur_.pos;
            port.direction = dir;
            port.net_type = net_type;
            port.width = width;
            mod.children.push_back(std::move(port));
            if (at_punct(",")) {
                advance();
                continue;
            }
            break;
        }
    }

    int parse_range_width() {
        expect_punct("[");
        AstNode msb = parse_expr();
        expect_punct(":");
        AstNode lsb = parse_expr();
        expect_punct("]");
        auto m = rtl::detail::const_eval(msb, params_);
        auto l = rtl::detail::const_eval(lsb, params_);
        if (m && l && *m >= *l) return static_cast<int>(*m - *l + 1);
        // Non-constant range: record and assume single bit.
        diag(cur_.pos, "non-constant range, width defaulted to 1");
        return 1;
    }

    AstNode parse_param_binding(NodeKind kind) {
        AstNode p;
        p.kind = kind;
        p.span.begin = cur_.pos;
        if (at_punct("[")) p.width = parse_range_width();
        p.label = expect_ident_any("parameter name").text;
        expect_punct("=");
        p.children.push_back(parse_expr());
        p.span.end = cur_.pos;
        if (auto v = rtl::detail::const_eval(p.children[0], params_))
            params_[p.label] = *v;
        return p;
    }

    void parse_module_item(AstNode& mod) {
        if (at_ident("parameter") || at_ident("localparam")) {
            NodeKind kind = at_ident("parameter") ? NodeKind::Param : NodeKind::LocalParam;
            advance();
            if (at_ident("logic") || at_ident("integer") || at_ident("int")) advance();
            int width = 0;
            if (at_punct("[")) width = parse_range_width();
            for (;;) {
                AstNode p = parse_param_binding(kind);
                if (width) p.width = width;
                mod.children.push_back(std::move(p));
                if (at_punct(",")) {
                    advance();
                    continue;
                }
                break;
            }
            expect_punct(";");
            return;
        }
        if (at_ident("wire") || at_ident("logic") || at_ident("reg") || at_ident("bit")) {
            parse_decl(mod);
            return;
        }
        if (at_ident("input") || at_ident("output") || at_ident("inout")) {
            // Non-ANSI port declarations are outside the subset.
            diag(cur_.pos, "unsupported construct: non-ANSI port declaration");
            ast_->partial = true;
            recover();
            return;
        }
        if (at_ident("assign")) {
            AstNode a = parse_continuous_assign();
            mod.children.push_back(std::move(a));
            return;
        }
        if (at_ident("always") || at_ident("always_ff") || at_ident("always_comb") ||
            at_ident("always_latch")) {
            mod.children.push_back(parse_always());
            return;
        }
        if (at_ident("assert") || at_ident("cover")) {
            mod.children.push_back(parse_directive(""));
            return;
        }
        if (at_ident("bind")) {
            mod.children.push_back(parse_bind());
            return;
        }
        // Recognized constructs outside the subset. Block-like ones skip to
        // their end keyword, statement-like ones to the next semicolon.
        static const std::set<std::string> kUnsupportedBlocks = {
            "class",   "function", "task",    "generate",   "interface",
            "package", "program",  "specify", "covergroup", "primitive",
            "checker",
        };
        static const std::set<std::string> kUnsupportedStmts = {
            "typedef", "enum", "struct", "genvar", "initial", "final", "fork",
        };
        if (cur_.kind == TokKind::ident &&
            (kUnsupportedBlocks.count(cur_.text) || kUnsupportedStmts.count(cur_.text))) {
            std::string construct = cur_.text;
            bool blocklike = kUnsupportedBlocks.count(construct) != 0;
            diag(cur_.pos, "unsupported construct: " + construct);
            ast_->partial = true;
            advance();
            std::string closer = "end" + construct;
            while (cur_.kind != TokKind::eof && !at_ident("endmodule")) {
                if (blocklike && at_ident(closer)) {
                    advance();
                    return;
                }
                if (!blocklike && at_punct(";")) {
                    advance();
                    return;
                }
                advance();
            }
            return;
        }
        if (cur_.kind == TokKind::ident && !is_keyword(cur_.text)) {
            // Either a labeled directive "name: assert property (...)" or an
            // instantiation "type inst (...)".
            Token head = cur_;
            advance();
            if (at_punct(":")) {
                advance();
                if (at_ident("assert") || at_ident("cover")) {
                    mod.children.push_back(parse_directive(head.text));
                    return;
                }
                throw SyntaxError(cur_.pos.line, cur_.pos.col,
                                  "expected 'assert' or 'cover' after label");
            }
            mod.children.push_back(parse_instance(head));
            return;
        }
        if (cur_.kind == TokKind::ident) {
            // Recognized keyword with no support (class, function, ...).
            std::string construct = cur_.text;
            diag(cur_.pos, "unsupported construct: " + construct);
            ast_->partial = true;
            advance();
            std::string closer = "end" + construct;
            while (cur_.kind != TokKind::eof && !at_ident(closer) && !at_punct(";") &&
                   !at_ident("endmodule"))
                advance();
            if (at_ident(closer) || at_punct(";")) advance();
            return;
        }
        throw SyntaxError(cur_.pos.line, cur_.pos.col,
                          "expected module item, got '" + cur_.text + "'");
    }

    void parse_decl(AstNode& mod) {
        std::string net_type = cur_.text;
        NodeKind kind = net_type == "wire" ? NodeKind::NetDecl : NodeKind::RegDecl;
        Pos begin = cur_.pos;
        advance();
        int width = 1;
        if (at_punct("[")) width = parse_range_width();
        for (;;) {
            AstNode d;
            d.kind = kind;
            d.span.begin = begin;
            d.label = expect_ident_any("declaration name").text;
            d.span.end = cur_.pos;
            d.width = width;
            d.net_type = net_type;
            mod.children.push_back(std::move(d));
            if (at_punct(",")) {
                advance();
                continue;
            }
            break;
        }
        expect_punct(";");
    }

    AstNode parse_continuous_assign() {
        AstNode a;
        a.kind = NodeKind::Assign;
        a.span.begin = cur_.pos;
        expect_keyword("assign");
        a.continuous = true;
        a.children.push_back(parse_lvalue());
        expect_punct("=");
        a.children.push_back(parse_expr());
        a.span.end = cur_.pos;
        expect_punct(";");
        return a;
    }

    AstNode parse_always() {
        AstNode blk;
        blk.kind = NodeKind::AlwaysBlock;
        blk.span.begin = cur_.pos;
        blk.always_kind = cur_.text;
        advance();
        if (at_punct("@")) {
            advance();
            expect_punct("(");
            if (at_punct("*")) {
                advance();
            } else {
                for (;;) {
                    std::string edge;
                    if (at_ident("posedge") || at_ident("negedge")) {
                        edge = cur_.text;
                        advance();
                    }
                    std::string sig = expect_ident_any("sensitivity signal").text;
                    blk.sensitivity.emplace_back(edge, sig);
                    if (at_ident("or") || at_punct(",")) {
                        advance();
                        continue;
                    }
                    break;
                }
            }
            expect_punct(")");
        }
        // Body: a single statement; begin/end is flattened into children.
        if (at_ident("begin")) {
            advance();
            while (!at_ident("end") && cur_.kind != TokKind::eof)
                blk.children.push_back(parse_stmt());
            expect_keyword("end");
        } else {
            blk.children.push_back(parse_stmt());
        }
        blk.span.end = cur_.pos;
        return blk;
    }

    AstNode parse_stmt() {
        if (at_ident("begin")) {
            // Single-statement groups normalize to the statement itself.
            Pos begin = cur_.pos;
            advance();
            std::vector<AstNode> stmts;
            while (!at_ident("end") && cur_.kind != TokKind::eof)
                stmts.push_back(parse_stmt());
            expect_keyword("end");
            if (stmts.size() == 1) return std::move(stmts[0]);
            AstNode block;
            block.kind = NodeKind::Block;
            block.label = "begin";
            block.span.begin = begin;
            block.span.end = cur_.pos;
            block.children = std::move(stmts);
            return block;
        }
        if (at_ident("if")) return parse_if();
        if (at_ident("case") || at_ident("casez") || at_ident("casex"))
            return parse_case();
        if (at_punct(";")) {
            advance();
            AstNode empty;
            empty.kind = NodeKind::Block;
            empty.label = "empty";
            return empty;
        }
        return parse_proc_assign();
    }

    AstNode parse_if() {
        AstNode n;
        n.kind = NodeKind::IfStmt;
        n.span.begin = cur_.pos;
        expect_keyword("if");
        expect_punct("(");
        n.children.push_back(parse_expr());
        expect_punct(")");
        n.children.push_back(parse_stmt());
        if (at_ident("else")) {
            advance();
            n.children.push_back(parse_stmt());
        }
        n.span.end = cur_.pos;
        return n;
    }

    AstNode parse_case() {
        AstNode n;
        n.kind = NodeKind::CaseStmt;
        n.span.begin = cur_.pos;
        n.case_kind = cur_.text;
        advance();
        expect_punct("(");
        n.children.push_back(parse_expr());
        expect_punct(")");
        while (!at_ident("endcase") && cur_.kind != TokKind::eof) {
            AstNode item;
            item.kind = NodeKind::CaseItem;
            item.span.begin = cur_.pos;
            if (at_ident("default")) {
                advance();
                item.label = "default";
                n.has_default = true;
                if (at_punct(":")) advance();
            } else {
                for (;;) {
                    item.children.push_back(parse_expr());
                    if (at_punct(",")) {
                        advance();
                        continue;
                    }
                    break;
                }
                expect_punct(":");
            }
            AstNode body = parse_stmt();
            if (body.kind == NodeKind::Block && body.label == "begin") {
                for (auto& s : body.children) item.children.push_back(std::move(s));
            } else if (!(body.kind == NodeKind::Block && body.label == "empty")) {
                item.children.push_back(std::move(body));
            }
            item.span.end = cur_.pos;
            n.children.push_back(std::move(item));
        }
        n.span.end = cur_.pos;
        expect_keyword("endcase");
        return n;
    }

    AstNode parse_proc_assign() {
        AstNode a;
        a.kind = NodeKind::Assign;
        a.span.begin = cur_.pos;
        a.children.push_back(parse_lvalue());
        if (at_punct("<=")) {
            a.nonblocking = true;
            advance();
        } else if (at_punct("=")) {
            advance();
        } else {
            throw SyntaxError(cur_.pos.line, cur_.pos.col,
                              "expected '=' or '<=', got '" + cur_.text + "'");
        }
        a.children.push_back(parse_expr());
        a.span.end = cur_.pos;
        expect_punct(";");
        return a;
    }

    AstNode parse_lvalue() {
        AstNode id = parse_primary();
        return id;
    }

    AstNode parse_instance(const Token& type_tok) {
        AstNode inst;
        inst.kind = NodeKind::InstanceDecl;
        inst.span.begin = type_tok.pos;
        inst.type_name = type_tok.text;
        if (at_punct("#")) { // parameter overrides: #(.N(4)) — captured textually
            advance();
            expect_punct("(");
            int depth = 1;
            while (depth > 0 && cur_.kind != TokKind::eof) {
                if (at_punct("(")) ++depth;
                if (at_punct(")")) --depth;
                if (depth > 0) advance();
            }
            expect_punct(")");
        }
        inst.label = expect_ident_any("instance name").text;
        expect_punct("(");
        parse_named_connections(inst);
        expect_punct(")");
        expect_punct(";");
        inst.span.end = cur_.pos;
        return inst;
    }

    AstNode parse_bind() {
        AstNode b;
        b.kind = NodeKind::InstanceDecl;
        b.always_kind = "bind";
        b.span.begin = cur_.pos;
        expect_keyword("bind");
        b.bind_target = expect_ident_any("bind target module").text;
        b.type_name = expect_ident_any("checker module").text;
        b.label = expect_ident_any("instance name").text;
        expect_punct("(");
        parse_named_connections(b);
        expect_punct(")");
        expect_punct(";");
        b.span.end = cur_.pos;
        return b;
    }

    void parse_named_connections(AstNode& inst) {
        if (at_punct(")")) return;
        for (;;) {
            expect_punct(".");
            AstNode conn;
            conn.kind = NodeKind::Expr;
            conn.span.begin = cur_.pos;
            conn.label = "." + expect_ident_any("port name").text;
            expect_punct("(");
            if (!at_punct(")")) conn.children.push_back(parse_expr());
            expect_punct(")");
            conn.span.end = cur_.pos;
            inst.children.push_back(std::move(conn));
            if (at_punct(",")) {
                advance();
                continue;
            }
            break;
        }
    }

    AstNode parse_directive(const std::string& label) {
        AstNode d;
        d.span.begin = cur_.pos;
        d.kind = at_ident("assert") ? NodeKind::AssertDirective : NodeKind::CoverDirective;
        advance();
        expect_keyword("property");
        expect_punct("(");
        // Property text is opaque to the RTL parser; minicheck owns the
        // SVA grammar. Capture the balanced-paren source.
        std::string text;
        int depth = 1;
        while (depth > 0 && cur_.kind != TokKind::eof) {
            if (at_punct("(")) ++depth;
            if (at_punct(")")) {
                --depth;
                if (depth == 0) break;
            }
            if (!text.empty() && needs_space(text.back(), cur_.text)) text += ' ';
            text += cur_.text;
            advance();
        }
        expect_punct(")");
        expect_punct(";");
        d.label = label;
        AstNode prop;
        prop.kind = NodeKind::Expr;
        prop.label = text;
        d.children.push_back(std::move(prop));
        d.span.end = cur_.pos;
        return d;
    }

    static bool needs_space(char prev, const std::string& next) {
        if (next.empty()) return false;
        auto wordish = [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
                   c == '\'';
        };
        return wordish(prev) && wordish(next.front());
    }

    // -------------------------------------------------- expressions ------

    AstNode parse_expr() { return parse_ternary(); }

    AstNode parse_ternary() {
        AstNode cond = parse_binary(1);
        if (at_punct("?")) {
            advance();
            AstNode t = parse_ternary();
            expect_punct(":");
            AstNode f = parse_ternary();
            AstNode n;
            n.kind = NodeKind::Expr;
            n.label = "?:";
            n.span = cond.span;
            n.children.push_back(std::move(cond));
            n.children.push_back(std::move(t));
            n.children.push_back(std::move(f));
            return n;
        }
        return cond;
    }

    AstNode parse_binary(int min_prec) {
        AstNode lhs = parse_unary();
        for (;;) {
            if (cur_.kind != TokKind::punct) break;
            int prec = binary_precedence(cur_.text);
            if (prec < min_prec) break;
            std::string op = cur_.text;
            advance();
            AstNode rhs = parse_binary(prec + 1);
            AstNode n;
            n.kind = NodeKind::Expr;
            n.label = op;
            n.span.begin = lhs.span.begin;
            n.span.end = rhs.span.end;
            n.children.push_back(std::move(lhs));
            n.children.push_back(std::move(rhs));
            lhs = std::move(n);
        }
        return lhs;
    }

    AstNode parse_unary() {
        static const char* const unaries[] = {"!", "~", "-", "+", "&", "|", "^", nullptr};
        if (cur_.kind == TokKind::punct) {
            for (int i = 0; unaries[i]; ++i) {
                if (cur_.text == unaries[i]) {
                    AstNode n;
                    n.kind = NodeKind::Expr;
                    n.label = std::string("u") + unaries[i];
                    n.span.begin = cur_.pos;
                    advance();
                    n.children.push_back(parse_unary());
                    n.span.end = n.children.back().span.end;
                    return n;
                }
            }
        }
        return parse_primary();
    }

    AstNode parse_primary() {
        AstNode n;
        n.kind = NodeKind::Expr;
        n.span.begin = cur_.pos;
        if (at_punct("(")) {
            advance();
            AstNode inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        if (at_punct("{")) return parse_concat();
        if (cur_.kind == TokKind::number) {
            n.label = cur_.text;
            n.span.end = cur_.pos;
            advance();
            // "2'd0" may arrive as two tokens when the size is separate.
            return n;
        }
        if (cur_.kind == TokKind::ident && !is_keyword(cur_.text)) {
            n.label = cur_.text;
            n.span.end = cur_.pos;
            advance();
            if (n.label[0] == '$') { // system call: $past(x, 1) etc.
                if (at_punct("(")) {
                    std::string fn = n.label;
                    n.label = fn;
                    advance();
                    while (!at_punct(")") && cur_.kind != TokKind::eof) {
                        n.children.push_back(parse_expr());
                        if (at_punct(",")) advance();
                    }
                    expect_punct(")");
                }
                return n;
            }
            while (at_punct("[")) {
                advance();
                AstNode idx = parse_expr();
                AstNode sel;
                sel.kind = NodeKind::Expr;
                sel.span.begin = n.span.begin;
                if (at_punct(":")) {
                    advance();
                    AstNode lsb = parse_expr();
                    sel.label = "range_sel";
                    sel.children.push_back(std::move(n));
                    sel.children.push_back(std::move(idx));
                    sel.children.push_back(std::move(lsb));
                } else {
                    sel.label = "index";
                    sel.children.push_back(std::move(n));
                    sel.children.push_back(std::move(idx));
                }
                expect_punct("]");
                sel.span.end = cur_.pos;
                n = std::move(sel);
            }
            return n;
        }
        throw SyntaxError(cur_.pos.line, cur_.pos.col,
                          "expected expression, got '" + cur_.text + "'");
    }

    AstNode parse_concat() {
        AstNode n;
        n.kind = NodeKind::Expr;
        n.label = "concat";
        n.span.begin = cur_.pos;
        expect_punct("{");
        for (;;) {
            AstNode item = parse_expr();
            // {n{expr}} replication
            if (at_punct("{")) {
                advance();
                AstNode rep;
                rep.kind = NodeKind::Expr;
                rep.label = "repl";
                rep.children.push_back(std::move(item));
                rep.children.push_back(parse_expr());
                expect_punct("}");
                item = std::move(rep);
            }
            n.children.push_back(std::move(item));
            if (at_punct(",")) {
                advance();
                continue;
            }
            break;
        }
        expect_punct("}");
        n.span.end = cur_.pos;
        return n;
    }

    Lexer lexer_;
    Token cur_;
    Ast* ast_ = nullptr;
    std::map<std::string, uint64_t> params_;
};

} // namespace

Ast parse_rtl(const std::string& source) {
    Parser parser(source);
    return parser.parse();
}

// ----------------------------------------------------------- printer -----

namespace {

void print_stmt(const AstNode& stmt, std::ostringstream& out, int indent);

void print_body(const std::vector<AstNode>& stmts, std::ostringstream& out, int indent) {
    std::string pad(indent * 2, ' ');
    if (stmts.size() == 1) {
        print_stmt(stmts[0], out, indent);
        return;
    }
    out << pad << "begin\n";
    for (auto& s : stmts) print_stmt(s, out, indent + 1);
    out << pad << "end\n";
}

void print_stmt(const AstNode& stmt, std::ostringstream& out, int indent) {
    std::string pad(indent * 2, ' ');
    switch (stmt.kind) {
        case NodeKind::Assign:
            out << pad << rtl::detail::render_expr(stmt.children[0])
                << (stmt.nonblocking ? " <= " : " = ")
                << rtl::detail::render_expr(stmt.children[1]) << ";\n";
            break;
        case NodeKind::IfStmt: {
            out << pad << "if (" << rtl::detail::render_expr(stmt.children[0]) << ")\n";
            print_body({stmt.children[1]}, out, indent + 1);
            if (stmt.children.size() > 2) {
                out << pad << "else\n";
                print_body({stmt.children[2]}, out, indent + 1);
            }
            break;
        }
        case NodeKind::CaseStmt: {
            out << pad << stmt.case_kind << " ("
                << rtl::detail::render_expr(stmt.children[0]) << ")\n";
            for (size_t i = 1; i < stmt.children.size(); ++i) {
                const AstNode& item = stmt.children[i];
                std::vector<std::string> labels;
                std::vector<const AstNode*> body;
                for (auto& c : item.children) {
                    if (c.kind == NodeKind::Expr)
                        labels.push_back(rtl::detail::render_expr(c));
                    else
                        body.push_back(&c);
                }
                out << pad << "  "
                    << (item.label == "default" ? std::string("default")
                                                : join(labels, ", "))
                    << ":";
                if (body.empty()) {
                    out << " ;\n";
                } else if (body.size() == 1) {
                    out << "\n";
                    print_stmt(*body[0], out, indent + 2);
                } else {
                    out << " begin\n";
                    for (auto* b : body) print_stmt(*b, out, indent + 2);
                    out << pad << "  end\n";
                }
            }
            out << pad << "endcase\n";
            break;
        }
        case NodeKind::Block:
            if (stmt.label == "empty") {
                out << pad << ";\n";
                break;
            }
            out << pad << "begin\n";
            for (auto& s : stmt.children) print_stmt(s, out, indent + 1);
            out << pad << "end\n";
            break;
        default:
            out << pad << "// <unprintable statement>\n";
    }
}

} // namespace

std::string print_rtl(const Ast& ast) {
    std::ostringstream out;
    const AstNode& mod = ast.root;

    std::vector<const AstNode*> ports;
    std::vector<const AstNode*> items;
    std::vector<const AstNode*> binds;
    for (auto& c : mod.children) {
        if (c.kind == NodeKind::Port)
            ports.push_back(&c);
        else if (c.kind == NodeKind::InstanceDecl && c.always_kind == "bind")
            binds.push_back(&c);
        else
            items.push_back(&c);
    }

    out << "module " << mod.label << " (";
    for (size_t i = 0; i < ports.size(); ++i) {
        const AstNode* p = ports[i];
        out << "\n  " << p->direction << " " << p->net_type;
        if (p->width > 1) out << " [" << p->width - 1 << ":0]";
        out << " " << p->label;
        if (i + 1 < ports.size()) out << ",";
    }
    out << "\n);\n";

    for (const AstNode* item : items) {
        switch (item->kind) {
            case NodeKind::Param:
            case NodeKind::LocalParam:
                out << "  " << (item->kind == NodeKind::Param ? "parameter" : "localparam");
                if (item->width > 1) out << " [" << item->width - 1 << ":0]";
                out << " " << item->label << " = "
                    << rtl::detail::render_expr(item->children[0]) << ";\n";
                break;
            case NodeKind::NetDecl:
            case NodeKind::RegDecl:
                out << "  " << item->net_type;
                if (item->width > 1) out << " [" << item->width - 1 << ":0]";
                out << " " << item->label << ";\n";
                break;
            case NodeKind::Assign:
                out << "  assign " << rtl::detail::render_expr(item->children[0]) << " = "
                    << rtl::detail::render_expr(item->children[1]) << ";\n";
                break;
            case NodeKind::AlwaysBlock: {
                out << "  " << item->always_kind;
                if (!item->sensitivity.empty()) {
                    out << " @(";
                    for (size_t i = 0; i < item->sensitivity.size(); ++i) {
                        auto& [edge, sig] = item->sensitivity[i];
                        if (i) out << " or ";
                        if (!edge.empty()) out << edge << " ";
                        out << sig;
                    }
                    out << ")";
                } else if (item->always_kind == "always") {
                    out << " @(*)";
                }
                out << " begin\n";
                for (auto& s : item->children) print_stmt(s, out, 2);
                out << "  end\n";
                break;
            }
            case NodeKind::InstanceDecl: {
                out << "  " << item->type_name << " " << item->label << " (";
                for (size_t i = 0; i < item->children.size(); ++i) {
                    out << item->children[i].label << "("
                        << (item->children[i].children.empty()
                                ? ""
                                : rtl::detail::render_expr(item->children[i].children[0]))
                        << ")";
                    if (i + 1 < item->children.size()) out << ", ";
                }
                out << ");\n";
                break;
            }
            case NodeKind::AssertDirective:
            case NodeKind::CoverDirective:
                out << "  ";
                if (!item->label.empty()) out << item->label << ": ";
                out << (item->kind == NodeKind::AssertDirective ? "assert" : "cover")
                    << " property (" << item->children[0].label << ");\n";
                break;
            default:
                break;
        }
    }
    out << "endmodule\n";

    for (const AstNode* b : binds) {
        out << "\nbind " << b->bind_target << " " << b->type_name << " " << b->label
            << " (";
        for (size_t i = 0; i < b->children.size(); ++i) {
            out << b->children[i].label << "("
                << (b->children[i].children.empty()
                        ? ""
                        : rtl::detail::render_expr(b->children[i].children[0]))
                << ")";
            if (i + 1 < b->children.size()) out << ", ";
        }
        out << ");\n";
    }
    return out.str();
}

bool structurally_equal(const AstNode& a, const AstNode& b) {
    if (a.kind != b.kind || a.label != b.label || a.direction != b.direction ||
        a.width != b.width || a.always_kind != b.always_kind ||
        a.sensitivity != b.sensitivity || a.nonblocking != b.nonblocking ||
        a.continuous != b.continuous || a.case_kind != b.case_kind ||
        a.has_default != b.has_default || a.net_type != b.net_type ||
        a.type_name != b.type_name || a.bind_target != b.bind_target)
        return false;
    if (a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    return true;
}

std::string dump_ast_json(const Ast& ast) {
    using atlas::detail::Json;
    std::function<Json(const AstNode&)> conv = [&](const AstNode& n) -> Json {
        Json j;
        j["kind"] = node_kind_name(n.kind);
        if (!n.label.empty()) j["label"] = n.label;
        j["span"] = {{"begin", {n.span.begin.line, n.span.begin.col}},
                     {"end", {n.span.end.line, n.span.end.col}}};
        if (!n.direction.empty()) j["direction"] = n.direction;
        if (n.width != 1) j["width"] = n.width;
        Json kids = Json::array();
        for (auto& c : n.children) kids.push_back(conv(c));
        if (!kids.empty()) j["children"] = kids;
        return j;
    };
    Json root;
    root["root"] = conv(ast.root);
    root["partial"] = ast.partial;
    root["diagnostics"] = ast.diagnostics;
    return root.dump(2) + "\n";
}

} // namespace rtl
} // namespace atlas
