//
// atlas — SVA subset parser and trace-bounded, 3-valued evaluator
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
// Evaluation semantics (the naive oracle in tests re-derives these
// independently):
//   * one trace row per clock tick; an attempt starts at every cycle
//   * disable iff: an attempt is abandoned when the expression is
//     definitely true anywhere between the attempt start and the cycle
//     under evaluation
//   * antecedent: X is neutral — an indefinite match is no match
//   * consequent: the obligation fails when no delay choice matches
//     definitely within the trace; X at a decided cycle is a failure
//   * obligations with every completion past the end of the trace drop out
//   * vacuous means no non-disabled antecedent match anywhere; |=> is
//     |-> with one extra cycle
//
#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <map>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/minicheck.hpp"
#include "atlas/strings.hpp"

namespace atlas {
namespace minicheck {

namespace {

// ------------------------------------------------------------- lexing ----

struct Tok {
    enum Kind { ident, number, punct, eof } kind = eof;
    std::string text;
    size_t pos = 0;
};

class SvaLexer {
public:
    explicit SvaLexer(const std::string& src) : src_(src) {}

    Tok next() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        Tok t;
        t.pos = i_;
        if (i_ >= src_.size()) return t;
        char c = src_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            t.kind = Tok::ident;
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                    src_[i_] == '_' || src_[i_] == '$'))
                t.text += src_[i_++];
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
            t.kind = Tok::number;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
                t.text += src_[i_++];
            if (i_ < src_.size() && src_[i_] == '\'') {
                t.text += src_[i_++];
                while (i_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                        src_[i_] == '_'))
                    t.text += src_[i_++];
            }
            return t;
        }
        t.kind = Tok::punct;
        for (const char* two : {"|->", "|=>"}) {
            if (src_.compare(i_, 3, two) == 0) {
                t.text = two;
                i_ += 3;
                return t;
            }
        }
        for (const char* two : {"##", "&&", "||", "==", "!="}) {
            if (src_.compare(i_, 2, two) == 0) {
                t.text = two;
                i_ += 2;
                return t;
            }
        }
        t.text = std::string(1, src_[i_++]);
        return t;
    }

private:
    const std::string& src_;
    size_t i_ = 0;
};

[[noreturn]] void fail(const Tok& t, const std::string& msg) {
    throw SvaSyntaxError(msg + " at offset " + std::to_string(t.pos) +
                         (t.text.empty() ? "" : " near '" + t.text + "'"));
}

const std::set<std::string>& unsupported_sequence_ops() {
    static const std::set<std::string> ops = {
        "throughout", "until", "until_with", "within", "intersect", "and", "or",
        "s_eventually", "s_until", "eventually", "nexttime", "always", "first_match",
    };
    return ops;
}

class SvaParser {
public:
    explicit SvaParser(const std::string& src) : lexer_(src) { advance(); }

    SvaSubsetAst parse_property(const std::string& original) {
        SvaSubsetAst ast;
        ast.text = original;
        if (at_punct("@")) {
            advance();
            expect_punct("(");
            if (!at_ident("posedge") && !at_ident("negedge"))
                fail(cur_, "expected posedge/negedge");
            ast.clock_edge = cur_.text;
            advance();
            ast.clock = expect_ident("clock name");
            expect_punct(")");
        }
        if (at_ident("disable")) {
            advance();
            if (!at_ident("iff")) fail(cur_, "expected 'iff'");
            advance();
            expect_punct("(");
            ast.disable_iff = parse_expr();
            expect_punct(")");
        }
        ast.antecedent = parse_sequence();
        if (at_punct("|->") || at_punct("|=>")) {
            ast.has_implication = true;
            ast.overlapping = cur_.text == "|->";
            advance();
            ast.consequent = parse_sequence();
        }
        if (cur_.kind != Tok::eof) fail(cur_, "trailing input");
        return ast;
    }

    Sequence parse_sequence_all() {
        Sequence s = parse_sequence();
        if (cur_.kind != Tok::eof) fail(cur_, "trailing input");
        return s;
    }

    std::unique_ptr<Expr> parse_expr_all() {
        auto e = parse_expr();
        if (cur_.kind != Tok::eof) fail(cur_, "trailing input");
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }
    bool at_punct(const std::string& s) const {
        return cur_.kind == Tok::punct && cur_.text == s;
    }
    bool at_ident(const std::string& s) const {
        return cur_.kind == Tok::ident && cur_.text == s;
    }
    void expect_punct(const std::string& s) {
        if (!at_punct(s)) fail(cur_, "expected '" + s + "'");
        advance();
    }
    std::string expect_ident(const char* what) {
        if (cur_.kind != Tok::ident) fail(cur_, std::string("expected ") + what);
        std::string t = cur_.text;
        advance();
        return t;
    }

    std::pair<int, int> parse_delay() {
        // called with cur_ == "##"
        advance();
        if (at_punct("[")) {
            advance();
            if (cur_.kind != Tok::number) fail(cur_, "expected delay bound");
            int lo = std::stoi(cur_.text);
            advance();
            expect_punct(":");
            if (cur_.kind != Tok::number) fail(cur_, "expected delay bound");
            int hi = std::stoi(cur_.text);
            advance();
            expect_punct("]");
            if (hi < lo) fail(cur_, "delay range upper bound below lower");
            return {lo, hi};
        }
        if (cur_.kind != Tok::number) fail(cur_, "expected delay");
        int n = std::stoi(cur_.text);
        advance();
        return {n, n};
    }

    Sequence parse_sequence() {
        Sequence seq;
        if (at_punct("##")) {
            auto [lo, hi] = parse_delay();
            seq.lead_min = lo;
            seq.lead_max = hi;
        }
        seq.items.push_back(parse_expr());
        for (;;) {
            if (at_punct("##")) {
                seq.delays.push_back(parse_delay());
                seq.items.push_back(parse_expr());
                continue;
            }
            if (cur_.kind == Tok::ident && unsupported_sequence_ops().count(cur_.text))
                throw UnsupportedSvaFeature(cur_.text);
            break;
        }
        return seq;
    }

    std::unique_ptr<Expr> parse_expr() { return parse_or(); }

    std::unique_ptr<Expr> mk(ExprOp op) {
        auto e = std::make_unique<Expr>();
        e->op = op;
        return e;
    }

    std::unique_ptr<Expr> parse_or() {
        auto lhs = parse_and();
        while (at_punct("||")) {
            advance();
            auto e = mk(ExprOp::logical_or);
            e->args.push_back(std::move(lhs));
            e->args.push_back(parse_and());
            lhs = std::move(e);
        }
        return lhs;
    }

    std::unique_ptr<Expr> parse_and() {
        auto lhs = parse_cmp();
        while (at_punct("&&")) {
            advance();
            auto e = mk(ExprOp::logical_and);
            e->args.push_back(std::move(lhs));
            e->args.push_back(parse_cmp());
            lhs = std::move(e);
        }
        return lhs;
    }

    std::unique_ptr<Expr> parse_cmp() {
        auto lhs = parse_unary();
        if (at_punct("==") || at_punct("!=") || at_punct("<")) {
            ExprOp op = at_punct("==") ? ExprOp::eq
                        : at_punct("!=") ? ExprOp::ne
                                         : ExprOp::lt;
            advance();
            auto e = mk(op);
            e->args.push_back(std::move(lhs));
            e->args.push_back(parse_unary());
            return e;
        }
        if (at_punct(">") || at_punct("<=") || at_punct(">="))
            throw UnsupportedSvaFeature("comparison operator " + cur_.text);
        return lhs;
    }

    std::unique_ptr<Expr> parse_unary() {
        if (at_punct("!")) {
            advance();
            auto e = mk(ExprOp::logical_not);
            e->args.push_back(parse_unary());
            return e;
        }
        return parse_primary();
    }

    std::unique_ptr<Expr> parse_primary() {
        if (at_punct("(")) {
            advance();
            auto e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (cur_.kind == Tok::number) {
            auto e = mk(ExprOp::literal);
            e->literal = parse_sva_literal(cur_.text);
            e->name = cur_.text;
            advance();
            return e;
        }
        if (cur_.kind != Tok::ident) fail(cur_, "expected expression");
        std::string name = cur_.text;
        advance();
        if (name[0] == '$') {
            ExprOp op;
            if (name == "$past")
                op = ExprOp::past;
            else if (name == "$stable")
                op = ExprOp::stable;
            else if (name == "$rose")
                op = ExprOp::rose;
            else if (name == "$fell")
                op = ExprOp::fell;
            else if (name == "$isunknown")
                op = ExprOp::isunknown;
            else
                throw UnsupportedSvaFeature(name);
            auto e = mk(op);
            expect_punct("(");
            e->args.push_back(parse_expr());
            e->index = 1;
            if (op == ExprOp::past && at_punct(",")) {
                advance();
                if (cur_.kind != Tok::number) fail(cur_, "expected $past depth");
                e->index = std::stoi(cur_.text);
                if (e->index < 1) fail(cur_, "$past depth must be >= 1");
                advance();
            }
            expect_punct(")");
            return e;
        }
        if (unsupported_sequence_ops().count(name)) throw UnsupportedSvaFeature(name);
        auto e = mk(ExprOp::signal);
        e->name = name;
        if (at_punct("[")) {
            advance();
            if (cur_.kind != Tok::number) fail(cur_, "expected bit index");
            auto idx = mk(ExprOp::bit_index);
            idx->name = name;
            idx->index = std::stoi(cur_.text);
            advance();
            expect_punct("]");
            return idx;
        }
        return e;
    }

    static Value parse_sva_literal(const std::string& text) {
        size_t apos = text.find('\'');
        if (apos == std::string::npos) return Value::of(std::stoull(text));
        size_t i = apos + 1;
        if (i < text.size() && (text[i] == 's' || text[i] == 'S')) ++i;
        if (i >= text.size()) throw SvaSyntaxError("bad literal " + text);
        char base = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
        ++i;
        int radix = base == 'b' ? 2 : base == 'o' ? 8 : base == 'd' ? 10
                    : base == 'h' ? 16 : 0;
        if (radix == 0) {
            // 'x / 'z shorthand
            if (base == 'x' || base == 'z') return Value::x();
            throw SvaSyntaxError("bad literal " + text);
        }
        uint64_t v = 0;
        bool is_x = false;
        bool any = false;
        for (; i < text.size(); ++i) {
            char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
            if (c == '_') continue;
            if (c == 'x' || c == 'z' || c == '?') {
                is_x = true;
                any = true;
                continue;
            }
            int d = c <= '9' ? c - '0' : 10 + (c - 'a');
            if (d < 0 || d >= radix) throw SvaSyntaxError("bad literal " + text);
            v = v * radix + static_cast<uint64_t>(d);
            any = true;
        }
        if (!any) throw SvaSyntaxError("bad literal " + text);
        return is_x ? Value::x() : Value::of(v);
    }

    SvaLexer lexer_;
    Tok cur_;
};

} // namespace

SvaSubsetAst parse_sva_subset(const std::string& text) {
    SvaParser parser(text);
    return parser.parse_property(text);
}

std::unique_ptr<Expr> parse_bool_expr(const std::string& text) {
    SvaParser parser(text);
    return parser.parse_expr_all();
}

std::set<std::string> collect_identifiers(const std::string& text) {
    // Lexical scan: identifiers that are neither keywords nor $functions.
    static const std::set<std::string> keywords = {
        "disable", "iff", "posedge", "negedge",
    };
    std::set<std::string> out;
    SvaLexer lex(text);
    for (Tok t = lex.next(); t.kind != Tok::eof; t = lex.next()) {
        if (t.kind != Tok::ident) continue;
        if (t.text[0] == '$') continue;
        if (keywords.count(t.text) || unsupported_sequence_ops().count(t.text)) continue;
        out.insert(t.text);
    }
    return out;
}

// ---------------------------------------------------------- evaluation ----

namespace {

/// 3-valued boolean: 0, 1, or X.
enum class B3 { f, t, x };

B3 to_b3(const Value& v) {
    if (v.is_x) return B3::x;
    return v.v != 0 ? B3::t : B3::f;
}

B3 b3_not(B3 a) {
    if (a == B3::x) return B3::x;
    return a == B3::t ? B3::f : B3::t;
}
B3 b3_and(B3 a, B3 b) {
    if (a == B3::f || b == B3::f) return B3::f;
    if (a == B3::x || b == B3::x) return B3::x;
    return B3::t;
}
B3 b3_or(B3 a, B3 b) {
    if (a == B3::t || b == B3::t) return B3::t;
    if (a == B3::x || b == B3::x) return B3::x;
    return B3::t == a && B3::t == b ? B3::t : B3::f;
}

/// Memoizing evaluator: every distinct subexpression's value is computed
/// once per cycle and cached, so sequence matching reads precomputed rows.
class Evaluator {
public:
    Evaluator(const Trace& trace) : trace_(trace) {}

    Value value_of(const Expr* e, size_t t) {
        auto key = std::make_pair(e, t);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Value v = compute(e, t);
        memo_.emplace(key, v);
        return v;
    }

    B3 truth_of(const Expr* e, size_t t) { return to_b3(value_of(e, t)); }

    void check_signals(const Expr* e) {
        if (e->op == ExprOp::signal || e->op == ExprOp::bit_index) {
            if (!trace_.has(e->name)) throw UnknownSignal(e->name);
        }
        if (e->op == ExprOp::past) {
            if (static_cast<size_t>(e->index) >= trace_.length)
                throw DepthExceeded("$past depth " + std::to_string(e->index) +
                                    " on a " + std::to_string(trace_.length) +
                                    "-cycle trace");
        }
        for (auto& a : e->args) check_signals(a.get());
    }

private:
    Value compute(const Expr* e, size_t t) {
        switch (e->op) {
            case ExprOp::literal:
                return e->literal;
            case ExprOp::signal:
                return trace_.column(e->name).at(t);
            case ExprOp::bit_index: {
                Value v = trace_.column(e->name).at(t);
                if (v.is_x) return Value::x();
                return Value::of((v.v >> e->index) & 1);
            }
            case ExprOp::logical_not:
                return from_b3(b3_not(truth_of(e->arg(0), t)));
            case ExprOp::logical_and:
                return from_b3(b3_and(truth_of(e->arg(0), t), truth_of(e->arg(1), t)));
            case ExprOp::logical_or:
                return from_b3(b3_or(truth_of(e->arg(0), t), truth_of(e->arg(1), t)));
            case ExprOp::eq:
            case ExprOp::ne:
            case ExprOp::lt: {
                Value a = value_of(e->arg(0), t);
                Value b = value_of(e->arg(1), t);
                if (a.is_x || b.is_x) return Value::x();
                bool r = e->op == ExprOp::eq   ? a.v == b.v
                         : e->op == ExprOp::ne ? a.v != b.v
                                               : a.v < b.v;
                return Value::of(r ? 1 : 0);
            }
            case ExprOp::past: {
                if (t < static_cast<size_t>(e->index)) return Value::x();
                return value_of(e->arg(0), t - static_cast<size_t>(e->index));
            }
            case ExprOp::stable: {
                if (t == 0) return Value::x();
                Value now = value_of(e->arg(0), t);
                Value prev = value_of(e->arg(0), t - 1);
                if (now.is_x || prev.is_x) return Value::x();
                return Value::of(now.v == prev.v ? 1 : 0);
            }
            case ExprOp::rose:
            case ExprOp::fell: {
                if (t == 0) return Value::x();
                Value now = value_of(e->arg(0), t);
                Value prev = value_of(e->arg(0), t - 1);
                if (now.is_x || prev.is_x) return Value::x();
                uint64_t n = now.v & 1;
                uint64_t p = prev.v & 1;
                bool r = e->op == ExprOp::rose ? (p == 0 && n == 1) : (p == 1 && n == 0);
                return Value::of(r ? 1 : 0);
            }
            case ExprOp::isunknown:
                return Value::of(value_of(e->arg(0), t).is_x ? 1 : 0);
        }
        return Value::x();
    }

    static Value from_b3(B3 b) {
        switch (b) {
            case B3::t: return Value::of(1);
            case B3::f: return Value::of(0);
            case B3::x: return Value::x();
        }
        return Value::x();
    }

    const Trace& trace_;
    std::map<std::pair<const Expr*, size_t>, Value> memo_;
};

/// Definite end cycles of a sequence match starting at `start`.
void match_ends(Evaluator& ev, const Sequence& seq, size_t start, size_t length,
                std::set<size_t>& ends) {
    std::function<void(size_t, size_t)> step = [&](size_t item, size_t at) {
        if (at >= length) return;
        if (ev.truth_of(seq.items[item].get(), at) != B3::t) return;
        if (item + 1 == seq.items.size()) {
            ends.insert(at);
            return;
        }
        auto [lo, hi] = seq.delays[item];
        for (int d = lo; d <= hi; ++d) step(item + 1, at + static_cast<size_t>(d));
    };
    for (int lead = seq.lead_min; lead <= seq.lead_max; ++lead)
        step(0, start + static_cast<size_t>(lead));
}

enum class SeqCheck { matched, out_of_trace, failed };

struct SeqResult {
    SeqCheck kind = SeqCheck::out_of_trace;
    size_t fail_cycle = 0;
};

/// Obligation check for a consequent at `at`: does some delay choice match
/// definitely? Paths leaving the trace are indeterminate; if no path
/// matches and at least one failed in-trace, the earliest such cycle is the
/// failure.
SeqResult check_sequence(Evaluator& ev, const Sequence& seq, size_t at, size_t length) {
    bool any_out = false;
    bool any_fail = false;
    size_t earliest_fail = SIZE_MAX;

    std::function<bool(size_t, size_t)> step = [&](size_t item, size_t pos) -> bool {
        if (pos >= length) {
            any_out = true;
            return false;
        }
        B3 v = ev.truth_of(seq.items[item].get(), pos);
        if (v != B3::t) { // false or X refutes this path here
            any_fail = true;
            earliest_fail = std::min(earliest_fail, pos);
            return false;
        }
        if (item + 1 == seq.items.size()) return true;
        auto [lo, hi] = seq.delays[item];
        bool ok = false;
        for (int d = lo; d <= hi; ++d)
            if (step(item + 1, pos + static_cast<size_t>(d))) ok = true;
        return ok;
    };

    bool matched = false;
    for (int lead = seq.lead_min; lead <= seq.lead_max; ++lead)
        if (step(0, at + static_cast<size_t>(lead))) matched = true;

    if (matched) return {SeqCheck::matched, 0};
    // An un-refuted path running past the trace end leaves the obligation
    // open: bounded semantics drop it rather than fail it.
    if (any_out) return {SeqCheck::out_of_trace, 0};
    if (any_fail) return {SeqCheck::failed, earliest_fail};
    return {SeqCheck::out_of_trace, 0};
}

std::vector<std::pair<std::string, Value>> witness_at(const Trace& trace, size_t cycle) {
    std::vector<std::pair<std::string, Value>> w;
    for (auto& [name, col] : trace.signals) w.emplace_back(name, col.at(cycle));
    return w;
}

} // namespace

VerificationOutcome eval_property(const Trace& trace, const SvaSubsetAst& prop) {
    Evaluator ev(trace);
    for (auto& item : prop.antecedent.items) ev.check_signals(item.get());
    for (auto& item : prop.consequent.items) ev.check_signals(item.get());
    if (prop.disable_iff) ev.check_signals(prop.disable_iff.get());
    if (!prop.clock.empty() && !trace.has(prop.clock)) {
        // The clock column is commonly omitted (one row per tick); accept
        // either form.
    }

    size_t n = trace.length;

    // disabled_from[s]: first cycle >= s where disable-iff is definitely
    // true; an attempt from s must stay strictly below it.
    std::vector<size_t> disable_true;
    if (prop.disable_iff) {
        for (size_t t = 0; t < n; ++t)
            if (ev.truth_of(prop.disable_iff.get(), t) == B3::t) disable_true.push_back(t);
    }
    auto aborted = [&](size_t start, size_t upto) {
        for (size_t d : disable_true)
            if (d >= start && d <= upto) return true;
        return false;
    };

    bool antecedent_seen = false;
    std::optional<size_t> earliest_fail;

    for (size_t s = 0; s < n; ++s) {
        std::set<size_t> ends;
        if (prop.has_implication) {
            match_ends(ev, prop.antecedent, s, n, ends);
        } else {
            // A bare property is an obligation at every cycle.
            ends.insert(s);
        }
        for (size_t m : ends) {
            if (aborted(s, m)) continue;
            if (prop.has_implication) antecedent_seen = true;

            size_t at = prop.has_implication && !prop.overlapping ? m + 1 : m;
            const Sequence& obligation =
                prop.has_implication ? prop.consequent : prop.antecedent;
            if (at >= n) continue; // completion past trace end
            SeqResult r = check_sequence(ev, obligation, at, n);
            if (r.kind == SeqCheck::failed) {
                if (!aborted(s, r.fail_cycle)) {
                    if (!earliest_fail || r.fail_cycle < *earliest_fail)
                        earliest_fail = r.fail_cycle;
                }
            }
        }
        if (!prop.has_implication) {
            // bare property: count the attempt as an evaluated obligation
            antecedent_seen = antecedent_seen || !aborted(s, s);
        }
    }

    VerificationOutcome out;
    if (earliest_fail) {
        out.verdict = Verdict::fails;
        out.fail_cycle = earliest_fail;
        out.witness = witness_at(trace, *earliest_fail);
    } else if (!antecedent_seen) {
        out.verdict = Verdict::vacuous;
    } else {
        out.verdict = Verdict::holds;
    }
    return out;
}

std::vector<size_t> eval_cover(const Trace& trace, const std::string& cover_expr) {
    SvaParser parser(cover_expr);
    Sequence seq = parser.parse_sequence_all();
    Evaluator ev(trace);
    for (auto& item : seq.items) ev.check_signals(item.get());

    std::set<size_t> cycles;
    for (size_t s = 0; s < trace.length; ++s) {
        std::set<size_t> ends;
        match_ends(ev, seq, s, trace.length, ends);
        cycles.insert(ends.begin(), ends.end());
    }
    return std::vector<size_t>(cycles.begin(), cycles.end());
}

} // namespace minicheck
} // namespace atlas
