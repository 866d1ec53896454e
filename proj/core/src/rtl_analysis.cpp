//
// atlas — analyses over the parsed RTL: symbol table, FSM candidates,
// driver relations, structural digest
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include <algorithm>
#include <cstring>
#include <functional>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/rtl_frontend.hpp"
#include "atlas/strings.hpp"
#include "rtl_detail.hpp"

namespace atlas {
namespace rtl {
namespace detail {

bool is_identifier_leaf(const AstNode& node) {
    if (node.kind != NodeKind::Expr || node.children.empty() == false) return false;
    if (node.label.empty()) return false;
    char c = node.label[0];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_literal_leaf(const AstNode& node) {
    if (node.kind != NodeKind::Expr || !node.children.empty()) return false;
    if (node.label.empty()) return false;
    char c = node.label[0];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '\'';
}

namespace {

int binary_prec(const std::string& op) {
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

int node_prec(const AstNode& e) {
    if (e.children.empty()) return 100;
    if (!e.label.empty() && e.label[0] == 'u' && e.label.size() <= 2) return 11;
    if (e.label == "?:") return 0;
    int p = binary_prec(e.label);
    return p < 0 ? 100 : p;
}

std::string render_with_parens(const AstNode& child, int parent_prec) {
    std::string s = render_expr(child);
    if (node_prec(child) < parent_prec) return "(" + s + ")";
    return s;
}

} // namespace

std::string render_expr(const AstNode& e) {
    if (e.children.empty()) return e.label;
    if (!e.label.empty() && e.label[0] == '$') {
        std::vector<std::string> args;
        for (auto& a : e.children) args.push_back(render_expr(a));
        return e.label + "(" + join(args, ", ") + ")";
    }
    if (e.label.size() >= 2 && e.label[0] == 'u' && e.children.size() == 1)
        return e.label.substr(1) + render_with_parens(e.children[0], 11);
    if (e.label == "?:")
        return render_with_parens(e.children[0], 1) + " ? " + render_expr(e.children[1]) +
               " : " + render_expr(e.children[2]);
    if (e.label == "index")
        return render_expr(e.children[0]) + "[" + render_expr(e.children[1]) + "]";
    if (e.label == "range_sel")
        return render_expr(e.children[0]) + "[" + render_expr(e.children[1]) + ":" +
               render_expr(e.children[2]) + "]";
    if (e.label == "concat") {
        std::vector<std::string> parts;
        for (auto& c : e.children) parts.push_back(render_expr(c));
        return "{" + join(parts, ", ") + "}";
    }
    if (e.label == "repl")
        return "{" + render_expr(e.children[0]) + "{" + render_expr(e.children[1]) + "}}";
    int p = binary_prec(e.label);
    if (p >= 0 && e.children.size() == 2)
        return render_with_parens(e.children[0], p) + " " + e.label + " " +
               render_with_parens(e.children[1], p + 1);
    return e.label;
}

void collect_expr_identifiers(const AstNode& e, std::set<std::string>& out) {
    if (is_identifier_leaf(e)) {
        out.insert(e.label);
        return;
    }
    for (auto& c : e.children) collect_expr_identifiers(c, out);
}

std::optional<LiteralValue> parse_literal(const std::string& text) {
    if (text.empty()) return std::nullopt;
    LiteralValue out;
    size_t apos = text.find('\'');
    if (apos == std::string::npos) {
        for (char c : text)
            if (!std::isdigit(static_cast<unsigned char>(c)) && c != '_') return std::nullopt;
        std::string digits;
        for (char c : text)
            if (c != '_') digits += c;
        out.value = std::stoull(digits);
        return out;
    }
    std::string size_part = text.substr(0, apos);
    out.width = size_part.empty() ? 0 : std::stoi(size_part);
    size_t i = apos + 1;
    if (i < text.size() && (text[i] == 's' || text[i] == 'S')) ++i;
    if (i >= text.size()) return std::nullopt;
    char base = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
    if (base == 'x' || base == 'z') { // 'x / 'z shorthand
        out.is_x = true;
        return out;
    }
    int radix;
    switch (base) {
        case 'b': radix = 2; break;
        case 'o': radix = 8; break;
        case 'd': radix = 10; break;
        case 'h': radix = 16; break;
        default: return std::nullopt;
    }
    ++i;
    uint64_t v = 0;
    bool any = false;
    for (; i < text.size(); ++i) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
        if (c == '_') continue;
        if (c == 'x' || c == 'z' || c == '?') {
            out.is_x = true;
            any = true;
            continue;
        }
        int d;
        if (c >= '0' && c <= '9')
            d = c - '0';
        else if (c >= 'a' && c <= 'f')
            d = 10 + (c - 'a');
        else
            return std::nullopt;
        if (d >= radix) return std::nullopt;
        v = v * radix + static_cast<uint64_t>(d);
        any = true;
    }
    if (!any) return std::nullopt;
    out.value = out.is_x ? 0 : v;
    return out;
}

std::optional<uint64_t> const_eval(const AstNode& e,
                                   const std::map<std::string, uint64_t>& params) {
    if (is_literal_leaf(e)) {
        auto lit = parse_literal(e.label);
        if (!lit || lit->is_x) return std::nullopt;
        return lit->value;
    }
    if (is_identifier_leaf(e)) {
        auto it = params.find(e.label);
        if (it == params.end()) return std::nullopt;
        return it->second;
    }
    if (e.children.size() == 2) {
        auto a = const_eval(e.children[0], params);
        auto b = const_eval(e.children[1], params);
        if (!a || !b) return std::nullopt;
        if (e.label == "+") return *a + *b;
        if (e.label == "-") return *a - *b;
        if (e.label == "*") return *a * *b;
        if (e.label == "/") return *b ? std::optional<uint64_t>(*a / *b) : std::nullopt;
        if (e.label == "<<") return *a << *b;
        if (e.label == ">>") return *a >> *b;
    }
    return std::nullopt;
}

std::map<std::string, uint64_t> param_env(const AstNode& module_node) {
    std::map<std::string, uint64_t> env;
    for (auto& c : module_node.children) {
        if (c.kind == NodeKind::Param || c.kind == NodeKind::LocalParam) {
            if (auto v = const_eval(c.children[0], env)) env[c.label] = *v;
        }
    }
    return env;
}

bool is_reset_name(const std::string& name) {
    for (auto& tok : split(to_lower(name), '_'))
        if (tok == "rst" || tok == "reset" || tok == "rstn" || tok == "resetn")
            return true;
    return false;
}

std::optional<ResetInfo> detect_reset(const AstNode& always_block) {
    for (auto& [edge, sig] : always_block.sensitivity) {
        if (!edge.empty() && is_reset_name(sig)) {
            ResetInfo info;
            info.signal = sig;
            info.level = edge == "negedge" ? ResetLevel::active_low : ResetLevel::active_high;
            // The guarding polarity is authoritative when present:
            // `if (!rst_n)` means active low, `if (rst)` active high.
            for (auto& stmt : always_block.children) {
                if (stmt.kind != NodeKind::IfStmt) continue;
                const AstNode& cond = stmt.children[0];
                std::set<std::string> ids;
                collect_expr_identifiers(cond, ids);
                if (ids == std::set<std::string>{sig}) {
                    bool negated = cond.label == "u!" || cond.label == "u~";
                    info.level = negated ? ResetLevel::active_low : ResetLevel::active_high;
                    break;
                }
            }
            return info;
        }
    }
    return std::nullopt;
}

std::string detect_clock(const AstNode& always_block) {
    std::string first;
    for (auto& [edge, sig] : always_block.sensitivity) {
        if (edge.empty() || is_reset_name(sig)) continue;
        if (to_lower(sig) == "clk" || to_lower(sig) == "clock") return sig;
        if (first.empty()) first = sig;
    }
    return first;
}

bool is_reset_guard(const AstNode& cond, const std::string& reset_signal) {
    if (reset_signal.empty()) return false;
    std::set<std::string> ids;
    collect_expr_identifiers(cond, ids);
    return ids == std::set<std::string>{reset_signal};
}

} // namespace detail

using detail::collect_expr_identifiers;
using detail::const_eval;
using detail::render_expr;

namespace {

std::string span_str(const Span& s) {
    return std::to_string(s.begin.line) + ":" + std::to_string(s.begin.col);
}

/// Walks statements of one always block, tracking enclosing guard
/// expressions (reset guards excluded) and invoking fn on each assignment.
/// Guard entries carry rendered text; else-branches get the negated text.
struct GuardWalker {
    std::string reset_signal;
    std::function<void(const AstNode& assign, const std::vector<std::string>& guards,
                       const std::vector<const AstNode*>& guard_exprs)>
        on_assign;

    void walk(const AstNode& stmt, std::vector<std::string>& guards,
              std::vector<const AstNode*>& guard_exprs) {
        switch (stmt.kind) {
            case NodeKind::Assign:
                on_assign(stmt, guards, guard_exprs);
                break;
            case NodeKind::Block:
                for (auto& s : stmt.children) walk(s, guards, guard_exprs);
                break;
            case NodeKind::IfStmt: {
                const AstNode& cond = stmt.children[0];
                bool skip = detail::is_reset_guard(cond, reset_signal);
                if (stmt.children.size() > 1) {
                    if (!skip) {
                        guards.push_back(render_expr(cond));
                        guard_exprs.push_back(&cond);
                    }
                    walk(stmt.children[1], guards, guard_exprs);
                    if (!skip) {
                        guards.pop_back();
                        guard_exprs.pop_back();
                    }
                }
                if (stmt.children.size() > 2) {
                    if (!skip) {
                        std::string neg = render_expr(cond);
                        if (cond.children.size() == 2 || cond.label == "?:")
                            neg = "!(" + neg + ")";
                        else if (cond.label == "u!")
                            neg = render_expr(cond.children[0]);
                        else
                            neg = "!" + neg;
                        guards.push_back(neg);
                        guard_exprs.push_back(&cond);
                    }
                    walk(stmt.children[2], guards, guard_exprs);
                    if (!skip) {
                        guards.pop_back();
                        guard_exprs.pop_back();
                    }
                }
                break;
            }
            case NodeKind::CaseStmt: {
                const AstNode& subject = stmt.children[0];
                std::string subj_text = render_expr(subject);
                for (size_t i = 1; i < stmt.children.size(); ++i) {
                    const AstNode& item = stmt.children[i];
                    std::vector<std::string> labels;
                    for (auto& c : item.children)
                        if (c.kind == NodeKind::Expr) labels.push_back(render_expr(c));
                    std::string guard_text;
                    if (item.label == "default")
                        guard_text = subj_text + " == default";
                    else if (labels.size() == 1)
                        guard_text = subj_text + " == " + labels[0];
                    else
                        guard_text = subj_text + " in {" + join(labels, ", ") + "}";
                    guards.push_back(guard_text);
                    guard_exprs.push_back(&subject);
                    for (auto& c : item.children)
                        if (c.kind != NodeKind::Expr) walk(c, guards, guard_exprs);
                    guards.pop_back();
                    guard_exprs.pop_back();
                }
                break;
            }
            default:
                break;
        }
    }

    void run(const AstNode& always_block) {
        std::vector<std::string> guards;
        std::vector<const AstNode*> guard_exprs;
        for (auto& s : always_block.children) walk(s, guards, guard_exprs);
    }
};

const AstNode* lhs_base(const AstNode& lhs) {
    const AstNode* n = &lhs;
    while (!n->children.empty() &&
           (n->label == "index" || n->label == "range_sel"))
        n = &n->children[0];
    return detail::is_identifier_leaf(*n) ? n : nullptr;
}

bool signal_assigned_in_always(const AstNode& mod, const std::string& name) {
    bool found = false;
    for (auto& item : mod.children) {
        if (item.kind != NodeKind::AlwaysBlock) continue;
        GuardWalker w;
        w.on_assign = [&](const AstNode& a, auto&, auto&) {
            if (const AstNode* base = lhs_base(a.children[0]))
                if (base->label == name) found = true;
        };
        w.run(item);
    }
    return found;
}

} // namespace

std::vector<SignalDecl> symbol_table(const Ast& ast) {
    const AstNode& mod = ast.root;
    std::vector<SignalDecl> out;
    std::map<std::string, Span> seen;

    auto add = [&](SignalDecl decl) {
        auto it = seen.find(decl.name);
        if (it != seen.end())
            throw DuplicateDecl(decl.name,
                                span_str(it->second) + " and " + span_str(decl.span));
        seen.emplace(decl.name, decl.span);
        out.push_back(std::move(decl));
    };

    for (auto& c : mod.children) {
        SignalDecl d;
        d.span = c.span;
        switch (c.kind) {
            case NodeKind::Port: {
                d.name = c.label;
                d.width = c.width;
                if (c.direction == "input")
                    d.direction = Direction::input;
                else if (c.direction == "output")
                    d.direction = Direction::output;
                else
                    d.direction = Direction::inout;
                bool reggy = (c.net_type == "logic" || c.net_type == "reg" ||
                              c.net_type == "bit") &&
                             signal_assigned_in_always(mod, c.label);
                d.storage = reggy ? Storage::reg : Storage::net;
                add(std::move(d));
                break;
            }
            case NodeKind::NetDecl:
                d.name = c.label;
                d.width = c.width;
                d.direction = Direction::internal;
                d.storage = Storage::net;
                add(std::move(d));
                break;
            case NodeKind::RegDecl: {
                d.name = c.label;
                d.width = c.width;
                d.direction = Direction::internal;
                d.storage = signal_assigned_in_always(mod, c.label) ? Storage::reg
                                                                    : Storage::net;
                add(std::move(d));
                break;
            }
            case NodeKind::Param:
            case NodeKind::LocalParam:
                d.name = c.label;
                d.width = c.width;
                d.direction = Direction::internal;
                d.storage = Storage::parameter;
                add(std::move(d));
                break;
            default:
                break;
        }
    }

    // Reset values: constants assigned under the reset branch of an
    // edge-triggered always block.
    auto env = detail::param_env(mod);
    for (auto& item : mod.children) {
        if (item.kind != NodeKind::AlwaysBlock) continue;
        auto reset = detail::detect_reset(item);
        if (!reset) continue;
        for (auto& stmt : item.children) {
            if (stmt.kind != NodeKind::IfStmt) continue;
            if (!detail::is_reset_guard(stmt.children[0], reset->signal)) continue;
            // The branch taken while reset is active: negated condition means
            // the then-branch fires at reset-low (active low) and vice versa.
            const AstNode* reset_branch = stmt.children.size() > 1 ? &stmt.children[1] : nullptr;
            if (!reset_branch) continue;
            std::function<void(const AstNode&)> scan = [&](const AstNode& s) {
                if (s.kind == NodeKind::Assign) {
                    const AstNode* base = lhs_base(s.children[0]);
                    if (!base) return;
                    if (auto v = const_eval(s.children[1], env)) {
                        for (auto& decl : out)
                            if (decl.name == base->label && !decl.reset_value)
                                decl.reset_value = *v;
                    }
                } else if (s.kind == NodeKind::Block) {
                    for (auto& c : s.children) scan(c);
                }
            };
            scan(*reset_branch);
        }
    }
    return out;
}

std::vector<std::string> FsmCandidate::armless_states() const {
    std::vector<std::string> out;
    for (auto& [name, value] : state_consts) {
        bool has_exit = false;
        for (auto& t : transitions)
            if (t.from_const == name && t.to_const != name) has_exit = true;
        if (!has_exit) out.push_back(name);
    }
    return out;
}

std::vector<FsmCandidate> extract_fsms(const Ast& ast) {
    const AstNode& mod = ast.root;
    std::vector<FsmCandidate> out;
    auto env = detail::param_env(mod);

    // Value -> declared constant name (first declaration wins).
    std::map<uint64_t, std::string> const_names;
    std::vector<std::pair<std::string, uint64_t>> declared_consts;
    for (auto& c : mod.children) {
        if (c.kind == NodeKind::Param || c.kind == NodeKind::LocalParam) {
            if (auto v = const_eval(c.children[0], env)) {
                declared_consts.emplace_back(c.label, *v);
                const_names.emplace(*v, c.label);
            }
        }
    }

    std::set<std::string> registered;
    try {
        for (auto& d : symbol_table(ast))
            if (d.storage == Storage::reg) registered.insert(d.name);
    } catch (const DuplicateDecl&) {
        // Partial sources may double-declare; FSM extraction proceeds on
        // what is unambiguous.
    }

    for (auto& item : mod.children) {
        if (item.kind != NodeKind::AlwaysBlock) continue;
        auto reset = detail::detect_reset(item);
        std::string reset_name = reset ? reset->signal : "";

        std::function<void(const AstNode&)> find_cases = [&](const AstNode& stmt) {
            if (stmt.kind == NodeKind::CaseStmt) {
                const AstNode& subject = stmt.children[0];
                if (detail::is_identifier_leaf(subject) &&
                    registered.count(subject.label)) {
                    FsmCandidate cand;
                    cand.state_signal = subject.label;
                    cand.clock = detail::detect_clock(item);
                    if (reset)
                        cand.reset = std::make_pair(reset->signal, reset->level);
                    cand.has_default_arm = stmt.has_default;

                    bool all_const = true;
                    std::set<std::string> const_seen;
                    auto resolve_const =
                        [&](const AstNode& e) -> std::optional<std::pair<std::string, uint64_t>> {
                        if (detail::is_identifier_leaf(e)) {
                            auto it = env.find(e.label);
                            if (it == env.end()) return std::nullopt;
                            return std::make_pair(e.label, it->second);
                        }
                        if (auto v = const_eval(e, env)) {
                            auto nit = const_names.find(*v);
                            std::string name =
                                nit != const_names.end() ? nit->second : render_expr(e);
                            return std::make_pair(name, *v);
                        }
                        return std::nullopt;
                    };
                    auto note_const = [&](const std::pair<std::string, uint64_t>& c) {
                        if (const_seen.insert(c.first).second)
                            cand.state_consts.push_back(c);
                    };

                    for (size_t i = 1; i < stmt.children.size(); ++i) {
                        const AstNode& arm = stmt.children[i];
                        bool is_default = arm.label == "default";
                        std::vector<std::pair<std::string, uint64_t>> froms;
                        if (!is_default) {
                            for (auto& c : arm.children) {
                                if (c.kind != NodeKind::Expr) continue;
                                auto fc = resolve_const(c);
                                if (!fc) {
                                    all_const = false;
                                    continue;
                                }
                                note_const(*fc);
                                froms.push_back(*fc);
                            }
                        }
                        // Assignments to the state signal inside the arm.
                        GuardWalker w;
                        w.reset_signal = reset_name;
                        w.on_assign = [&](const AstNode& a,
                                          const std::vector<std::string>& guards, auto&) {
                            const AstNode* base = lhs_base(a.children[0]);
                            if (!base || base->label != cand.state_signal) return;
                            auto tc = resolve_const(a.children[1]);
                            if (!tc) {
                                all_const = false;
                                return;
                            }
                            note_const(*tc);
                            if (is_default) return; // default arm is not a transition
                            // Drop the case-subject guard the walker adds for
                            // the arm itself; keep inner if guards.
                            std::vector<std::string> inner(
                                guards.begin() + (guards.empty() ? 0 : 1), guards.end());
                            std::string guard = join(inner, " && ");
                            for (auto& from : froms) {
                                FsmTransition t{from.first, tc->first, guard};
                                if (std::find(cand.transitions.begin(),
                                              cand.transitions.end(),
                                              t) == cand.transitions.end())
                                    cand.transitions.push_back(t);
                            }
                        };
                        std::vector<std::string> guards;
                        std::vector<const AstNode*> guard_exprs;
                        // Seed with the arm guard so inner guards nest right;
                        // stripped again in on_assign.
                        guards.push_back("arm");
                        guard_exprs.push_back(&subject);
                        for (auto& c : arm.children)
                            if (c.kind != NodeKind::Expr) w.walk(c, guards, guard_exprs);
                    }

                    // Order state consts by declaration where possible.
                    std::stable_sort(cand.state_consts.begin(), cand.state_consts.end(),
                                     [&](auto& a, auto& b) {
                                         auto pos = [&](const std::string& n) {
                                             for (size_t i = 0; i < declared_consts.size(); ++i)
                                                 if (declared_consts[i].first == n)
                                                     return i;
                                             return declared_consts.size();
                                         };
                                         return pos(a.first) < pos(b.first);
                                     });

                    if (all_const && !cand.state_consts.empty())
                        out.push_back(std::move(cand));
                }
            }
            for (auto& c : stmt.children)
                if (c.kind != NodeKind::Expr) find_cases(c);
        };
        for (auto& s : item.children) find_cases(s);
    }
    return out;
}

std::set<DriverSite> drivers_of(const Ast& ast, const std::string& signal) {
    const AstNode& mod = ast.root;
    bool known = false;
    for (auto& d : symbol_table(ast))
        if (d.name == signal) known = true;
    if (!known) throw UnknownSignal(signal);

    std::set<DriverSite> out;
    auto note_expr = [&](const AstNode& e, const Span& site) {
        std::set<std::string> ids;
        collect_expr_identifiers(e, ids);
        for (auto& id : ids) out.insert(DriverSite{id, site});
    };

    for (auto& item : mod.children) {
        if (item.kind == NodeKind::Assign && item.continuous) {
            const AstNode* base = lhs_base(item.children[0]);
            if (base && base->label == signal) note_expr(item.children[1], item.span);
            continue;
        }
        if (item.kind != NodeKind::AlwaysBlock) continue;
        auto reset = detail::detect_reset(item);
        GuardWalker w;
        w.reset_signal = reset ? reset->signal : "";
        w.on_assign = [&](const AstNode& a, const std::vector<std::string>&,
                          const std::vector<const AstNode*>& guard_exprs) {
            const AstNode* base = lhs_base(a.children[0]);
            if (!base || base->label != signal) return;
            note_expr(a.children[1], a.span);
            for (const AstNode* g : guard_exprs) note_expr(*g, a.span);
        };
        w.run(item);
    }
    return out;
}

bool AstDigest::operator==(const AstDigest& other) const {
    auto ports_eq = [&] {
        if (ports.size() != other.ports.size()) return false;
        for (size_t i = 0; i < ports.size(); ++i)
            if (ports[i].name != other.ports[i].name ||
                ports[i].direction != other.ports[i].direction ||
                ports[i].width != other.ports[i].width)
                return false;
        return true;
    };
    auto fsms_eq = [&] {
        if (fsms.size() != other.fsms.size()) return false;
        for (size_t i = 0; i < fsms.size(); ++i) {
            const FsmSummary& a = fsms[i];
            const FsmSummary& b = other.fsms[i];
            if (a.state_signal != b.state_signal || a.state_names != b.state_names ||
                a.state_values != b.state_values ||
                a.transition_count != b.transition_count ||
                a.has_default_arm != b.has_default_arm ||
                a.armless_states != b.armless_states)
                return false;
        }
        return true;
    };
    auto assigns_eq = [&] {
        if (assignments.size() != other.assignments.size()) return false;
        for (auto& [k, v] : assignments) {
            auto it = other.assignments.find(k);
            if (it == other.assignments.end() || it->second.size() != v.size()) return false;
            for (size_t i = 0; i < v.size(); ++i)
                if (v[i].lhs != it->second[i].lhs || v[i].rhs != it->second[i].rhs ||
                    v[i].guard != it->second[i].guard ||
                    v[i].self_referential != it->second[i].self_referential)
                    return false;
        }
        return true;
    };
    return module_name == other.module_name && ports_eq() && reg_count == other.reg_count &&
           net_count == other.net_count && always_count == other.always_count &&
           case_count == other.case_count && clocking.clock == other.clocking.clock &&
           clocking.reset == other.clocking.reset &&
           clocking.reset_active_low == other.clocking.reset_active_low &&
           clocking.edge == other.clocking.edge && fsms_eq() && drivers == other.drivers &&
           fanout == other.fanout && assigns_eq() && widths == other.widths &&
           registers == other.registers && reset_values == other.reset_values &&
           sticky_flags == other.sticky_flags;
}

AstDigest ast_digest(const Ast& ast, const std::set<std::string>& watch) {
    const AstNode& mod = ast.root;
    AstDigest digest;
    digest.module_name = mod.label;

    auto symbols = symbol_table(ast);
    std::set<std::string> names;
    for (auto& s : symbols) {
        names.insert(s.name);
        digest.widths[s.name] = s.width;
        if (s.storage == Storage::reg) digest.registers.insert(s.name);
        if (s.reset_value) digest.reset_values[s.name] = *s.reset_value;
    }
    for (auto& w : watch)
        if (!names.count(w)) throw UnknownSignal(w);

    for (auto& c : mod.children) {
        switch (c.kind) {
            case NodeKind::Port:
                digest.ports.push_back(PortSummary{c.label, c.direction, c.width});
                break;
            case NodeKind::RegDecl:
                ++digest.reg_count;
                break;
            case NodeKind::NetDecl:
                ++digest.net_count;
                break;
            case NodeKind::AlwaysBlock: {
                ++digest.always_count;
                std::function<size_t(const AstNode&)> count_cases =
                    [&](const AstNode& n) -> size_t {
                    size_t k = n.kind == NodeKind::CaseStmt ? 1 : 0;
                    for (auto& ch : n.children)
                        if (ch.kind != NodeKind::Expr) k += count_cases(ch);
                    return k;
                };
                digest.case_count += count_cases(c);
                if (digest.clocking.clock.empty()) {
                    digest.clocking.clock = detail::detect_clock(c);
                    if (auto r = detail::detect_reset(c)) {
                        digest.clocking.reset = r->signal;
                        digest.clocking.reset_active_low =
                            r->level == ResetLevel::active_low;
                    }
                    for (auto& [edge, sig] : c.sensitivity)
                        if (!edge.empty() && !detail::is_reset_name(sig))
                            digest.clocking.edge = edge;
                }
                break;
            }
            default:
                break;
        }
    }

    for (auto& fsm : extract_fsms(ast)) {
        FsmSummary s;
        s.state_signal = fsm.state_signal;
        for (auto& [name, value] : fsm.state_consts) {
            s.state_names.push_back(name);
            s.state_values.push_back(value);
        }
        s.transition_count = fsm.transitions.size();
        s.has_default_arm = fsm.has_default_arm;
        s.armless_states = fsm.armless_states();
        digest.fsms.push_back(std::move(s));
    }

    // Assignment facts + sticky flags for every registered signal; the
    // driver/fanout maps are restricted to the watch set.
    std::map<std::string, std::vector<AssignmentFact>> all_facts;
    for (auto& item : mod.children) {
        auto scan_assign = [&](const AstNode& a, const std::vector<std::string>& guards) {
            const AstNode* base = lhs_base(a.children[0]);
            if (!base) return;
            AssignmentFact fact;
            fact.lhs = base->label;
            fact.rhs = render_expr(a.children[1]);
            fact.guard = join(guards, " && ");
            std::set<std::string> rhs_ids;
            collect_expr_identifiers(a.children[1], rhs_ids);
            fact.self_referential = rhs_ids.count(base->label) != 0;
            all_facts[base->label].push_back(std::move(fact));
        };
        if (item.kind == NodeKind::Assign && item.continuous) {
            scan_assign(item, {});
        } else if (item.kind == NodeKind::AlwaysBlock) {
            auto reset = detail::detect_reset(item);
            GuardWalker w;
            w.reset_signal = reset ? reset->signal : "";
            w.on_assign = [&](const AstNode& a, const std::vector<std::string>& guards,
                              auto&) { scan_assign(a, guards); };
            w.run(item);
        }
    }
    for (auto& [name, facts] : all_facts) {
        int width = digest.widths.count(name) ? digest.widths[name] : 1;
        bool is_reg = false;
        for (auto& s : symbols)
            if (s.name == name && s.storage == Storage::reg) is_reg = true;
        if (!is_reg || width != 1) continue;
        for (auto& f : facts)
            if (f.self_referential &&
                std::find(digest.sticky_flags.begin(), digest.sticky_flags.end(), name) ==
                    digest.sticky_flags.end())
                digest.sticky_flags.push_back(name);
    }
    std::sort(digest.sticky_flags.begin(), digest.sticky_flags.end());

    for (auto& w : watch) {
        std::vector<std::string> drv;
        for (auto& site : drivers_of(ast, w)) {
            if (std::find(drv.begin(), drv.end(), site.driver) == drv.end())
                drv.push_back(site.driver);
        }
        std::sort(drv.begin(), drv.end());
        digest.drivers[w] = drv;
        if (all_facts.count(w)) digest.assignments[w] = all_facts[w];

        // Fanout: signals whose driver set includes w.
        std::vector<std::string> fan;
        for (auto& s : symbols) {
            if (s.name == w || s.storage == Storage::parameter) continue;
            for (auto& site : drivers_of(ast, s.name)) {
                if (site.driver == w) {
                    fan.push_back(s.name);
                    break;
                }
            }
        }
        std::sort(fan.begin(), fan.end());
        digest.fanout[w] = fan;
    }
    return digest;
}

} // namespace rtl
} // namespace atlas
