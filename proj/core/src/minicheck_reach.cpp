//
// atlas — bounded FSM reachability over (state x free-input assignment)
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include <algorithm>
#include <functional>
#include <map>

#include "atlas/errors.hpp"
#include "atlas/minicheck.hpp"
#include "atlas/strings.hpp"

namespace atlas {
namespace minicheck {

namespace {

enum class G3 { f, t, x };

G3 eval_guard(const Expr* e, const std::map<std::string, uint64_t>& env) {
    auto value = [&](const Expr* n, auto&& rec) -> std::pair<bool, uint64_t> {
        // returns (known, value)
        switch (n->op) {
            case ExprOp::literal:
                return {!n->literal.is_x, n->literal.v};
            case ExprOp::signal: {
                auto it = env.find(n->name);
                if (it == env.end()) throw GuardUnsupported(n->name);
                return {true, it->second};
            }
            case ExprOp::bit_index: {
                auto it = env.find(n->name);
                if (it == env.end()) throw GuardUnsupported(n->name);
                return {true, (it->second >> n->index) & 1};
            }
            case ExprOp::eq:
            case ExprOp::ne:
            case ExprOp::lt: {
                auto a = rec(n->arg(0), rec);
                auto b = rec(n->arg(1), rec);
                if (!a.first || !b.first) return {false, 0};
                bool r = n->op == ExprOp::eq   ? a.second == b.second
                         : n->op == ExprOp::ne ? a.second != b.second
                                               : a.second < b.second;
                return {true, r ? uint64_t{1} : uint64_t{0}};
            }
            case ExprOp::logical_not: {
                auto a = rec(n->arg(0), rec);
                if (!a.first) return {false, 0};
                return {true, a.second == 0 ? uint64_t{1} : uint64_t{0}};
            }
            case ExprOp::logical_and: {
                auto a = rec(n->arg(0), rec);
                auto b = rec(n->arg(1), rec);
                if (a.first && a.second == 0) return {true, 0};
                if (b.first && b.second == 0) return {true, 0};
                if (!a.first || !b.first) return {false, 0};
                return {true, 1};
            }
            case ExprOp::logical_or: {
                auto a = rec(n->arg(0), rec);
                auto b = rec(n->arg(1), rec);
                if (a.first && a.second != 0) return {true, 1};
                if (b.first && b.second != 0) return {true, 1};
                if (!a.first || !b.first) return {false, 0};
                return {true, 0};
            }
            default:
                throw GuardUnsupported("operator outside guard subset");
        }
    };
    auto [known, v] = value(e, value);
    if (!known) return G3::x;
    return v != 0 ? G3::t : G3::f;
}

} // namespace

ReachResult bounded_reach(const rtl::FsmCandidate& fsm,
                          const std::vector<std::string>& free_inputs, int depth) {
    if (free_inputs.size() > 8)
        throw ConfigError("bounded_reach: at most 8 free inputs");
    if (depth < 0 || depth > 16) throw ConfigError("bounded_reach: depth must be 0..16");
    if (fsm.state_consts.empty()) throw ConfigError("bounded_reach: FSM has no states");

    // Pre-parse guards and verify they stay within state + free inputs.
    struct Arc {
        std::string from;
        std::string to;
        std::unique_ptr<Expr> guard; // null = unconditional
    };
    std::vector<Arc> arcs;
    std::set<std::string> allowed(free_inputs.begin(), free_inputs.end());
    for (auto& t : fsm.transitions) {
        Arc arc;
        arc.from = t.from_const;
        arc.to = t.to_const;
        if (!trim(t.guard).empty()) {
            for (auto& id : collect_identifiers(t.guard))
                if (!allowed.count(id)) throw GuardUnsupported(t.guard);
            arc.guard = parse_bool_expr(t.guard);
        }
        arcs.push_back(std::move(arc));
    }

    const size_t n_inputs = free_inputs.size();
    const uint64_t n_assign = uint64_t{1} << n_inputs;

    ReachResult result;
    // The first declared constant is the take-off state (reset target by
    // declaration convention).
    std::string initial = fsm.state_consts.front().first;
    result.reachable.insert(initial);
    result.witnesses[initial] = {};

    std::set<std::string> frontier = {initial};

    for (int level = 1; level <= depth && !frontier.empty(); ++level) {
        std::set<std::string> next_frontier;
        for (auto& state : frontier) {
            for (uint64_t a = 0; a < n_assign; ++a) {
                std::map<std::string, uint64_t> env;
                for (size_t i = 0; i < n_inputs; ++i)
                    env[free_inputs[i]] = (a >> i) & 1;

                bool fired = false;
                for (auto& arc : arcs) {
                    if (arc.from != state) continue;
                    G3 g = arc.guard ? eval_guard(arc.guard.get(), env) : G3::t;
                    if (g != G3::t) continue;
                    fired = true;
                    if (!result.reachable.count(arc.to)) {
                        result.reachable.insert(arc.to);
                        auto w = result.witnesses[state];
                        w.push_back(a);
                        result.witnesses[arc.to] = std::move(w);
                        next_frontier.insert(arc.to);
                    }
                }
                (void)fired; // no firing arc means the register holds
            }
        }
        frontier = std::move(next_frontier);
    }

    // States discovered on the last level never had their successors
    // expanded: the reachable set may be incomplete.
    result.budget_exhausted = !frontier.empty();
    return result;
}

} // namespace minicheck
} // namespace atlas
