//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "oracles/naive_sva.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "atlas/errors.hpp"
#include "atlas/strings.hpp"

namespace oracle {

using namespace atlas;
using namespace atlas::minicheck;

namespace {

// Plain recursive evaluation, one call per (expr, cycle), no caching.
// Truth is -1 unknown, 0 false, 1 true; terms carry a (known, value) pair.

struct TermVal {
    bool known = false;
    uint64_t v = 0;
};

TermVal term(const Expr* e, const Trace& tr, long t);

int truth(const Expr* e, const Trace& tr, long t) {
    switch (e->op) {
        case ExprOp::logical_not: {
            int a = truth(e->arg(0), tr, t);
            if (a < 0) return -1;
            return a ? 0 : 1;
        }
        case ExprOp::logical_and: {
            int a = truth(e->arg(0), tr, t);
            int b = truth(e->arg(1), tr, t);
            if (a == 0 || b == 0) return 0;
            if (a < 0 || b < 0) return -1;
            return 1;
        }
        case ExprOp::logical_or: {
            int a = truth(e->arg(0), tr, t);
            int b = truth(e->arg(1), tr, t);
            if (a == 1 || b == 1) return 1;
            if (a < 0 || b < 0) return -1;
            return 0;
        }
        default: {
            TermVal v = term(e, tr, t);
            if (!v.known) return -1;
            return v.v != 0 ? 1 : 0;
        }
    }
}

TermVal term(const Expr* e, const Trace& tr, long t) {
    switch (e->op) {
        case ExprOp::literal:
            return {!e->literal.is_x, e->literal.v};
        case ExprOp::signal: {
            const Value& v = tr.column(e->name).at(static_cast<size_t>(t));
            return {!v.is_x, v.v};
        }
        case ExprOp::bit_index: {
            const Value& v = tr.column(e->name).at(static_cast<size_t>(t));
            if (v.is_x) return {false, 0};
            return {true, (v.v >> e->index) & 1};
        }
        case ExprOp::eq:
        case ExprOp::ne:
        case ExprOp::lt: {
            TermVal a = term(e->arg(0), tr, t);
            TermVal b = term(e->arg(1), tr, t);
            if (!a.known || !b.known) return {false, 0};
            bool r = e->op == ExprOp::eq   ? a.v == b.v
                     : e->op == ExprOp::ne ? a.v != b.v
                                           : a.v < b.v;
            return {true, r ? uint64_t{1} : uint64_t{0}};
        }
        case ExprOp::past: {
            if (t - e->index < 0) return {false, 0};
            return term(e->arg(0), tr, t - e->index);
        }
        case ExprOp::stable: {
            if (t == 0) return {false, 0};
            TermVal now = term(e->arg(0), tr, t);
            TermVal prev = term(e->arg(0), tr, t - 1);
            if (!now.known || !prev.known) return {false, 0};
            return {true, now.v == prev.v ? uint64_t{1} : uint64_t{0}};
        }
        case ExprOp::rose: {
            if (t == 0) return {false, 0};
            TermVal now = term(e->arg(0), tr, t);
            TermVal prev = term(e->arg(0), tr, t - 1);
            if (!now.known || !prev.known) return {false, 0};
            return {true, ((prev.v & 1) == 0 && (now.v & 1) == 1) ? uint64_t{1}
                                                                  : uint64_t{0}};
        }
        case ExprOp::fell: {
            if (t == 0) return {false, 0};
            TermVal now = term(e->arg(0), tr, t);
            TermVal prev = term(e->arg(0), tr, t - 1);
            if (!now.known || !prev.known) return {false, 0};
            return {true, ((prev.v & 1) == 1 && (now.v & 1) == 0) ? uint64_t{1}
                                                                  : uint64_t{0}};
        }
        case ExprOp::isunknown: {
            TermVal a = term(e->arg(0), tr, t);
            return {true, a.known ? uint64_t{0} : uint64_t{1}};
        }
        default: {
            int b = truth(e, tr, t);
            if (b < 0) return {false, 0};
            return {true, static_cast<uint64_t>(b)};
        }
    }
}

// All cycle schedules (one cycle per item) a sequence can occupy from a
// given start, trace bounds ignored.
void schedules(const Sequence& seq, long start, std::vector<std::vector<long>>& out) {
    std::vector<long> cur;
    std::function<void(size_t, long)> rec = [&](size_t item, long at) {
        cur.push_back(at);
        if (item + 1 == seq.items.size()) {
            out.push_back(cur);
        } else {
            auto [lo, hi] = seq.delays[item];
            for (int d = lo; d <= hi; ++d) rec(item + 1, at + d);
        }
        cur.pop_back();
    };
    for (int lead = seq.lead_min; lead <= seq.lead_max; ++lead) rec(0, start + lead);
}

bool schedule_in_trace(const std::vector<long>& sched, size_t length) {
    for (long c : sched)
        if (c < 0 || c >= static_cast<long>(length)) return false;
    return true;
}

bool schedule_matches(const Sequence& seq, const std::vector<long>& sched,
                      const Trace& tr) {
    for (size_t i = 0; i < sched.size(); ++i)
        if (truth(seq.items[i].get(), tr, sched[i]) != 1) return false;
    return true;
}

bool disabled_between(const SvaSubsetAst& prop, const Trace& tr, long from, long to) {
    if (!prop.disable_iff) return false;
    for (long u = from; u <= to && u < static_cast<long>(tr.length); ++u)
        if (truth(prop.disable_iff.get(), tr, u) == 1) return true;
    return false;
}

} // namespace

VerificationOutcome eval_property_naive(const Trace& trace, const SvaSubsetAst& prop) {
    const size_t n = trace.length;
    bool antecedent_seen = false;
    long earliest_fail = -1;

    for (size_t s = 0; s < n; ++s) {
        // Antecedent match end cycles (definite, in trace, non-disabled).
        std::vector<long> ends;
        if (prop.has_implication) {
            std::vector<std::vector<long>> scheds;
            schedules(prop.antecedent, static_cast<long>(s), scheds);
            for (auto& sched : scheds) {
                if (!schedule_in_trace(sched, n)) continue;
                if (!schedule_matches(prop.antecedent, sched, trace)) continue;
                ends.push_back(sched.back());
            }
            std::sort(ends.begin(), ends.end());
            ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
        } else {
            ends.push_back(static_cast<long>(s));
        }

        for (long m : ends) {
            if (disabled_between(prop, trace, static_cast<long>(s), m)) continue;
            if (prop.has_implication) antecedent_seen = true;

            long at = prop.has_implication && !prop.overlapping ? m + 1 : m;
            if (at >= static_cast<long>(n)) continue;
            const Sequence& obligation =
                prop.has_implication ? prop.consequent : prop.antecedent;

            std::vector<std::vector<long>> scheds;
            schedules(obligation, at, scheds);
            bool matched = false;
            bool any_open = false; // some schedule runs past the trace un-refuted
            long first_refute = -1;
            for (auto& sched : scheds) {
                bool in_trace = schedule_in_trace(sched, n);
                if (in_trace && schedule_matches(obligation, sched, trace)) {
                    matched = true;
                    break;
                }
                // Find where (if anywhere inside the trace) this schedule is
                // refuted.
                bool refuted = false;
                for (size_t i = 0; i < sched.size(); ++i) {
                    if (sched[i] >= static_cast<long>(n)) break;
                    if (truth(obligation.items[i].get(), trace, sched[i]) != 1) {
                        refuted = true;
                        if (first_refute < 0 || sched[i] < first_refute)
                            first_refute = sched[i];
                        break;
                    }
                }
                if (!refuted && !in_trace) any_open = true;
            }
            if (matched || any_open) continue;
            if (first_refute >= 0 &&
                !disabled_between(prop, trace, static_cast<long>(s), first_refute)) {
                if (earliest_fail < 0 || first_refute < earliest_fail)
                    earliest_fail = first_refute;
            }
        }
        if (!prop.has_implication &&
            !disabled_between(prop, trace, static_cast<long>(s), static_cast<long>(s)))
            antecedent_seen = true;
    }

    VerificationOutcome out;
    if (earliest_fail >= 0) {
        out.verdict = Verdict::fails;
        out.fail_cycle = static_cast<size_t>(earliest_fail);
        for (auto& [name, col] : trace.signals)
            out.witness.emplace_back(name, col.at(static_cast<size_t>(earliest_fail)));
    } else if (!antecedent_seen) {
        out.verdict = Verdict::vacuous;
    } else {
        out.verdict = Verdict::holds;
    }
    return out;
}

std::vector<size_t> eval_cover_naive(const Trace& trace, const std::string& cover_expr) {
    // Reuse only the parser; matching is re-derived here.
    SvaSubsetAst prop = parse_sva_subset(cover_expr);
    const Sequence& seq = prop.antecedent;
    std::set<size_t> hits;
    for (size_t s = 0; s < trace.length; ++s) {
        std::vector<std::vector<long>> scheds;
        schedules(seq, static_cast<long>(s), scheds);
        for (auto& sched : scheds) {
            if (!schedule_in_trace(sched, trace.length)) continue;
            if (schedule_matches(seq, sched, trace))
                hits.insert(static_cast<size_t>(sched.back()));
        }
    }
    return std::vector<size_t>(hits.begin(), hits.end());
}

ReachResult bounded_reach_naive(const rtl::FsmCandidate& fsm,
                                const std::vector<std::string>& free_inputs, int depth) {
    // Level-synchronous set BFS, guards re-parsed and re-evaluated per use.
    ReachResult result;
    std::string initial = fsm.state_consts.front().first;
    result.reachable.insert(initial);
    result.witnesses[initial] = {};

    std::set<std::string> frontier = {initial};
    for (int level = 1; level <= depth && !frontier.empty(); ++level) {
        std::set<std::string> next;
        for (auto& state : frontier) {
            uint64_t n_assign = uint64_t{1} << free_inputs.size();
            for (uint64_t a = 0; a < n_assign; ++a) {
                for (auto& t : fsm.transitions) {
                    if (t.from_const != state) continue;
                    bool fires;
                    if (atlas::trim(t.guard).empty()) {
                        fires = true;
                    } else {
                        auto g = parse_bool_expr(t.guard);
                        Trace one;
                        one.length = 1;
                        for (size_t i = 0; i < free_inputs.size(); ++i)
                            one.signals[free_inputs[i]] = {Value::of((a >> i) & 1)};
                        fires = truth(g.get(), one, 0) == 1;
                    }
                    if (!fires) continue;
                    if (!result.reachable.count(t.to_const)) {
                        result.reachable.insert(t.to_const);
                        auto w = result.witnesses[state];
                        w.push_back(a);
                        result.witnesses[t.to_const] = std::move(w);
                        next.insert(t.to_const);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    result.budget_exhausted = !frontier.empty();
    return result;
}

} // namespace oracle
