//
// Independent naive re-derivation of the trace-checker semantics, used as
// the differential oracle. No evaluation code is shared with the library:
// everything is recomputed recursively per (expression, cycle) with no
// caching, and sequence matching enumerates delay paths explicitly.
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "atlas/minicheck.hpp"

namespace oracle {

atlas::minicheck::VerificationOutcome eval_property_naive(
    const atlas::minicheck::Trace& trace, const atlas::minicheck::SvaSubsetAst& prop);

std::vector<size_t> eval_cover_naive(const atlas::minicheck::Trace& trace,
                                     const std::string& cover_expr);

atlas::minicheck::ReachResult bounded_reach_naive(
    const atlas::rtl::FsmCandidate& fsm, const std::vector<std::string>& free_inputs,
    int depth);

} // namespace oracle
