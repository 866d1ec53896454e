//
// atlas — renders validated properties as an SVA checker module plus a tcl
// proof harness, byte-deterministic
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <string>
#include <vector>

#include "atlas/propgen.hpp"
#include "atlas/rtl_frontend.hpp"

namespace atlas {
namespace emitter {

struct EmitPlan {
    std::vector<std::string> design_files; // ordered
    std::string top_module;
    std::string checker_name;              // defaults to <top>_checker
    std::string clock;
    std::string reset;
    bool reset_active_low = true;
    std::string clock_edge = "posedge";
    std::vector<propgen::SecurityProperty> properties; // all validated
    std::vector<rtl::SignalDecl> symbols;  // widths for checker ports
};

/// Checker module with one `assert property` per property, one
/// `cover property` per cover, and a `bind` into the top module.
/// Identical plans produce identical bytes.
std::string emit_sva_checker(const EmitPlan& plan,
                             std::vector<std::string>* warnings = nullptr);

/// analyze (design files + checker), elaborate, clock/reset setup, prove.
std::string emit_tcl_harness(const EmitPlan& plan);

} // namespace emitter
} // namespace atlas
