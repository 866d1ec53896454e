//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "atlas/emitter.hpp"

#include <algorithm>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/strings.hpp"

namespace atlas {
namespace emitter {

namespace {

std::vector<const propgen::SecurityProperty*> ordered_properties(const EmitPlan& plan) {
    std::vector<const propgen::SecurityProperty*> props;
    for (auto& p : plan.properties) {
        if (p.status != propgen::PropertyStatus::validated)
            throw UnvalidatedProperty(p.name);
        props.push_back(&p);
    }
    std::sort(props.begin(), props.end(), [](auto* a, auto* b) {
        if (a->cwe_id != b->cwe_id) return a->cwe_id < b->cwe_id;
        return a->name < b->name;
    });
    return props;
}

std::string checker_name(const EmitPlan& plan) {
    return plan.checker_name.empty() ? plan.top_module + "_checker" : plan.checker_name;
}

int width_of(const EmitPlan& plan, const std::string& name) {
    for (auto& s : plan.symbols)
        if (s.name == name) return s.width;
    return 1;
}

std::string render_cover_property(const EmitPlan& plan,
                                  const propgen::SecurityProperty& prop,
                                  const std::string& cover) {
    std::string text = "@(" + plan.clock_edge + " " + plan.clock + ") ";
    if (!prop.disable_expr.empty()) text += "disable iff (" + prop.disable_expr + ") ";
    text += cover;
    return text;
}

} // namespace

std::string emit_sva_checker(const EmitPlan& plan, std::vector<std::string>* warnings) {
    auto props = ordered_properties(plan);
    if (props.empty() && warnings)
        warnings->push_back("emitting a checker with no properties");

    // Port set: clock, reset, then every bound signal, name order.
    std::set<std::string> port_names;
    if (!plan.clock.empty()) port_names.insert(plan.clock);
    if (!plan.reset.empty()) port_names.insert(plan.reset);
    for (auto* p : props)
        for (auto& s : p->bound_signals) port_names.insert(s);
    port_names.erase("");

    std::vector<std::string> ports;
    if (!plan.clock.empty()) ports.push_back(plan.clock);
    if (!plan.reset.empty() && plan.reset != plan.clock) ports.push_back(plan.reset);
    for (auto& n : port_names)
        if (n != plan.clock && n != plan.reset) ports.push_back(n);

    std::ostringstream out;
    std::string name = checker_name(plan);
    out << "// Security property checker for " << plan.top_module << "\n";
    out << "module " << name << " (";
    for (size_t i = 0; i < ports.size(); ++i) {
        int w = width_of(plan, ports[i]);
        out << "\n  input logic ";
        if (w > 1) out << "[" << w - 1 << ":0] ";
        out << ports[i];
        if (i + 1 < ports.size()) out << ",";
    }
    out << "\n);\n";

    for (auto* p : props) {
        out << "\n  // CWE-" << p->cwe_id << ": " << p->rationale << "\n";
        out << "  a_" << p->name << ": assert property (" << p->sva_text() << ");\n";
        for (size_t i = 0; i < p->covers.size(); ++i) {
            out << "  c_" << p->name << "_" << i << ": cover property ("
                << render_cover_property(plan, *p, p->covers[i]) << ");\n";
        }
    }
    out << "endmodule\n";

    out << "\nbind " << plan.top_module << " " << name << " " << name << "_i (";
    for (size_t i = 0; i < ports.size(); ++i) {
        out << "." << ports[i] << "(" << ports[i] << ")";
        if (i + 1 < ports.size()) out << ", ";
    }
    out << ");\n";
    return out.str();
}

std::string emit_tcl_harness(const EmitPlan& plan) {
    auto props = ordered_properties(plan);
    (void)props; // validation only; the harness proves whatever is bound

    std::ostringstream out;
    std::string checker_file = checker_name(plan) + ".sv";
    out << "# Formal proof harness for " << plan.top_module << "\n";
    out << "clear -all\n";
    for (auto& f : plan.design_files) out << "analyze -sv12 " << f << "\n";
    out << "analyze -sv12 " << checker_file << "\n";
    out << "elaborate -top " << plan.top_module << "\n";
    out << "clock " << plan.clock << "\n";
    if (!plan.reset.empty()) {
        out << "reset -expression {" << (plan.reset_active_low ? "!" : "") << plan.reset
            << "}\n";
    }
    out << "prove -all\n";
    out << "report -summary\n";
    return out.str();
}

} // namespace emitter
} // namespace atlas
