//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#include <fstream>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/minicheck.hpp"
#include "atlas/strings.hpp"

namespace atlas {
namespace minicheck {

const std::vector<Value>& Trace::column(const std::string& name) const {
    auto it = signals.find(name);
    if (it == signals.end()) throw UnknownSignal(name);
    return it->second;
}

Trace parse_trace_csv(const std::string& text, const std::map<std::string, int>& widths) {
    Trace trace;
    trace.widths = widths;

    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("trace: empty file");
    auto header = split(trim(line), ',');
    if (header.empty() || to_lower(trim(header[0])) != "cycle")
        throw ParseError("trace: header must start with 'cycle'");
    std::vector<std::string> names;
    for (size_t i = 1; i < header.size(); ++i) {
        std::string name = trim(header[i]);
        if (name.empty()) throw ParseError("trace: empty signal name in header");
        if (trace.signals.count(name))
            throw ParseError("trace: duplicate signal column " + name);
        trace.signals[name] = {};
        names.push_back(name);
    }

    size_t expected_cycle = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != names.size() + 1)
            throw ParseError("trace line " + std::to_string(lineno) + ": expected " +
                             std::to_string(names.size() + 1) + " cells");
        std::string cyc = trim(cells[0]);
        uint64_t cycle;
        try {
            cycle = std::stoull(cyc);
        } catch (...) {
            throw ParseError("trace line " + std::to_string(lineno) + ": bad cycle '" +
                             cyc + "'");
        }
        if (cycle != expected_cycle)
            throw ParseError("trace line " + std::to_string(lineno) +
                             ": cycles must increase from 0 without gaps");
        ++expected_cycle;

        for (size_t i = 0; i < names.size(); ++i) {
            std::string cell = to_lower(trim(cells[i + 1]));
            Value v;
            if (cell == "x") {
                v = Value::x();
            } else {
                try {
                    v = Value::of(std::stoull(cell));
                } catch (...) {
                    throw ParseError("trace line " + std::to_string(lineno) +
                                     ": bad value '" + cell + "'");
                }
            }
            auto wit = widths.find(names[i]);
            if (!v.is_x && wit != widths.end() && wit->second < 64) {
                uint64_t limit = (uint64_t{1} << wit->second);
                if (v.v >= limit)
                    throw ParseError("trace line " + std::to_string(lineno) + ": value " +
                                     cell + " does not fit " +
                                     std::to_string(wit->second) + "-bit " + names[i]);
            }
            trace.signals[names[i]].push_back(v);
        }
    }
    trace.length = expected_cycle;
    if (trace.length == 0) throw ParseError("trace: needs at least one cycle");
    return trace;
}

Trace load_trace_csv(const std::string& path, const std::map<std::string, int>& widths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open trace: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace_csv(ss.str(), widths);
}

const char* verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::vacuous: return "vacuous";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

} // namespace minicheck
} // namespace atlas
