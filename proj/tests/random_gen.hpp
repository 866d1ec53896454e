//
// Random traces and properties from the supported SVA grammar, for the
// differential tests.
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <random>
#include <string>
#include <vector>

#include "atlas/minicheck.hpp"

namespace testutil {

struct RandomCase {
    atlas::minicheck::Trace trace;
    std::string property;
};

inline atlas::minicheck::Trace make_random_trace(std::mt19937& rng, size_t max_cycles,
                                                 bool with_x,
                                                 const std::vector<std::string>& names,
                                                 const std::vector<int>& widths) {
    using atlas::minicheck::Trace;
    using atlas::minicheck::Value;
    Trace t;
    t.length = 4 + rng() % (max_cycles - 3); // at least 4 cycles
    for (size_t i = 0; i < names.size(); ++i) {
        std::vector<Value> col;
        for (size_t c = 0; c < t.length; ++c) {
            if (with_x && rng() % 8 == 0) {
                col.push_back(Value::x());
            } else {
                uint64_t limit = widths[i] >= 63 ? ~uint64_t{0}
                                                 : (uint64_t{1} << widths[i]) - 1;
                col.push_back(Value::of(rng() % (limit + 1)));
            }
        }
        t.signals[names[i]] = std::move(col);
        t.widths[names[i]] = widths[i];
    }
    return t;
}

class RandomPropertyGen {
public:
    RandomPropertyGen(std::mt19937& rng, std::vector<std::string> names,
                      std::vector<int> widths)
        : rng_(rng), names_(std::move(names)), widths_(std::move(widths)) {}

    std::string property() {
        std::string p;
        if (pick(2)) p += "@(posedge clk) ";
        if (pick(3)) p += "disable iff (" + expr(1) + ") ";
        p += sequence(2);
        if (pick(4) != 0) { // implication most of the time
            p += pick(2) ? " |-> " : " |=> ";
            if (pick(2)) p += "##" + delay() + " ";
            p += sequence(2);
        }
        return p;
    }

    std::string cover() { return sequence(2); }

private:
    int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

    std::string delay() {
        if (pick(3) == 0)
            return "[" + std::to_string(pick(2)) + ":" + std::to_string(pick(2) + 1) + "]";
        return std::to_string(pick(3));
    }

    std::string sequence(int max_items) {
        std::string s = expr(2);
        int extra = pick(max_items);
        for (int i = 0; i < extra; ++i) s += " ##" + delay() + " " + expr(2);
        return s;
    }

    std::string signal(int* width = nullptr) {
        size_t i = rng_() % names_.size();
        if (width) *width = widths_[i];
        return names_[i];
    }

    std::string expr(int depth) {
        if (depth <= 0 || pick(3) == 0) return atom();
        switch (pick(5)) {
            case 0: return "(" + expr(depth - 1) + " && " + expr(depth - 1) + ")";
            case 1: return "(" + expr(depth - 1) + " || " + expr(depth - 1) + ")";
            case 2: return "!" + atom();
            case 3: {
                int w = 1;
                std::string s = signal(&w);
                uint64_t limit = w >= 63 ? 1000 : (uint64_t{1} << w);
                std::string lit = std::to_string(rng_() % limit);
                const char* op = pick(3) == 0 ? " < " : pick(2) ? " == " : " != ";
                return "(" + s + op + lit + ")";
            }
            default: return atom();
        }
    }

    std::string atom() {
        switch (pick(8)) {
            case 0: return "$stable(" + signal() + ")";
            case 1: return "$rose(" + signal() + ")";
            case 2: return "$fell(" + signal() + ")";
            case 3: return "$isunknown(" + signal() + ")";
            case 4: return "$past(" + signal() + ", " + std::to_string(1 + pick(2)) + ")";
            case 5: {
                int w = 1;
                std::string s = signal(&w);
                if (w > 1) return s + "[" + std::to_string(pick(w)) + "]";
                return s;
            }
            default: return signal();
        }
    }

    std::mt19937& rng_;
    std::vector<std::string> names_;
    std::vector<int> widths_;
};

} // namespace testutil
