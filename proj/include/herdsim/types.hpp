#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace herdsim {

enum class State { L, R };
enum class Act { L, R };

inline State other(State s) { return s == State::L ? State::R : State::L; }
inline Act other(Act a) { return a == Act::L ? Act::R : Act::L; }
inline Act act_of(State s) { return s == State::L ? Act::L : Act::R; }

inline char to_char(Act a) { return a == Act::L ? 'L' : 'R'; }
inline char to_char(State s) { return s == State::L ? 'L' : 'R'; }

using History = std::vector<Act>;

inline std::string format_history(const History& h) {
    std::string out;
    out.reserve(h.size());
    for (Act a : h) out.push_back(to_char(a));
    return out;
}

// Parses strings like "LRRL". Case insensitive.
inline History parse_history(const std::string& s) {
    History h;
    h.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case 'L': case 'l': h.push_back(Act::L); break;
            case 'R': case 'r': h.push_back(Act::R); break;
            default:
                throw std::invalid_argument(std::string("invalid action character '") + c +
                                            "' in history (expected L or R)");
        }
    }
    return h;
}

}  // namespace herdsim
