#pragma once

#include <array>

#include "sddpg/numeric.hpp"

namespace sddpg {

enum class TerminalCause { none, goal, collision, timeout };

inline const char* to_string(TerminalCause c) {
    switch (c) {
        case TerminalCause::goal: return "goal";
        case TerminalCause::collision: return "collision";
        case TerminalCause::timeout: return "timeout";
        default: return "none";
    }
}

// One replayable experience step. `cause` records how the episode ended at
// this step (none while it is still running); goal and collision are
// environment terminals that mask the bootstrap term, timeout is a horizon
// truncation and bootstraps by default.
struct Transition {
    Vector state;
    std::array<double, 2> action{};
    double reward = 0.0;
    Vector next_state;
    TerminalCause cause = TerminalCause::none;

    bool ends_episode() const { return cause != TerminalCause::none; }
    bool env_terminal() const {
        return cause == TerminalCause::goal || cause == TerminalCause::collision;
    }
};

}  // namespace sddpg
