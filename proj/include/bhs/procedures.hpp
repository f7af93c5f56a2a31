#pragma once

#include "bhs/agent.hpp"
#include "bhs/program.hpp"

#include <array>
#include <vector>

namespace bhs {

/// Tick-level expansion of a cautious walk in direction `d` that leaves exactly `x`
/// tokens behind while probing. The released tokens are picked up again before the
/// final step, so the expansion is always three actions long.
inline std::vector<Action> cautious_walk_expansion(Direction d, int x, int node_tokens, int carried) {
    if (x < 1 || x > kNodeTokenCap) throw UsageError("cautious walk needs 1..3 tokens");
    int released = x > node_tokens ? x - node_tokens : 0;
    if (released > carried) throw UsageError("cautious walk needs more tokens than carried");
    std::vector<Action> script;
    script.push_back(Action::go(d).put(released));
    script.push_back(Action::go(opposite(d)));
    script.push_back(Action::go(d).pick(released));
    return script;
}

/// Walk around the eight nodes surrounding w = neighbor(start, toward), marking at each
/// of the four orthogonal neighbours the link that leads into w. Ends where it began.
inline std::vector<Action> mark_all_path(Direction toward) {
    if (toward == Direction::None) throw UsageError("mark-all needs a compass direction");
    using D = Direction;
    // Positions around w in cycle order: N, NE, E, SE, S, SW, W, NW.
    static constexpr std::array<D, 8> kStep{D::East, D::South, D::South, D::West,
                                            D::West, D::North, D::North, D::East};
    static constexpr std::array<D, 8> kMark{D::South, D::None, D::West, D::None,
                                            D::North, D::None, D::East, D::None};
    int start = 0;
    switch (toward) {
        case D::South: start = 0; break;
        case D::West: start = 2; break;
        case D::North: start = 4; break;
        default: start = 6; break;
    }
    std::vector<Action> script;
    for (int s = 0; s < 8; ++s) {
        int k = (start + s) % 8;
        script.push_back(Action::go(kStep[k]).marking(kMark[k]));
    }
    return script;
}

/// Thrown inside a program to abandon the current procedure stack.
struct Halt {
    Declaration how;
};

/// Shared building blocks for the three algorithms.
class ScriptedAgent : public Program {
protected:
    Proc wait(int ticks) {
        for (int t = 0; t < ticks; ++t) co_await act(Action::stay());
    }

    Proc play(std::vector<Action> script) {
        for (const auto& a : script) co_await act(a);
    }

    Proc cautious_walk(Direction d, int x) {
        co_await call(play(cautious_walk_expansion(d, x, seen().node_tokens, seen().carried)));
    }

    Proc mark_all(Direction toward) {
        co_await call(mark_around(toward));
        co_await act(Action::finish(Declaration::FoundBlackHole));
    }

    // The marking walk alone. `first` carries a token operation to fold into its first step.
    Proc mark_around(Direction toward, Action first = {}) {
        marking_ = true;
        auto script = mark_all_path(toward);
        script.front().token_op = first.token_op;
        script.front().token_count = first.token_count;
        co_await call(play(std::move(script)));
    }

    bool marking_ = false;
};

}  // namespace bhs
