#pragma once

#include "bhs/procedures.hpp"

namespace bhs {

/// Three tokens per agent, any k >= 3. One token marks the homebase, two tokens left
/// behind signal a black hole to the East and three a black hole to the South.
class Bhs33 final : public ScriptedAgent {
public:
    std::string_view name() const override { return "bhs33"; }

    PhaseInfo phase() const override {
        PhaseInfo info;
        info.phase = marking_ ? Phase::MarkAll : done_ ? Phase::Done : Phase::Explore;
        return info;
    }

protected:
    Proc main() override {
        try {
            co_await call(explore());
        } catch (const Halt& h) {
            halt_ = h.how;
        }
        done_ = true;
        co_await act(Action::finish(halt_));
    }

    std::uint64_t memory_fingerprint() const override {
        return Fingerprint{}.mix(yielded_, count_, found_, marking_, done_).value();
    }

private:
    using D = Direction;

    // Runs at every point where the agent reads the token count of a node.
    Proc checkpoint() {
        // An agent that did not come from the West yields to a co-located agent for
        // up to two three-tick slots.
        for (yielded_ = 0;; ++yielded_) {
            if (seen().danger()) throw Halt{Declaration::Terminated};
            if (!seen().other_agent || seen().arrived == D::East || yielded_ == 2 || locating_) break;
            co_await call(wait(3));
        }
        yielded_ = 0;
    }

    Proc explore() {
        for (;;) {
            // The current node is empty and becomes the homebase of this ring.
            co_await act(Action::go(D::East).put(2));
            co_await act(Action::go(D::West));
            co_await act(Action::go(D::East).pick(1));
            count_ = 0;
            found_ = 0;
            for (;;) {
                co_await call(checkpoint());
                int x = seen().node_tokens;
                if (x >= 2) {
                    found_ = x;
                    break;
                }
                if (x == 1 && ++count_ == 2) break;
                co_await call(cautious_walk(D::East, 2));
            }
            if (found_ == 0) {
                // Take the homebase token along and probe South with all three tokens.
                co_await act(Action::go(D::South).put(3 - seen().node_tokens));
                co_await act(Action::go(D::North));
                co_await act(Action::go(D::South).pick(3));
                for (;;) {
                    co_await call(checkpoint());
                    int x = seen().node_tokens;
                    if (x != 1) {
                        if (x >= 2) found_ = x;
                        break;
                    }
                    co_await call(cautious_walk(D::East, 2));
                }
            }
            if (found_ != 0) {
                co_await call(mark_all(found_ == 2 ? D::East : D::South));
                co_return;
            }
        }
    }

    int count_ = 0;
    int yielded_ = 0;
    int found_ = 0;
    bool done_ = false;
    bool locating_ = false;
    Declaration halt_ = Declaration::Terminated;
};

}  // namespace bhs
