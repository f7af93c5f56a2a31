#pragma once

#include "bhs/procedures.hpp"

namespace bhs {

/// Two tokens per agent, k >= 4. One token is a homebase (or a black hole to the East),
/// two tokens mean the black hole is East or South of the node.
class Bhs42 final : public ScriptedAgent {
public:
    std::string_view name() const override { return "bhs42"; }

    PhaseInfo phase() const override {
        PhaseInfo info;
        info.phase = marking_ ? Phase::MarkAll
                     : done_  ? Phase::Done
                     : locating_ ? Phase::Locate
                                 : Phase::Explore;
        return info;
    }

protected:
    Proc main() override {
        try {
            co_await call(explore());
            co_await call(locate());
        } catch (const Halt& h) {
            halt_ = h.how;
        }
        done_ = true;
        co_await act(Action::finish(halt_));
    }

    std::uint64_t memory_fingerprint() const override {
        return Fingerprint{}.mix(yielded_, count_, marking_, done_, locating_).value();
    }

private:
    using D = Direction;

    Proc checkpoint() {
        // Co-located agents take turns in three-tick slots. One that came from the West
        // goes first, an exploring agent yields up to three slots and a locating agent
        // up to six.
        const int turns = seen().arrived == D::East ? 0 : locating_ ? 6 : 3;
        for (yielded_ = 0;; ++yielded_) {
            if (seen().danger()) throw Halt{Declaration::Terminated};
            if (!seen().other_agent || yielded_ >= turns) break;
            co_await call(wait(3));
        }
        yielded_ = 0;
    }

    // Returns once the agent stands on a node holding two tokens.
    Proc explore() {
        for (;;) {
            // Homebase token plus a two-token probe East, keeping one token behind.
            co_await act(Action::go(D::East).put(2));
            co_await act(Action::go(D::West));
            co_await act(Action::go(D::East).pick(1));
            count_ = 0;
            for (;;) {
                co_await call(checkpoint());
                int x = seen().node_tokens;
                if (x >= 2) co_return;
                if (x == 1) {
                    if (++count_ == 3) break;
                    co_await call(cautious_walk(D::East, 2));
                } else {
                    co_await call(cautious_walk(D::East, 1));
                }
            }
            // Take the homebase token and probe South leaving two tokens.
            co_await act(Action::go(D::South).put(2 - seen().node_tokens));
            co_await act(Action::go(D::North));
            co_await act(Action::go(D::South).pick(2));
            for (;;) {
                co_await call(checkpoint());
                int x = seen().node_tokens;
                if (x >= 2) co_return;
                if (x == 0) break;
                co_await call(cautious_walk(D::East, 2));
            }
        }
    }

    // Standing on u with two tokens: the black hole is East or South of u.
    Proc locate() {
        locating_ = true;
        co_await act(Action::go(D::West));
        co_await act(Action::stay());
        co_await act(Action::go(D::South));
        co_await call(checkpoint());
        int x = seen().node_tokens;
        if (x >= 2) {
            co_await call(mark_all(D::East));
            co_return;
        }
        co_await call(cautious_walk(D::East, x == 1 ? 2 : 1));
        co_await act(Action::go(D::North));
        co_await call(mark_all(D::East));
    }

    int count_ = 0;
    int yielded_ = 0;
    bool locating_ = false;
    bool done_ = false;
    Declaration halt_ = Declaration::Terminated;
};

}  // namespace bhs
