#pragma once

#include "bhs/analyze.hpp"
#include "bhs/procedures.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace bhs {

/// Timing instrumentation for the magic-number audit. With `from_next_ring` set the
/// controller skips FirstRing and opens InitNextRing at once, carrying its two tokens.
struct Bhs32Probe {
    bool from_next_ring = false;
    int init_next_ring = 0;    // longest InitNextRing, opening included
    int opening_step = 0;      // longest big-step that contains an InitNextRing
    int next_ring_step = 0;    // longest later NextRing big-step
    int first_ring_step = 0;
    bool left_rings = false;   // stopped, met someone, or started searching elsewhere
};

/// Three agents, two tokens each. Every FirstRing and NextRing big-step lasts exactly
/// `magic` time units and opens with a twelve unit wait, so an InitNextRing started by
/// any agent always overlaps the idle window of everybody else.
class Bhs32 final : public ScriptedAgent {
public:
    static constexpr int kInitWindow = 12;  // length of InitNextRing when it does not branch off
    static constexpr int kTrail = 32;        // moves remembered for regathering tokens after a meeting
    static constexpr int kHandshake = 6;    // time units spent electing a leader

    explicit Bhs32(int magic, Bhs32Probe* probe = nullptr) : magic_(magic), probe_(probe) {}

    std::string_view name() const override { return "bhs32"; }

    PhaseInfo phase() const override {
        PhaseInfo info;
        info.phase = marking_ ? Phase::MarkAll : phase_;
        info.big_steps = big_steps_;
        info.inr_entry = inr_entry_;
        info.idle_ahead = idle_now_;
        info.holds_homebase = !marking_ && (phase_ == Phase::FirstRing || phase_ == Phase::InitNextRing ||
                                            phase_ == Phase::NextRing);
        return info;
    }

protected:
    Proc main() override {
        bool met = false;
        try {
            co_await call(alone());
        } catch (const Halt& h) {
            halt_ = h.how;
        } catch (const Met&) {
            met = true;
        }
        if (probe_) probe_->left_rings = true;
        if (met) {
            try {
                co_await call(colocated());
            } catch (const Halt& h) {
                halt_ = h.how;
            }
        }
        phase_ = Phase::Done;
        marking_ = false;
        co_await act(Action::finish(halt_));
    }

    std::uint64_t memory_fingerprint() const override {
        Fingerprint f;
        f.mix(static_cast<int>(phase_), count_, w_, n1_, danger_, seq_.code(), first_time_, marking_);
        f.mix(cleaning_, paired_, regathering_, role_, rank_, base_, with_other_, inr_armed_);
        f.mix(trail_len_, opening_);
        for (int s = 0; s < trail_len_; ++s) f.mix(static_cast<int>(trail_[static_cast<std::size_t>(s)]));
        for (const auto& c : crumbs_) f.mix(c.dx, c.dy, c.count);
        f.mix(clock_);  // bounded by the magic number
        return f.value();
    }

    void on_perception(const Perception& p) override {
        const bool fresh = p.other_agent && !with_other_;
        with_other_ = p.other_agent;
        // A finished tower means a pair is already at work here.
        if (regathering_ && p.node_tokens == kNodeTokenCap) throw Halt{Declaration::Terminated};
        if (marking_ || cleaning_ || paired_ || phase_ == Phase::Done) return;
        if (p.danger() || p.node_tokens == kNodeTokenCap) throw Halt{Declaration::Terminated};
        if (fresh) throw Met{};
    }

    void on_action(const Action& a) override {
        ++clock_;
        inr_entry_ = inr_armed_;
        inr_armed_ = false;
        idle_now_ = a.move == Direction::None && !a.declare ? armed_idle_ : 0;
        armed_idle_ = 0;
        if (!paired_) remember(a);
    }

private:
    using D = Direction;
    struct Met {};

    enum Role : int { Unknown = 0, Leader = 1, Follower = 2 };

    struct Crumb {
        int dx = 0, dy = 0, count = 0;  // own tokens lying at this offset from here
    };

    // ---- bookkeeping ------------------------------------------------------------

    static int dcol(D d) { return d == D::East ? 1 : d == D::West ? -1 : 0; }
    static int drow(D d) { return d == D::South ? 1 : d == D::North ? -1 : 0; }

    Crumb* crumb_at(int dx, int dy) {
        for (auto& c : crumbs_)
            if (c.count > 0 && c.dx == dx && c.dy == dy) return &c;
        return nullptr;
    }

    void remember(const Action& a) {
        if (a.has_token_op()) {
            if (a.token_op == TokenOp::Put) {
                Crumb* c = crumb_at(0, 0);
                if (!c) {
                    c = &*std::min_element(crumbs_.begin(), crumbs_.end(),
                                           [](const Crumb& x, const Crumb& y) { return x.count < y.count; });
                    *c = Crumb{0, 0, 0};
                }
                c->count += a.token_count;
            } else if (Crumb* c = crumb_at(0, 0)) {
                c->count = std::max(0, c->count - a.token_count);
            }
        }
        if (a.move == D::None) return;
        for (auto& c : crumbs_) {
            c.dx -= dcol(a.move);
            c.dy -= drow(a.move);
            if (std::abs(c.dx) + std::abs(c.dy) > kTrail) c = Crumb{};
        }
        if (trail_len_ == kTrail) {
            std::copy(trail_.begin() + 1, trail_.end(), trail_.begin());
            --trail_len_;
        }
        trail_[static_cast<std::size_t>(trail_len_++)] = a.move;
    }

    // ---- timing -------------------------------------------------------------------

    Proc idle(int ticks, Action first = {}) {
        for (int t = 0; t < ticks; ++t) {
            armed_idle_ = ticks - t;
            co_await act(t == 0 ? first : Action::stay());
        }
    }

    // Pads the current big-step to exactly `magic_` time units.
    Proc finish_big_step(Action first = {}) {
        if (probe_) {
            int& slot = phase_ == Phase::FirstRing ? probe_->first_ring_step
                        : opening_    ? probe_->opening_step
                                      : probe_->next_ring_step;
            slot = std::max(slot, clock_ + 1);
        }
        opening_ = false;
        if (clock_ > magic_ - 1) throw ProtocolViolation("big-step longer than the magic number");
        co_await call(idle(magic_ - clock_, first));
        clock_ = 0;
    }

    Proc wait_for_agent(Action first = {}) {
        inr_done();
        for (bool head = true;; head = false) {
            armed_idle_ = 1 << 20;
            co_await act(head ? first : Action::stay());
        }
    }

    Proc mark_and_stop(D toward, Action first = {}) {
        co_await call(mark_around(toward, first));
        inr_done();
        throw Halt{Declaration::FoundBlackHole};
    }

    // ---- the lone agent -----------------------------------------------------------

    Proc alone() {
        Action opening = Action::stay();
        if (!probe_ || !probe_->from_next_ring) {
            co_await call(first_ring());
            opening = Action::stay().pick(2);
        }
        first_time_ = true;
        for (;;) {
            co_await call(next_ring(opening));
            first_time_ = false;
            phase_ = Phase::Analyze;
            const int pick = std::min(seen().node_tokens, kNodeTokenCap - seen().carried);
            switch (analyze(seq_, seen().carried + pick)) {
                case AnalyzeOutcome::DescendSafe:
                    opening = Action::go(D::South).pick(pick);
                    continue;
                case AnalyzeOutcome::LocateByTwoTokenNode:
                    co_await act(Action::stay().pick(pick));
                    do {
                        co_await act(Action::go(D::East));
                    } while (seen().node_tokens != 2);
                    co_await call(mark_and_stop(D::South));
                    break;
                case AnalyzeOutcome::BlackHoleInCurrentNextRing:
                    co_await act(Action::stay().pick(pick));
                    co_await call(black_hole_in_next_ring());
                    break;
                case AnalyzeOutcome::WaitToMeet:
                    co_await call(wait_for_agent(Action::stay().pick(pick)));
                    break;
                case AnalyzeOutcome::SeekEastToMeet:
                    co_await act(Action::stay().pick(pick));
                    for (;;) co_await act(Action::go(D::East));
                case AnalyzeOutcome::DescendThenBlackHoleInNextRing:
                    co_await act(Action::go(D::South).pick(pick));
                    co_await call(black_hole_in_next_ring());
                    break;
            }
        }
    }

    Proc first_ring() {
        phase_ = Phase::FirstRing;
        clock_ = 0;
        // Homebase token plus a one-token cautious walk East.
        Action pending = Action::stay().put(2);
        for (;;) {
            co_await call(idle(kInitWindow, pending));
            co_await act(Action::go(D::East));
            co_await act(Action::go(D::West));
            co_await act(Action::go(D::East).pick(1));
            const int n = seen().node_tokens;
            if (n == 2) co_await call(found_in_first_ring());
            co_await call(finish_big_step(Action::stay().put(1)));
            ++big_steps_;
            pending = {};
            if (n == 1) break;
        }
        // Both tokens are down; walk on without tokens, counting two-token nodes.
        count_ = 1;
        while (count_ < 6) {
            co_await call(idle(kInitWindow));
            co_await act(Action::go(D::East));
            co_await act(Action::go(D::West));
            co_await act(Action::go(D::East));
            const int n = seen().node_tokens;
            if (n == 1) co_await call(found_in_first_ring());
            if (n == 2) ++count_;
            co_await call(finish_big_step());
            ++big_steps_;
        }
    }

    Proc found_in_first_ring() {
        co_await call(mark_around(D::East));
        marking_ = false;
        cleaning_ = true;
        phase_ = Phase::Clean;
        // Sweep the ring westward picking up tokens.
        Action step = Action::go(D::West);
        for (;;) {
            co_await act(step);
            if (seen().other_agent || seen().danger() || seen().node_tokens == 1) break;
            step = Action::go(D::West);
            if (seen().node_tokens > 1) step.pick(std::min(seen().node_tokens, kNodeTokenCap - seen().carried));
        }
        throw Halt{Declaration::FoundBlackHole};
    }

    // `opening` is the first action of the big-step: a step South onto the new ring, or
    // a one unit wait right after FirstRing.
    Proc next_ring(Action opening) {
        phase_ = Phase::InitNextRing;
        clock_ = 0;
        opening_ = true;
        co_await act(opening);
        co_await call(init_next_ring());
        inr_done();

        phase_ = Phase::NextRing;
        count_ = 0;
        w_ = 0;
        danger_ = false;
        seq_.clear();
        do {
            co_await call(idle(kInitWindow));
            if (danger_) {
                co_await call(idle(2));
                danger_ = false;
            } else {
                co_await act(Action::go(D::South));
                w_ = seen().node_tokens;
                if (w_ > 0) seq_.push_below(w_);
                co_await act(Action::go(D::North));
            }
            const bool carrying = count_ < 3;
            co_await act(Action::go(D::East).pick(carrying ? 1 : 0));
            const int n = seen().node_tokens;
            Action pending = Action::stay().put(carrying ? 1 : 0);
            if (n > 0) {
                ++count_;
                seq_.push_ring(n);
                if (count_ <= 3) {
                    if (n == 2 || w_ == 2) co_await call(mark_and_stop(D::South, pending));
                    if (n == 1 && w_ == 1) {
                        danger_ = true;
                    } else {
                        // Check the node South of here from the West, where a death
                        // leaves tokens both North and West of the black hole.
                        co_await act(Action::go(D::West));
                        co_await act(Action::go(D::South));
                        co_await act(Action::go(D::East).put(1));
                        co_await act(Action::go(D::West));
                        co_await act(Action::go(D::North).pick(1));
                        co_await act(Action::go(D::East));
                        pending = Action::stay().put(1);
                    }
                } else if (w_ >= 1) {
                    danger_ = true;
                }
            }
            co_await call(finish_big_step(pending));
        } while (count_ < 6);
    }

    Proc init_next_ring() {
        // Called right after the opening action; clock_ is 1 here.
        inr_armed_ = true;
        co_await act(Action::go(D::South).put(2));
        n1_ = seen().node_tokens;
        co_await act(Action::go(D::North));
        co_await act(Action::go(D::East).pick(2));
        if (seen().node_tokens == 2) co_await call(mark_and_stop(D::South));
        if (n1_ == 1) {
            co_await call(one_token_below());
            co_return;
        }
        co_await act(Action::go(D::West).put(2));
        co_await act(Action::go(D::South));
        const int n3 = seen().node_tokens;
        if (n1_ == 0 && n3 == 0) {
            co_await act(Action::go(D::North));
            co_await act(Action::go(D::East));
            co_await act(Action::go(D::South));
            co_await act(Action::go(D::North));
            co_await call(idle(3));
        } else if (n1_ == 0 && n3 == 2) {
            co_await call(wait_for_agent());
        } else if (n1_ == 2 && n3 == 0) {
            co_await act(Action::go(D::East));
            co_await call(wait_for_agent());
        } else if (n1_ == 2 && n3 == 2) {
            co_await act(Action::go(D::North));
            co_await act(Action::go(D::East));
            co_await act(Action::go(D::South));
            co_await act(Action::go(D::North));
            co_await act(Action::go(D::West).pick(2));
            co_await act(Action::go(D::South));
            co_await call(mark_and_stop(D::South));
        } else {
            throw ProtocolViolation("InitNextRing read " + std::to_string(n1_) + " then " +
                                    std::to_string(n3) + " tokens below");
        }
    }

    Proc one_token_below() {
        co_await act(Action::stay().put(2));
        co_await act(Action::go(D::East));
        if (seen().node_tokens == 2) {
            co_await act(Action::stay());
            co_await act(Action::go(D::West));
            co_await act(Action::go(D::East).pick(2));
            co_await call(mark_and_stop(D::South));
        }
        co_await act(Action::go(D::West));
        co_await act(Action::go(D::South));
        const int n2 = seen().node_tokens;
        co_await act(Action::go(D::North));
        co_await act(Action::go(D::East).pick(2));
        if (n2 > 0) {
            co_await act(Action::go(D::South).put(2));
            co_await act(Action::go(D::North));
            co_await act(Action::go(D::South).pick(2));
            co_await call(black_hole_in_next_ring());
        }
        co_await call(idle(3, Action::stay().put(2)));
    }

    // The black hole is on the ring below; walk this ring probing South of every token.
    Proc black_hole_in_next_ring() {
        inr_done();
        phase_ = Phase::BlackHoleInNextRing;
        while (seen().node_tokens > 0) co_await act(Action::go(D::East));
        for (;;) {
            do {
                co_await act(Action::go(D::East));
            } while (seen().node_tokens == 0);
            co_await act(Action::go(D::West));
            co_await act(Action::go(D::South));
            if (seen().node_tokens > 0) co_await call(mark_and_stop(D::East));
            const int probe = std::min(2, seen().carried);
            co_await act(Action::go(D::East).put(probe));
            co_await act(Action::go(D::West));
            co_await act(Action::go(D::North).pick(probe));
            co_await act(Action::go(D::East));
        }
    }

    void inr_done() {
        if (probe_ && phase_ == Phase::InitNextRing)
            probe_->init_next_ring = std::max(probe_->init_next_ring, clock_);
    }

    // ---- two agents on one node ----------------------------------------------------

    static int rank_of(D arrived) {
        switch (arrived) {
            case D::North: return 0;
            case D::East: return 1;
            case D::South: return 2;
            case D::West: return 3;
            default: return 4;
        }
    }

    Proc colocated() {
        paired_ = true;
        phase_ = Phase::Meeting;
        rank_ = rank_of(seen().arrived);
        role_ = Unknown;
        // Tokens left lying around would mislead agents still exploring, so clear them first.
        co_await call(regather());
        if (!seen().other_agent) throw Halt{Declaration::Terminated};

        // Build the base tower in rank order. Whoever sees the tower grow before its own
        // slot is the follower; a leader has to see it grow after its slot.
        if (seen().node_tokens != 0) throw Halt{Declaration::Terminated};
        int before = 0, mine = 0;
        for (int h = 0; h < kHandshake; ++h) {
            const int now = seen().node_tokens;
            if (role_ == Unknown && h <= rank_ && now > before) role_ = Follower;
            if (role_ == Unknown && h > rank_ && now != before + mine) role_ = Leader;
            before = h <= rank_ ? now : before;
            if (h == rank_ && role_ == Follower && (seen().carried == 0 || now == kNodeTokenCap)) {
                // Nothing to add, so answer by taking one back.
                co_await act(Action::stay().pick(1));
            } else if (h == rank_) {
                mine = std::min(seen().carried, kNodeTokenCap - now);
                co_await act(Action::stay().put(mine));
            } else {
                co_await act(Action::stay());
            }
        }
        if (role_ == Unknown || !seen().other_agent)
            throw Halt{Declaration::Terminated};
        phase_ = Phase::Colocated;
        base_ = seen().node_tokens;

        for (;;) {
            do {
                co_await call(walk_together(D::East));
            } while (seen().node_tokens != base_);
            co_await act(Action::stay().pick(role_ == Follower ? std::min(seen().node_tokens, kNodeTokenCap - seen().carried) : 0));
            co_await act(Action::stay().pick(role_ == Leader ? std::min(seen().node_tokens, kNodeTokenCap - seen().carried) : 0));
            co_await call(walk_together(D::South));
            while (seen().node_tokens != 0) co_await call(walk_together(D::East));
            co_await act(Action::stay().put(role_ == Follower ? std::min(seen().carried, kNodeTokenCap) : 0));
            co_await act(Action::stay().put(role_ == Leader ? std::min(seen().carried, kNodeTokenCap - seen().node_tokens) : 0));
            base_ = seen().node_tokens;
        }
    }

    // Walk back along the remembered trail as far as the last own token, pick them up,
    // and come back. Both agents are back on the meeting node after 2*kTrail+6 units.
    Proc regather() {
        regathering_ = true;
        std::array<int, kTrail + 1> px{}, py{};
        int reach = 0;
        for (int s = 1; s <= trail_len_; ++s) {
            D back = opposite(trail_[static_cast<std::size_t>(trail_len_ - s)]);
            px[static_cast<std::size_t>(s)] = px[static_cast<std::size_t>(s - 1)] + dcol(back);
            py[static_cast<std::size_t>(s)] = py[static_cast<std::size_t>(s - 1)] + drow(back);
            if (crumb_at(px[static_cast<std::size_t>(s)], py[static_cast<std::size_t>(s)])) reach = s;
        }
        auto take = [&](int s) {
            Crumb* c = crumb_at(px[static_cast<std::size_t>(s)], py[static_cast<std::size_t>(s)]);
            if (!c) return 0;
            int k = std::min({c->count, seen().node_tokens, kNodeTokenCap - seen().carried});
            c->count = 0;
            return k;
        };
        int spent = 0;
        for (int s = 1; s <= reach; ++s, ++spent)
            co_await act(Action::go(opposite(trail_[static_cast<std::size_t>(trail_len_ - s)])).pick(take(s - 1)));
        Action last = Action::stay().pick(take(reach));
        for (int s = reach; s >= 1; --s, ++spent) {
            last.move = trail_[static_cast<std::size_t>(trail_len_ - s)];
            co_await act(last);
            last = {};
        }
        co_await call(idle(2 * kTrail + 1 + rank_ - spent, last));
        // Whatever else lies on the meeting node is swept up too, one agent per slot.
        co_await act(Action::stay().pick(std::max(0, std::min(seen().node_tokens, 2 - seen().carried))));
        co_await call(idle(4 - rank_));
        trail_len_ = 0;
        crumbs_ = {};
        regathering_ = false;
    }

    // Leader probes, follower waits two units and marks if the leader did not return.
    Proc walk_together(D d) {
        if (role_ == Leader) {
            co_await act(Action::go(d));
            co_await act(Action::go(opposite(d)));
            co_await act(Action::go(d));
        } else {
            co_await act(Action::stay());
            co_await act(Action::stay());
            if (!seen().other_agent) {
                co_await call(mark_around(d));
                throw Halt{Declaration::FoundBlackHole};
            }
            co_await act(Action::go(d));
        }
        if (seen().danger()) throw Halt{Declaration::Terminated};
    }

    // ---- state ---------------------------------------------------------------------

    int magic_;
    Bhs32Probe* probe_ = nullptr;
    bool opening_ = false;
    Phase phase_ = Phase::Start;
    long big_steps_ = 0;
    int clock_ = 0;
    int count_ = 0;
    int w_ = 0;
    int n1_ = 0;
    bool danger_ = false;
    bool first_time_ = false;
    ObservationSequence seq_;

    bool cleaning_ = false;
    bool paired_ = false;
    bool regathering_ = false;
    bool with_other_ = false;
    int role_ = Unknown;
    int rank_ = 4;
    int base_ = 0;

    std::array<D, kTrail> trail_{};
    int trail_len_ = 0;
    std::array<Crumb, 4> crumbs_{};

    bool inr_armed_ = false;
    bool inr_entry_ = false;
    int armed_idle_ = 0;
    int idle_now_ = 0;
    Declaration halt_ = Declaration::Terminated;
};

}  // namespace bhs
