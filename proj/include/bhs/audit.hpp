#pragma once

#include "bhs/bhs32.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

namespace bhs {

struct MagicNumberAudit {
    int init_next_ring = 0;
    int opening_step = 0;
    int next_ring_step = 0;
    int first_ring_step = 0;
    int worlds = 0;  // synthetic worlds explored

    int minimal() const noexcept {
        return std::max({init_next_ring, opening_step, next_ring_step, first_ring_step});
    }
    bool admits(int d) const noexcept { return d >= minimal(); }

    std::vector<std::pair<std::string, int>> rows() const {
        return {{"init_next_ring", init_next_ring},
                {"opening_big_step", opening_step},
                {"next_ring_big_step", next_ring_step},
                {"first_ring_big_step", first_ring_step}};
    }
};

namespace detail {

// One agent on a hand-made world, stepped until it leaves the ring discipline.
inline void probe_world(const TorusDims& dims, Coord bh, Coord start,
                        const std::vector<std::pair<Coord, int>>& tokens, bool from_next_ring,
                        long ticks, Bhs32Probe& probe) {
    constexpr int kRoomy = 1000;  // large enough that no big-step overruns
    probe.from_next_ring = from_next_ring;
    probe.left_rings = false;
    World w(dims, bh);
    for (auto [c, t] : tokens)
        if (t > 0) w.apply_token_op(c, TokenOp::Put, t);
    Bhs32 agent(kRoomy, &probe);
    Coord pos = start;
    int carried = 2;
    Direction last = Direction::None;
    for (long t = 0; t < ticks && !probe.left_rings; ++t) {
        Perception p;
        p.arrived = last;
        p.node_tokens = w.tokens(pos);
        p.carried = carried;
        p.incident_danger = w.incident_marks(pos);
        Action a;
        try {
            a = agent.step(p);
            if (a.has_token_op()) {
                if (a.token_op == TokenOp::Put && a.token_count > carried) return;
                if (a.token_op == TokenOp::Pick && carried + a.token_count > kNodeTokenCap) return;
                w.apply_token_op(pos, a.token_op, a.token_count);
                carried += a.token_op == TokenOp::Put ? -a.token_count : a.token_count;
            }
        } catch (const std::exception&) {
            return;  // the synthetic world contradicts the protocol; nothing to measure
        }
        if (a.mark != Direction::None) w.mark_link(pos, a.mark);
        if (a.declare) return;
        last = a.move;
        if (a.move != Direction::None) pos = neighbor(dims, pos, a.move);
        if (pos == bh) return;
    }
}

}  // namespace detail

/// Measures every bounded trajectory that has to fit in one big-step. InitNextRing and
/// the NextRing loop are started on worlds with every combination of 0..2 tokens on the
/// seven nodes they read and the black hole on each node of the neighbourhood below;
/// FirstRing is measured on a safe ring.
inline MagicNumberAudit audit_magic_number() {
    const TorusDims dims(5, 5);
    const Coord start{1, 1};
    const std::array<Coord, 7> read{Coord{2, 1}, Coord{1, 2}, Coord{2, 0}, Coord{2, 2},
                                    Coord{1, 3}, Coord{2, 3}, Coord{1, 4}};
    const std::array<Coord, 5> holes{Coord{2, 1}, Coord{2, 2}, Coord{2, 0}, Coord{2, 3}, Coord{4, 4}};

    MagicNumberAudit out;
    Bhs32Probe probe;
    for (Coord bh : holes) {
        for (int code = 0; code < 2187; ++code) {
            std::vector<std::pair<Coord, int>> tokens;
            bool on_hole = false;
            for (int c = 0, rest = code; c < 7; ++c, rest /= 3) {
                tokens.emplace_back(read[static_cast<std::size_t>(c)], rest % 3);
                on_hole |= read[static_cast<std::size_t>(c)] == bh && rest % 3 != 0;
            }
            if (on_hole) continue;
            detail::probe_world(dims, bh, start, tokens, true, 4000, probe);
            ++out.worlds;
        }
    }
    detail::probe_world(dims, Coord{4, 4}, start, {}, false, 4000, probe);
    ++out.worlds;

    out.init_next_ring = probe.init_next_ring;
    out.opening_step = probe.opening_step;
    out.next_ring_step = probe.next_ring_step;
    out.first_ring_step = probe.first_ring_step;
    return out;
}

/// Audited once per process.
inline const MagicNumberAudit& magic_number_audit() {
    static const MagicNumberAudit audit = audit_magic_number();
    return audit;
}

}  // namespace bhs
