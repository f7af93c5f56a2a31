#pragma once

#include "bhs/agent.hpp"
#include "bhs/program.hpp"
#include "bhs/torus.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bhs {

enum class Algorithm : std::uint8_t { BHS33, BHS42, BHS32 };

constexpr const char* to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::BHS33: return "bhs33";
        case Algorithm::BHS42: return "bhs42";
        case Algorithm::BHS32: return "bhs32";
    }
    return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
    if (s == "bhs33") return Algorithm::BHS33;
    if (s == "bhs42") return Algorithm::BHS42;
    if (s == "bhs32") return Algorithm::BHS32;
    throw UsageError("unknown algorithm: " + s);
}

constexpr int default_tokens(Algorithm a) noexcept { return a == Algorithm::BHS33 ? 3 : 2; }
constexpr int minimum_agents(Algorithm a) noexcept { return a == Algorithm::BHS42 ? 4 : 3; }

inline constexpr int kDefaultMagicNumber = 40;

struct Scenario {
    TorusDims dims;
    Coord black_hole;
    std::vector<Coord> starts;
    Algorithm algorithm = Algorithm::BHS33;
    int tokens_per_agent = 3;
    int magic_number = kDefaultMagicNumber;
    long max_ticks = 0;  // 0 selects 200*n*m*D
    bool record_trace = false;

    int k() const noexcept { return static_cast<int>(starts.size()); }
    long tick_budget() const noexcept {
        return max_ticks > 0 ? max_ticks : 200L * dims.n * dims.m * magic_number;
    }
    /// Configurations outside what the algorithm is claimed to handle.
    bool exploratory() const noexcept {
        if (tokens_per_agent != default_tokens(algorithm)) return true;
        if (algorithm == Algorithm::BHS32) return k() != 3;
        return k() < minimum_agents(algorithm);
    }
};

inline Scenario make_scenario(Algorithm algo, TorusDims dims, Coord bh, std::vector<Coord> starts) {
    Scenario s;
    s.algorithm = algo;
    s.dims = dims;
    s.black_hole = bh;
    s.starts = std::move(starts);
    s.tokens_per_agent = default_tokens(algo);
    return s;
}

/// Rejects malformed scenarios before tick 0.
inline void validate(const Scenario& s) {
    if (s.dims.n < 3 || s.dims.m < 3) throw UsageError("torus must be at least 3x3");
    auto in_range = [&](Coord c) { return c.i >= 0 && c.i < s.dims.n && c.j >= 0 && c.j < s.dims.m; };
    if (!in_range(s.black_hole)) throw UsageError("black hole outside the torus");
    if (s.starts.empty()) throw UsageError("no agents");
    for (std::size_t a = 0; a < s.starts.size(); ++a) {
        if (!in_range(s.starts[a])) throw UsageError("agent start outside the torus");
        if (s.starts[a] == s.black_hole) throw UsageError("agent starts on the black hole");
        for (std::size_t b = 0; b < a; ++b)
            if (s.starts[a] == s.starts[b]) throw UsageError("duplicate agent starts");
    }
    if (s.tokens_per_agent < 1 || s.tokens_per_agent > kNodeTokenCap)
        throw UsageError("tokens per agent must be 1..3");
    if (s.magic_number < 1) throw UsageError("magic number must be positive");
}

enum class Verdict : std::uint8_t { Success, Incomplete, Violation, Timeout };

constexpr const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Success: return "success";
        case Verdict::Incomplete: return "incomplete";
        case Verdict::Violation: return "violation";
        case Verdict::Timeout: return "timeout";
    }
    return "?";
}

enum class EventKind : std::uint8_t { Moved, PutTokens, PickedTokens, Marked, Destroyed, Met, Declared };

constexpr const char* to_string(EventKind k) noexcept {
    switch (k) {
        case EventKind::Moved: return "moved";
        case EventKind::PutTokens: return "put";
        case EventKind::PickedTokens: return "picked";
        case EventKind::Marked: return "marked";
        case EventKind::Destroyed: return "destroyed";
        case EventKind::Met: return "met";
        case EventKind::Declared: return "declared";
    }
    return "?";
}

/// `pos` is the agent position after the event; `count` carries token counts or the
/// declaration (0 terminated, 1 found black hole).
struct TraceEvent {
    long tick = 0;
    EventKind kind = EventKind::Moved;
    int agent = 0;
    Coord pos;
    Direction dir = Direction::None;
    int count = 0;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Death {
    int agent = 0;
    long tick = 0;
    Direction via = Direction::None;
    int tokens_left = 0;  // tokens on the launch node after that tick's token operations
};

struct RunResult {
    Verdict verdict = Verdict::Incomplete;
    std::string reason;
    long ticks = 0;
    int survivors = 0;   // agents not destroyed
    int destroyed = 0;
    int terminated = 0;  // agents that declared
    std::vector<std::pair<Coord, Direction>> marks;
    std::vector<TraceEvent> trace;
    std::uint64_t trace_hash = 0;
    std::vector<Death> deaths;
    std::vector<long> first_ring_big_steps;  // per agent, -1 if it never left FirstRing
    long sync_checks = 0;                    // InitNextRing entries inspected
    int max_three_token_nodes = 0;

    bool ok() const noexcept { return verdict == Verdict::Success; }
};

/// Exactly the four links into the black hole are marked, and nothing else.
inline bool success_predicate(const World& w) {
    const auto& masks = w.mark_masks();
    std::vector<std::uint8_t> expected(masks.size(), 0);
    for (auto [c, d] : links_into(w.dims(), w.black_hole()))
        expected[static_cast<std::size_t>(index_of(w.dims(), c))] |=
            static_cast<std::uint8_t>(1u << static_cast<unsigned>(d));
    return masks == expected;
}

/// The lock-step engine. Owns the world and the agents of one scenario.
class Simulation {
public:
    using Factory = std::function<std::unique_ptr<Controller>()>;

    Simulation(const Scenario& s, const Factory& make) : scenario_(s), world_(s.dims, s.black_hole) {
        validate(s);
        for (int a = 0; a < s.k(); ++a) {
            AgentRecord r;
            r.id = a;
            r.pos = s.starts[static_cast<std::size_t>(a)];
            r.carried = s.tokens_per_agent;
            r.controller = make();
            agents_.push_back(std::move(r));
        }
        result_.first_ring_big_steps.assign(static_cast<std::size_t>(s.k()), -1);
        colocated_.assign(static_cast<std::size_t>(s.k()), false);
    }

    const World& world() const noexcept { return world_; }
    const std::vector<AgentRecord>& agents() const noexcept { return agents_; }
    const RunResult& result() const noexcept { return result_; }
    bool finished() const noexcept { return finished_; }
    int destroyed_tokens() const noexcept { return destroyed_tokens_; }

    Perception perceive(const AgentRecord& a) const {
        Perception p;
        p.arrived = a.last_move;
        p.node_tokens = world_.tokens(a.pos);
        p.carried = a.carried;
        p.incident_danger = world_.incident_marks(a.pos);
        for (const auto& o : agents_)
            if (o.id != a.id && o.status == AgentStatus::Alive && o.pos == a.pos) p.other_agent = true;
        return p;
    }

    /// One global time unit. Returns false once the run has a verdict.
    bool step_round() {
        if (finished_) return false;
        const long tick = world_.tick();
        const std::size_t k = agents_.size();

        std::vector<Perception> seen(k);
        for (const auto& a : agents_)
            if (a.status == AgentStatus::Alive) seen[idx(a.id)] = perceive(a);

        std::vector<std::optional<Action>> actions(k);
        std::vector<PhaseInfo> phases(k);
        for (auto& a : agents_) {
            if (a.status != AgentStatus::Alive) continue;
            try {
                actions[idx(a.id)] = a.controller->step(seen[idx(a.id)]);
            } catch (const std::exception& e) {
                return fail("agent " + std::to_string(a.id) + ": " + e.what());
            }
            phases[idx(a.id)] = a.controller->phase();
        }
        check_synchronization(phases);
        if (finished_) return false;

        for (auto& a : agents_) {
            const auto& act = actions[idx(a.id)];
            if (!act || !act->has_token_op()) continue;
            try {
                if (act->token_count < 0) throw std::invalid_argument("negative token count");
                if (act->token_op == TokenOp::Put) {
                    if (act->token_count > a.carried)
                        throw TokenUnderflow("puts more tokens than it carries");
                    world_.apply_token_op(a.pos, TokenOp::Put, act->token_count);
                    a.carried -= act->token_count;
                } else {
                    if (a.carried + act->token_count > kNodeTokenCap)
                        throw TokenCapExceeded("would carry more than three tokens");
                    world_.apply_token_op(a.pos, TokenOp::Pick, act->token_count);
                    a.carried += act->token_count;
                }
            } catch (const std::exception& e) {
                return fail("agent " + std::to_string(a.id) + " token op: " + e.what());
            }
            emit(tick, act->token_op == TokenOp::Put ? EventKind::PutTokens : EventKind::PickedTokens,
                 a, Direction::None, act->token_count);
        }

        for (auto& a : agents_) {
            const auto& act = actions[idx(a.id)];
            if (!act || act->mark == Direction::None) continue;
            world_.mark_link(a.pos, act->mark);
            emit(tick, EventKind::Marked, a, act->mark, 0);
            if (neighbor(world_.dims(), a.pos, act->mark) != world_.black_hole())
                return fail("agent " + std::to_string(a.id) + " marked a link not leading to the black hole");
        }

        std::vector<int> launch_tokens(k, 0);
        for (auto& a : agents_) {
            auto& act = actions[idx(a.id)];
            if (!act) continue;
            launch_tokens[idx(a.id)] = world_.tokens(a.pos);
            a.last_move = act->move;
            if (act->move != Direction::None) {
                a.pos = neighbor(world_.dims(), a.pos, act->move);
                emit(tick, EventKind::Moved, a, act->move, 0);
            }
        }

        for (auto& a : agents_) {
            if (!actions[idx(a.id)] || a.pos != world_.black_hole()) continue;
            a.status = AgentStatus::Destroyed;
            destroyed_tokens_ += a.carried;
            result_.deaths.push_back({a.id, tick, a.last_move, launch_tokens[idx(a.id)]});
            emit(tick, EventKind::Destroyed, a, a.last_move, a.carried);
            a.carried = 0;
        }

        for (auto& a : agents_) {
            bool now = false;
            if (a.status == AgentStatus::Alive)
                for (const auto& o : agents_)
                    if (o.id != a.id && o.status == AgentStatus::Alive && o.pos == a.pos) now = true;
            if (now && !colocated_[idx(a.id)]) emit(tick, EventKind::Met, a, Direction::None, 0);
            colocated_[idx(a.id)] = now;
        }

        for (auto& a : agents_) {
            const auto& act = actions[idx(a.id)];
            if (!act || !act->declare || a.status != AgentStatus::Alive) continue;
            a.status = AgentStatus::Terminated;
            a.declared = act->declare;
            emit(tick, EventKind::Declared, a, Direction::None,
                 *act->declare == Declaration::FoundBlackHole ? 1 : 0);
        }

        for (std::size_t a = 0; a < k; ++a) {
            if (result_.first_ring_big_steps[a] >= 0 || !actions[a]) continue;
            if (phases[a].inr_entry) result_.first_ring_big_steps[a] = phases[a].big_steps;
        }

        world_.advance_tick();
        check_invariants();
        if (!finished_) decide();
        return !finished_;
    }

    RunResult run() {
        while (step_round()) {
        }
        return result_;
    }

private:
    static std::size_t idx(int id) { return static_cast<std::size_t>(id); }

    void emit(long tick, EventKind kind, const AgentRecord& a, Direction d, int count) {
        TraceEvent e{tick, kind, a.id, a.pos, d, count};
        hash_.mix(e.tick, static_cast<int>(e.kind), e.agent, e.pos.i, e.pos.j, static_cast<int>(e.dir), e.count);
        if (scenario_.record_trace) result_.trace.push_back(e);
    }

    bool fail(std::string why) {
        finish(Verdict::Violation, std::move(why));
        return false;
    }

    void finish(Verdict v, std::string why) {
        finished_ = true;
        result_.verdict = v;
        result_.reason = std::move(why);
        result_.ticks = world_.tick();
        result_.trace_hash = hash_.value();
        result_.survivors = result_.destroyed = result_.terminated = 0;
        for (const auto& a : agents_) {
            if (a.status == AgentStatus::Destroyed) ++result_.destroyed;
            else ++result_.survivors;
            if (a.status == AgentStatus::Terminated) ++result_.terminated;
        }
        result_.marks.clear();
        const auto& masks = world_.mark_masks();
        for (int c = 0; c < world_.dims().size(); ++c)
            for (auto d : directions_in(masks[idx(c)]))
                result_.marks.emplace_back(coord_of(world_.dims(), c), d);
    }

    // Property 1: whenever some agent opens InitNextRing, every other live agent also
    // opens it, or stands still with its homebase tokens down, or has no homebase.
    void check_synchronization(const std::vector<PhaseInfo>& phases) {
        if (scenario_.algorithm != Algorithm::BHS32) return;
        for (const auto& a : agents_) {
            if (a.status != AgentStatus::Alive || !phases[idx(a.id)].inr_entry) continue;
            ++result_.sync_checks;
            for (const auto& o : agents_) {
                if (o.id == a.id || o.status != AgentStatus::Alive) continue;
                const auto& p = phases[idx(o.id)];
                bool fine = p.inr_entry || !p.holds_homebase || p.idle_ahead >= kInitWindow - 1;
                if (!fine) {
                    fail("synchronization: agent " + std::to_string(a.id) +
                         " opened InitNextRing while agent " + std::to_string(o.id) + " was in " +
                         to_string(p.phase));
                    return;
                }
            }
        }
    }

    void check_invariants() {
        int carried = 0;
        for (const auto& a : agents_) carried += a.carried;
        if (world_.total_tokens() + carried + destroyed_tokens_ != scenario_.k() * scenario_.tokens_per_agent)
            return void(fail("token conservation broken"));
        if (world_.tokens(world_.black_hole()) != 0) return void(fail("tokens on the black hole"));
        if (world_.mark_count() < last_mark_count_) return void(fail("marks removed"));
        last_mark_count_ = world_.mark_count();

        int towers = 0;
        for (auto t : world_.token_counts()) towers += t == 3;
        result_.max_three_token_nodes = std::max(result_.max_three_token_nodes, towers);

        if (scenario_.exploratory()) return;
        const int dead = static_cast<int>(result_.deaths.size());
        if (scenario_.algorithm == Algorithm::BHS32) {
            if (dead > 2) return void(fail("more than two agents destroyed"));
            if (towers > 1) return void(fail("more than one node holds three tokens"));
        }
        if (scenario_.algorithm == Algorithm::BHS42) {
            int south = 0, east = 0;
            for (const auto& d : result_.deaths) {
                if (d.via == Direction::South) {
                    ++south;
                    if (d.tokens_left < 2) return void(fail("South death without two tokens left"));
                } else if (d.via == Direction::East) {
                    ++east;
                    if (d.tokens_left < 1) return void(fail("East death without a token left"));
                } else {
                    return void(fail("death entering neither South nor East"));
                }
            }
            if (dead > 3 || south > 1 || east > 2) return void(fail("destruction bound exceeded"));
        }
    }

    void decide() {
        bool any_alive = false;
        for (const auto& a : agents_) any_alive |= a.status == AgentStatus::Alive;
        if (!any_alive) {
            bool survivor = std::any_of(agents_.begin(), agents_.end(),
                                        [](const AgentRecord& a) { return a.status != AgentStatus::Destroyed; });
            if (survivor && success_predicate(world_)) finish(Verdict::Success, "");
            else finish(Verdict::Incomplete, survivor ? "marks incomplete" : "all agents destroyed");
            return;
        }
        if (world_.tick() >= scenario_.tick_budget()) finish(Verdict::Timeout, "tick budget exhausted");
    }

    static constexpr int kInitWindow = 12;

    Scenario scenario_;
    World world_;
    std::vector<AgentRecord> agents_;
    std::vector<bool> colocated_;
    RunResult result_;
    Fingerprint hash_;
    int destroyed_tokens_ = 0;
    int last_mark_count_ = 0;
    bool finished_ = false;
};

inline RunResult run_with(const Scenario& s, const Simulation::Factory& make) {
    Simulation sim(s, make);
    return sim.run();
}

}  // namespace bhs
