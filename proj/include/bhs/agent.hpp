#pragma once

#include "bhs/torus.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bhs {

/// What an agent sees at the start of a time unit.
struct Perception {
    Direction arrived = Direction::None;  // travel direction of its own last move
    int node_tokens = 0;
    int carried = 0;
    bool other_agent = false;
    std::uint8_t incident_danger = 0;  // port mask of marked links at this node

    bool danger() const noexcept { return incident_danger != 0; }
    friend bool operator==(const Perception&, const Perception&) = default;
};

enum class Declaration : std::uint8_t { Terminated, FoundBlackHole };

constexpr const char* to_string(Declaration d) noexcept {
    return d == Declaration::FoundBlackHole ? "found_black_hole" : "terminated";
}

/// One time unit of behaviour: token operation, then marking, then move.
struct Action {
    TokenOp token_op = TokenOp::Put;
    int token_count = 0;
    Direction mark = Direction::None;
    Direction move = Direction::None;
    std::optional<Declaration> declare;

    static Action stay() { return {}; }
    static Action go(Direction d) {
        Action a;
        a.move = d;
        return a;
    }
    static Action finish(Declaration d) {
        Action a;
        a.declare = d;
        return a;
    }
    Action& put(int k) {
        token_op = TokenOp::Put;
        token_count = k;
        return *this;
    }
    Action& pick(int k) {
        token_op = TokenOp::Pick;
        token_count = k;
        return *this;
    }
    Action& marking(Direction d) {
        mark = d;
        return *this;
    }

    bool has_token_op() const noexcept { return token_count != 0; }
    friend bool operator==(const Action&, const Action&) = default;
};

/// Thrown by controllers when a perception contradicts their protocol.
struct ProtocolViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Phase : std::uint8_t {
    Start,
    FirstRing,
    InitNextRing,
    NextRing,
    Analyze,
    BlackHoleInNextRing,
    Meeting,
    Colocated,
    MarkAll,
    Clean,
    Explore,   // plain ring exploration of the simpler algorithms
    Locate,    // two-token disambiguation walk
    Done
};

constexpr const char* to_string(Phase p) noexcept {
    switch (p) {
        case Phase::Start: return "start";
        case Phase::FirstRing: return "first_ring";
        case Phase::InitNextRing: return "init_next_ring";
        case Phase::NextRing: return "next_ring";
        case Phase::Analyze: return "analyze";
        case Phase::BlackHoleInNextRing: return "black_hole_in_next_ring";
        case Phase::Meeting: return "meeting";
        case Phase::Colocated: return "colocated";
        case Phase::MarkAll: return "mark_all";
        case Phase::Clean: return "clean_first_ring";
        case Phase::Explore: return "explore";
        case Phase::Locate: return "locate";
        case Phase::Done: return "done";
    }
    return "?";
}

/// Harness-side view of a controller's progress; never fed back to the controller.
struct PhaseInfo {
    Phase phase = Phase::Start;
    long big_steps = 0;          // big-steps completed in the first-ring procedure
    bool inr_entry = false;      // the action just produced opens InitNextRing
    int idle_ahead = 0;          // further time units it is committed to stand still
    bool holds_homebase = false; // has homebase tokens lying on the torus
};

/// A constant-memory agent program. `step` consumes one perception per time unit.
class Controller {
public:
    virtual ~Controller() = default;
    virtual Action step(const Perception& p) = 0;
    /// Fingerprint of the full automaton state (program point plus bounded memory).
    virtual std::uint64_t state_key() const = 0;
    virtual PhaseInfo phase() const { return {}; }
    virtual std::string_view name() const = 0;
};

enum class AgentStatus : std::uint8_t { Alive, Destroyed, Terminated };

constexpr const char* to_string(AgentStatus s) noexcept {
    switch (s) {
        case AgentStatus::Alive: return "alive";
        case AgentStatus::Destroyed: return "destroyed";
        case AgentStatus::Terminated: return "terminated";
    }
    return "?";
}

struct AgentRecord {
    int id = 0;
    Coord pos;
    int carried = 0;
    AgentStatus status = AgentStatus::Alive;
    Direction last_move = Direction::None;
    std::optional<Declaration> declared;
    std::unique_ptr<Controller> controller;
};

}  // namespace bhs
