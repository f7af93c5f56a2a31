#pragma once

#include "bhs/scheduler.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace bhs {

inline EventKind event_kind_from_string(const std::string& s) {
    for (auto k : {EventKind::Moved, EventKind::PutTokens, EventKind::PickedTokens, EventKind::Marked,
                   EventKind::Destroyed, EventKind::Met, EventKind::Declared})
        if (s == to_string(k)) return k;
    throw UsageError("unknown event kind: " + s);
}

inline nlohmann::json to_json(const TraceEvent& e) {
    return {{"tick", e.tick},
            {"kind", to_string(e.kind)},
            {"agent", e.agent},
            {"pos", {e.pos.i, e.pos.j}},
            {"dir", to_string(e.dir)},
            {"count", e.count}};
}

inline TraceEvent trace_event_from_json(const nlohmann::json& j) {
    try {
        TraceEvent e;
        e.tick = j.at("tick").get<long>();
        e.kind = event_kind_from_string(j.at("kind").get<std::string>());
        e.agent = j.at("agent").get<int>();
        e.pos = {j.at("pos").at(0).get<int>(), j.at("pos").at(1).get<int>()};
        e.dir = direction_from_string(j.at("dir").get<std::string>());
        e.count = j.at("count").get<int>();
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw UsageError(std::string("malformed trace event: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw UsageError(std::string("malformed trace event: ") + ex.what());
    }
}

inline void write_jsonl(std::ostream& out, const std::vector<TraceEvent>& trace) {
    for (const auto& e : trace) out << to_json(e).dump() << '\n';
}

inline std::vector<TraceEvent> read_jsonl(std::istream& in) {
    std::vector<TraceEvent> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& ex) {
            throw UsageError(std::string("malformed trace line: ") + ex.what());
        }
        out.push_back(trace_event_from_json(j));
    }
    return out;
}

struct ReplayOutcome {
    World world;
    std::vector<Coord> positions;
    std::vector<AgentStatus> status;
    Verdict verdict = Verdict::Incomplete;
    std::string problem;  // first inconsistency, empty if the trace is coherent
    long ticks = 0;
};

/// Rebuilds the final world from the scenario and its event log alone, then judges it
/// the way the scheduler does. Agents with no declaration at the end mean the run was
/// cut short, which is a timeout when the log reaches the budget and a violation
/// otherwise.
inline ReplayOutcome replay_trace(const Scenario& s, const std::vector<TraceEvent>& trace) {
    ReplayOutcome out{World(s.dims, s.black_hole), s.starts,
                      std::vector<AgentStatus>(s.starts.size(), AgentStatus::Alive), Verdict::Incomplete, {}, 0};
    std::vector<int> carried(s.starts.size(), s.tokens_per_agent);
    auto bad = [&out](std::string why) {
        if (out.problem.empty()) out.problem = std::move(why);
    };
    long last_tick = -1;
    for (const auto& e : trace) {
        if (e.agent < 0 || e.agent >= s.k()) {
            bad("event for an unknown agent");
            break;
        }
        if (e.tick < last_tick) bad("events out of order");
        last_tick = e.tick;
        const auto a = static_cast<std::size_t>(e.agent);
        if (out.status[a] != AgentStatus::Alive) bad("event for an agent that already stopped");
        try {
            switch (e.kind) {
                case EventKind::Moved:
                    if (neighbor(s.dims, out.positions[a], e.dir) != e.pos) bad("move does not match position");
                    out.positions[a] = e.pos;
                    break;
                case EventKind::PutTokens:
                    out.world.apply_token_op(e.pos, TokenOp::Put, e.count);
                    carried[a] -= e.count;
                    if (carried[a] < 0) bad("agent put more tokens than it carried");
                    break;
                case EventKind::PickedTokens:
                    out.world.apply_token_op(e.pos, TokenOp::Pick, e.count);
                    carried[a] += e.count;
                    if (carried[a] > kNodeTokenCap) bad("agent carries more than three tokens");
                    break;
                case EventKind::Marked:
                    out.world.mark_link(e.pos, e.dir);
                    if (neighbor(s.dims, e.pos, e.dir) != s.black_hole) bad("marked a link not leading to the black hole");
                    break;
                case EventKind::Destroyed:
                    if (e.pos != s.black_hole) bad("destroyed away from the black hole");
                    out.status[a] = AgentStatus::Destroyed;
                    carried[a] = 0;
                    break;
                case EventKind::Met:
                    break;
                case EventKind::Declared:
                    out.status[a] = AgentStatus::Terminated;
                    break;
            }
        } catch (const std::exception& ex) {
            bad(ex.what());
        }
    }
    out.ticks = last_tick + 1;

    bool alive = false, survivor = false;
    for (auto st : out.status) {
        alive |= st == AgentStatus::Alive;
        survivor |= st != AgentStatus::Destroyed;
    }
    if (!out.problem.empty()) out.verdict = Verdict::Violation;
    else if (alive) out.verdict = last_tick + 1 >= s.tick_budget() ? Verdict::Timeout : Verdict::Violation;
    else out.verdict = survivor && success_predicate(out.world) ? Verdict::Success : Verdict::Incomplete;
    return out;
}

}  // namespace bhs
