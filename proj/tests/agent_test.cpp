#include "bhs/algorithms.hpp"
#include "bhs/procedures.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace bhs;

namespace {

Perception fresh(int carried) {
    Perception p;
    p.carried = carried;
    return p;
}

}  // namespace

TEST(Perceive, LoneAgentOnFirstTick) {
    Scenario s = make_scenario(Algorithm::BHS32, TorusDims(3, 3), {0, 0}, {{1, 1}, {2, 2}, {1, 2}});
    Simulation sim(s, controller_factory(s));
    Perception p = sim.perceive(sim.agents()[0]);
    EXPECT_EQ(p.arrived, Direction::None);
    EXPECT_EQ(p.node_tokens, 0);
    EXPECT_EQ(p.carried, 2);
    EXPECT_FALSE(p.other_agent);
    EXPECT_EQ(p.incident_danger, 0);
}

TEST(Perceive, CoLocatedAgentsSeeEachOther) {
    struct Stay final : Controller {
        Action step(const Perception&) override { return {}; }
        std::uint64_t state_key() const override { return 0; }
        std::string_view name() const override { return "stay"; }
    };
    Scenario s = make_scenario(Algorithm::BHS33, TorusDims(3, 3), {0, 0}, {{1, 1}, {1, 2}});
    int made = 0;
    Simulation sim(s, [&]() -> std::unique_ptr<Controller> {
        if (made++ == 0) return make_controller(Algorithm::BHS33);
        return std::make_unique<Stay>();
    });
    EXPECT_FALSE(sim.perceive(sim.agents()[0]).other_agent);
    // Agent 0 puts two tokens and steps East onto agent 1.
    sim.step_round();
    EXPECT_EQ(sim.agents()[0].pos, (Coord{1, 2}));
    EXPECT_TRUE(sim.perceive(sim.agents()[0]).other_agent);
    EXPECT_TRUE(sim.perceive(sim.agents()[1]).other_agent);
}

TEST(CautiousWalk, ExpansionLeavesTheRequestedTokens) {
    auto east = cautious_walk_expansion(Direction::East, 2, 0, 2);
    ASSERT_EQ(east.size(), 3u);
    EXPECT_EQ(east[0].move, Direction::East);
    EXPECT_EQ(east[0].token_op, TokenOp::Put);
    EXPECT_EQ(east[0].token_count, 2);
    EXPECT_EQ(east[1].move, Direction::West);
    EXPECT_FALSE(east[1].has_token_op());
    EXPECT_EQ(east[2].move, Direction::East);
    EXPECT_EQ(east[2].token_op, TokenOp::Pick);
    EXPECT_EQ(east[2].token_count, 2);

    // one token already on the node: only two more are released
    auto south = cautious_walk_expansion(Direction::South, 3, 1, 2);
    EXPECT_EQ(south[0].token_count, 2);
    EXPECT_EQ(south[2].token_count, 2);
    EXPECT_THROW(cautious_walk_expansion(Direction::East, 3, 0, 2), UsageError);
}

// Follow the mark-all script from each side of w and collect the marks it places.
TEST(MarkAll, PathMarksExactlyTheFourLinksIntoW) {
    for (auto [n, m] : {std::pair{3, 3}, std::pair{4, 4}}) {
        TorusDims d(n, m);
        const Coord w{1, 1};
        std::set<std::pair<int, int>> want;
        for (auto [from, dir] : links_into(d, w)) want.insert({index_of(d, from), static_cast<int>(dir)});
        for (auto toward : kCompass) {
            Coord pos = neighbor(d, w, opposite(toward));
            const Coord start = pos;
            std::set<std::pair<int, int>> got;
            for (const Action& a : mark_all_path(toward)) {
                if (a.mark != Direction::None) got.insert({index_of(d, pos), static_cast<int>(a.mark)});
                pos = neighbor(d, pos, a.move);
                EXPECT_NE(pos, w);
            }
            EXPECT_EQ(got, want) << n << "x" << m << " toward " << to_string(toward);
            EXPECT_EQ(pos, start);
        }
    }
}

TEST(Controllers, Bhs33OpensWithTwoTokensAndAStepEast) {
    auto c = make_controller(Algorithm::BHS33);
    Action a = c->step(fresh(3));
    EXPECT_EQ(a.token_op, TokenOp::Put);
    EXPECT_EQ(a.token_count, 2);
    EXPECT_EQ(a.move, Direction::East);
}

TEST(Controllers, DangerMakesAnAgentStop) {
    for (auto algo : {Algorithm::BHS33, Algorithm::BHS42}) {
        auto c = make_controller(algo);
        Action a = c->step(fresh(default_tokens(algo)));
        Perception p = fresh(default_tokens(algo) - 2);
        p.incident_danger = 1;
        // the danger is noticed at the next node check, a few ticks later at most
        for (int t = 0; t < 6 && !a.declare; ++t) {
            p.arrived = a.move;
            a = c->step(p);
        }
        ASSERT_TRUE(a.declare.has_value()) << to_string(algo);
        EXPECT_EQ(*a.declare, Declaration::Terminated);
    }
}

TEST(Controllers, SameStateAndPerceptionGiveSameAction) {
    for (auto algo : {Algorithm::BHS33, Algorithm::BHS42, Algorithm::BHS32}) {
        auto a = make_controller(algo);
        auto b = make_controller(algo);
        Perception p = fresh(default_tokens(algo));
        for (int t = 0; t < 60; ++t) {
            ASSERT_EQ(a->state_key(), b->state_key());
            Action x = a->step(p), y = b->step(p);
            EXPECT_EQ(x.move, y.move);
            EXPECT_EQ(x.token_count, y.token_count);
            p.arrived = x.move;
        }
    }
}
