#include "bhs/harness.hpp"

#include <gtest/gtest.h>

using namespace bhs;

TEST(Bhs33, ExhaustiveThreeByThree) {
    SweepConfig cfg;
    cfg.algorithm = Algorithm::BHS33;
    SweepReport r = sweep(cfg);
    EXPECT_EQ(r.total, 504);
    EXPECT_EQ(r.failed(), 0) << (r.failures.empty() ? "" : r.failures.front().reason);
}

TEST(Bhs33, ProbesSouthWithThreeTokensAfterTwoSightings) {
    // A lone agent on a safe ring: it sees its own homebase token twice, then drops
    // the homebase token into the three-token probe South.
    Scenario s = make_scenario(Algorithm::BHS33, TorusDims(3, 3), {2, 2}, {{0, 0}});
    s.record_trace = true;
    s.max_ticks = 40;
    RunResult r = run_with(s, controller_factory(s));
    bool probed = false;
    for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) {
        const auto& e = r.trace[i];
        if (e.kind == EventKind::PutTokens && r.trace[i + 1].kind == EventKind::Moved &&
            r.trace[i + 1].dir == Direction::South) {
            EXPECT_EQ(e.count, 2);  // plus the homebase token already on the node
            probed = true;
            break;
        }
    }
    EXPECT_TRUE(probed);
}

TEST(Bhs33, TwoTokensMeanEastAndThreeMeanSouth) {
    // The black hole right East of an agent: the agent dies and leaves two tokens that
    // the next agent on that ring reads as East.
    Scenario east = make_scenario(Algorithm::BHS33, TorusDims(4, 4), {1, 2}, {{1, 1}, {1, 0}, {3, 3}});
    RunResult r = run_with(east, controller_factory(east));
    ASSERT_TRUE(r.ok()) << r.reason;
    ASSERT_FALSE(r.deaths.empty());
    EXPECT_EQ(r.deaths.front().via, Direction::East);
    EXPECT_EQ(r.deaths.front().tokens_left, 2);
}
