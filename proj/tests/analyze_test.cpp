#include "bhs/analyze.hpp"

#include <gtest/gtest.h>

#include <string>
#include <tuple>
#include <vector>

using namespace bhs;

namespace {

// Straight transcription of the decision table over the textual form.
AnalyzeOutcome table(const std::string& s, int carried) {
    std::vector<std::string> sym;
    for (std::size_t i = 0; i < s.size(); i += 2) sym.push_back(s.substr(i, 2));
    int t2 = 0;
    bool has_b = false, tt = false;
    for (std::size_t i = 0; i < sym.size(); ++i) {
        t2 += sym[i] == "t2";
        has_b |= sym[i][0] == 'b';
        if (i + 1 < sym.size()) tt |= sym[i][0] == 't' && sym[i + 1][0] == 't';
    }
    if (!has_b || s == "b1t1b1t1b1t1b2t2b2t2b2t2") return AnalyzeOutcome::DescendSafe;
    if (t2 < 3) return carried == 1 ? AnalyzeOutcome::LocateByTwoTokenNode : AnalyzeOutcome::BlackHoleInCurrentNextRing;
    if (tt) return sym[0][0] == 'b' ? AnalyzeOutcome::WaitToMeet : AnalyzeOutcome::SeekEastToMeet;
    return AnalyzeOutcome::DescendThenBlackHoleInNextRing;
}

}  // namespace

TEST(Analyze, ParseRoundTrips) {
    auto s = ObservationSequence::parse("b1t2b2t1");
    EXPECT_EQ(s.size(), 4);
    EXPECT_EQ(s.str(), "b1t2b2t1");
    EXPECT_EQ(s.count(Symbol::T2), 1);
    EXPECT_THROW(ObservationSequence::parse("b3"), UsageError);
    EXPECT_THROW(ObservationSequence::parse("t"), UsageError);
}

TEST(Analyze, CapacityIsBounded) {
    ObservationSequence s;
    for (int i = 0; i < ObservationSequence::kCapacity; ++i) s.push_ring(1);
    EXPECT_THROW(s.push_ring(1), UsageError);
}

TEST(Analyze, WorkedSequences) {
    const std::vector<std::tuple<std::string, int, AnalyzeOutcome>> cases = {
        {"b1t1b1t1b1t1b2t2b2t2b2t2", 2, AnalyzeOutcome::DescendSafe},
        {"t1t1t1t2t2t2", 2, AnalyzeOutcome::DescendSafe},
        {"t1t1t1b1t1t1t1", 1, AnalyzeOutcome::LocateByTwoTokenNode},
        {"t1t1t1b1t1t1t1", 2, AnalyzeOutcome::BlackHoleInCurrentNextRing},
        {"b1b1t1t1b1b1t1t2b1b1t2t2", 2, AnalyzeOutcome::WaitToMeet},
        {"t1b1b1t1t1b1b1t2t2b1b1t2", 2, AnalyzeOutcome::SeekEastToMeet},
        {"b1t1b1t1b1t1b1t2b1t2b1t2", 2, AnalyzeOutcome::DescendThenBlackHoleInNextRing},
        {"b2t1b2t1b2t1b2t2b2t2b2t2", 2, AnalyzeOutcome::DescendThenBlackHoleInNextRing},
    };
    for (const auto& [text, carried, want] : cases)
        EXPECT_EQ(analyze(ObservationSequence::parse(text), carried), want) << text;
}

TEST(Analyze, AgreesWithTableUpToLengthSeven) {
    const char* syms[] = {"b1", "b2", "t1", "t2"};
    for (int len = 0; len <= 7; ++len) {
        int total = 1;
        for (int i = 0; i < len; ++i) total *= 4;
        for (int code = 0; code < total; ++code) {
            std::string text;
            for (int i = 0, c = code; i < len; ++i, c /= 4) text += syms[c % 4];
            auto seq = ObservationSequence::parse(text);
            for (int carried = 1; carried <= 3; ++carried)
                ASSERT_EQ(analyze(seq, carried), table(text, carried)) << text << " carrying " << carried;
        }
    }
}
