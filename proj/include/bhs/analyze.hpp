#pragma once

#include "bhs/torus.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace bhs {

/// b-symbols are sightings on the ring below, t-symbols on the ring being walked.
enum class Symbol : std::uint8_t { B1, B2, T1, T2 };

constexpr const char* to_string(Symbol s) noexcept {
    switch (s) {
        case Symbol::B1: return "b1";
        case Symbol::B2: return "b2";
        case Symbol::T1: return "t1";
        case Symbol::T2: return "t2";
    }
    return "?";
}

constexpr bool is_below(Symbol s) noexcept { return s == Symbol::B1 || s == Symbol::B2; }

/// The sighting string a NextRing pass accumulates. Capacity is fixed so the agent
/// memory stays bounded.
class ObservationSequence {
public:
    static constexpr int kCapacity = 24;

    static ObservationSequence parse(std::string_view text) {
        ObservationSequence s;
        if (text.size() % 2 != 0) throw UsageError("malformed observation sequence");
        for (std::size_t i = 0; i < text.size(); i += 2) {
            char kind = text[i], digit = text[i + 1];
            if ((kind != 'b' && kind != 't') || (digit != '1' && digit != '2'))
                throw UsageError("malformed observation sequence");
            bool two = digit == '2';
            s.push(kind == 'b' ? (two ? Symbol::B2 : Symbol::B1) : (two ? Symbol::T2 : Symbol::T1));
        }
        return s;
    }

    void push(Symbol s) {
        if (len_ == kCapacity) throw UsageError("observation sequence overflow");
        sym_[static_cast<std::size_t>(len_++)] = s;
    }
    void push_below(int tokens) { push(tokens >= 2 ? Symbol::B2 : Symbol::B1); }
    void push_ring(int tokens) { push(tokens >= 2 ? Symbol::T2 : Symbol::T1); }
    void clear() noexcept { len_ = 0; }

    int size() const noexcept { return len_; }
    bool empty() const noexcept { return len_ == 0; }
    Symbol operator[](int i) const { return sym_[static_cast<std::size_t>(i)]; }
    int count(Symbol s) const noexcept {
        return static_cast<int>(std::count(sym_.begin(), sym_.begin() + len_, s));
    }

    std::string str() const {
        std::string out;
        for (int i = 0; i < len_; ++i) out += to_string((*this)[i]);
        return out;
    }

    /// Packs the sequence into one integer for state fingerprints.
    std::uint64_t code() const noexcept {
        std::uint64_t c = static_cast<std::uint64_t>(len_);
        for (int i = 0; i < len_; ++i) c = c * 4 + static_cast<std::uint64_t>((*this)[i]);
        return c;
    }

    friend bool operator==(const ObservationSequence& a, const ObservationSequence& b) {
        return a.len_ == b.len_ && std::equal(a.sym_.begin(), a.sym_.begin() + a.len_, b.sym_.begin());
    }

private:
    std::array<Symbol, kCapacity> sym_{};
    int len_ = 0;
};

enum class AnalyzeOutcome : std::uint8_t {
    DescendSafe,
    LocateByTwoTokenNode,
    BlackHoleInCurrentNextRing,
    WaitToMeet,
    SeekEastToMeet,
    DescendThenBlackHoleInNextRing
};

constexpr const char* to_string(AnalyzeOutcome o) noexcept {
    switch (o) {
        case AnalyzeOutcome::DescendSafe: return "descend_safe";
        case AnalyzeOutcome::LocateByTwoTokenNode: return "locate_by_two_token_node";
        case AnalyzeOutcome::BlackHoleInCurrentNextRing: return "black_hole_in_current_next_ring";
        case AnalyzeOutcome::WaitToMeet: return "wait_to_meet";
        case AnalyzeOutcome::SeekEastToMeet: return "seek_east_to_meet";
        case AnalyzeOutcome::DescendThenBlackHoleInNextRing: return "descend_then_black_hole_in_next_ring";
    }
    return "?";
}

/// Decision taken at the end of a NextRing pass from what was seen and the number of
/// tokens the agent holds after picking up everything at its final node.
inline AnalyzeOutcome analyze(const ObservationSequence& seq, int carried) {
    static const ObservationSequence lone_neighbour =
        ObservationSequence::parse("b1t1b1t1b1t1b2t2b2t2b2t2");

    bool any_below = false;
    for (int i = 0; i < seq.size(); ++i) any_below |= is_below(seq[i]);
    if (seq == lone_neighbour || !any_below) return AnalyzeOutcome::DescendSafe;

    if (seq.count(Symbol::T2) < 3)
        return carried == 1 ? AnalyzeOutcome::LocateByTwoTokenNode
                            : AnalyzeOutcome::BlackHoleInCurrentNextRing;

    for (int i = 0; i + 1 < seq.size(); ++i)
        if (!is_below(seq[i]) && !is_below(seq[i + 1]))
            return is_below(seq[0]) ? AnalyzeOutcome::WaitToMeet : AnalyzeOutcome::SeekEastToMeet;

    return AnalyzeOutcome::DescendThenBlackHoleInNextRing;
}

}  // namespace bhs
