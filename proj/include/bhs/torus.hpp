#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhs {

enum class Direction : std::uint8_t { North, East, South, West, None };

inline constexpr std::array<Direction, 4> kCompass{Direction::North, Direction::East,
                                                   Direction::South, Direction::West};

constexpr Direction opposite(Direction d) noexcept {
    switch (d) {
        case Direction::North: return Direction::South;
        case Direction::East: return Direction::West;
        case Direction::South: return Direction::North;
        case Direction::West: return Direction::East;
        default: return Direction::None;
    }
}

constexpr const char* to_string(Direction d) noexcept {
    switch (d) {
        case Direction::North: return "N";
        case Direction::East: return "E";
        case Direction::South: return "S";
        case Direction::West: return "W";
        default: return "-";
    }
}

inline Direction direction_from_string(const std::string& s) {
    if (s == "N") return Direction::North;
    if (s == "E") return Direction::East;
    if (s == "S") return Direction::South;
    if (s == "W") return Direction::West;
    if (s == "-" || s.empty()) return Direction::None;
    throw std::invalid_argument("unknown direction: " + s);
}

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TorusDims {
    int n = 3;  // rows
    int m = 3;  // columns

    TorusDims() = default;
    TorusDims(int rows, int cols) : n(rows), m(cols) {
        if (n < 3 || m < 3) throw UsageError("torus must be at least 3x3");
    }

    int size() const noexcept { return n * m; }
    friend bool operator==(const TorusDims&, const TorusDims&) = default;
};

/// Row/column position on the torus, always stored reduced.
struct Coord {
    int i = 0;
    int j = 0;

    friend bool operator==(const Coord&, const Coord&) = default;
    friend auto operator<=>(const Coord&, const Coord&) = default;
};

inline Coord wrap(const TorusDims& dims, int i, int j) noexcept {
    i %= dims.n;
    j %= dims.m;
    if (i < 0) i += dims.n;
    if (j < 0) j += dims.m;
    return {i, j};
}

inline int index_of(const TorusDims& dims, Coord c) noexcept { return c.i * dims.m + c.j; }

inline Coord coord_of(const TorusDims& dims, int index) noexcept {
    return {index / dims.m, index % dims.m};
}

// North decreases the row index, East increases the column index.
inline Coord neighbor(const TorusDims& dims, Coord c, Direction d) {
    switch (d) {
        case Direction::North: return wrap(dims, c.i - 1, c.j);
        case Direction::East: return wrap(dims, c.i, c.j + 1);
        case Direction::South: return wrap(dims, c.i + 1, c.j);
        case Direction::West: return wrap(dims, c.i, c.j - 1);
        default: throw UsageError("neighbor() needs a compass direction");
    }
}

enum class TokenOp : std::uint8_t { Put, Pick };

struct TokenCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TokenUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kNodeTokenCap = 3;

/// Everything about the network except the agents: tokens, the black hole and the
/// dangerous-link marks. Marks live on the safe endpoint as a 4-bit port mask.
class World {
public:
    World(TorusDims dims, Coord black_hole)
        : dims_(dims),
          black_hole_(wrap(dims, black_hole.i, black_hole.j)),
          tokens_(static_cast<std::size_t>(dims.size()), 0),
          marks_(static_cast<std::size_t>(dims.size()), 0) {}

    const TorusDims& dims() const noexcept { return dims_; }
    Coord black_hole() const noexcept { return black_hole_; }
    long tick() const noexcept { return tick_; }
    void advance_tick() noexcept { ++tick_; }

    int tokens(Coord c) const noexcept { return tokens_[idx(c)]; }
    const std::vector<std::uint8_t>& token_counts() const noexcept { return tokens_; }

    int total_tokens() const noexcept {
        int sum = 0;
        for (auto t : tokens_) sum += t;
        return sum;
    }

    void apply_token_op(Coord c, TokenOp op, int count) {
        if (count < 0) throw std::invalid_argument("negative token count");
        auto& slot = tokens_[idx(c)];
        if (op == TokenOp::Put) {
            if (slot + count > kNodeTokenCap)
                throw TokenCapExceeded("node (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                                       ") would hold " + std::to_string(slot + count) + " tokens");
            slot = static_cast<std::uint8_t>(slot + count);
        } else {
            if (count > slot)
                throw TokenUnderflow("pick " + std::to_string(count) + " from node (" +
                                     std::to_string(c.i) + "," + std::to_string(c.j) +
                                     ") holding " + std::to_string(slot));
            slot = static_cast<std::uint8_t>(slot - count);
        }
    }

    void mark_link(Coord c, Direction d) {
        if (d == Direction::None) return;
        marks_[idx(c)] |= bit(d);
    }

    bool is_dangerous(Coord c, Direction d) const noexcept {
        return d != Direction::None && (marks_[idx(c)] & bit(d)) != 0;
    }

    /// Port mask of marked links at `c` (bit k set for kCompass[k]).
    std::uint8_t incident_marks(Coord c) const noexcept { return marks_[idx(c)]; }

    const std::vector<std::uint8_t>& mark_masks() const noexcept { return marks_; }

    int mark_count() const noexcept {
        int total = 0;
        for (auto m : marks_)
            for (int b = 0; b < 4; ++b) total += (m >> b) & 1;
        return total;
    }

private:
    std::size_t idx(Coord c) const noexcept {
        return static_cast<std::size_t>(index_of(dims_, c));
    }
    static std::uint8_t bit(Direction d) noexcept {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(d));
    }

    TorusDims dims_;
    Coord black_hole_;
    std::vector<std::uint8_t> tokens_;
    std::vector<std::uint8_t> marks_;
    long tick_ = 0;
};

inline std::vector<Direction> directions_in(std::uint8_t mask) {
    std::vector<Direction> out;
    for (auto d : kCompass)
        if (mask & (1u << static_cast<unsigned>(d))) out.push_back(d);
    return out;
}

/// The four (safe endpoint, port) pairs that lead into `target`.
inline std::array<std::pair<Coord, Direction>, 4> links_into(const TorusDims& dims, Coord target) {
    std::array<std::pair<Coord, Direction>, 4> out{};
    for (std::size_t k = 0; k < 4; ++k) {
        auto d = kCompass[k];
        out[k] = {neighbor(dims, target, d), opposite(d)};
    }
    return out;
}

}  // namespace bhs
