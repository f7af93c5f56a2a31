#pragma once

#include "bhs/algorithms.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace bhs {

enum class SweepMode : std::uint8_t { Exhaustive, Sampled };

struct SweepConfig {
    Algorithm algorithm = Algorithm::BHS33;
    int n_min = 3, n_max = 3;
    int m_min = 3, m_max = 3;
    int k = 3;
    SweepMode mode = SweepMode::Exhaustive;
    long samples = 0;
    std::uint64_t seed = 1;
    int jobs = 0;                // 0 picks BHS_JOBS or the hardware concurrency
    long max_ticks = 0;          // 0 keeps the scenario default
    int tokens_per_agent = 0;    // 0 keeps the algorithm default
    int magic_number = kDefaultMagicNumber;
    bool translation_reduce = false;  // only black holes at (0,0)
    int keep_failures = 20;           // failure records kept in the report
};

inline int default_jobs() {
    if (const char* env = std::getenv("BHS_JOBS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

inline long binomial(long n, long r) {
    if (r < 0 || r > n) return 0;
    long out = 1;
    for (long i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

inline Scenario scenario_for(const SweepConfig& cfg, TorusDims dims, Coord bh, std::vector<Coord> starts) {
    Scenario s = make_scenario(cfg.algorithm, dims, bh, std::move(starts));
    if (cfg.tokens_per_agent > 0) s.tokens_per_agent = cfg.tokens_per_agent;
    s.magic_number = cfg.magic_number;
    s.max_ticks = cfg.max_ticks;
    return s;
}

inline void check_config(const SweepConfig& cfg) {
    if (cfg.n_min < 3 || cfg.m_min < 3) throw UsageError("torus must be at least 3x3");
    if (cfg.n_min > cfg.n_max || cfg.m_min > cfg.m_max) throw UsageError("empty dimension range");
    if (cfg.k < 1) throw UsageError("k must be positive");
    if (cfg.k > cfg.n_min * cfg.m_min - 1)
        throw UsageError("k = " + std::to_string(cfg.k) + " does not fit beside the black hole on " +
                         std::to_string(cfg.n_min) + "x" + std::to_string(cfg.m_min));
    if (cfg.mode == SweepMode::Sampled && cfg.samples <= 0) throw UsageError("sample count must be positive");
}

/// Every (black hole, unordered start set) pair over the configured sizes, in a fixed
/// order: dims row-major, then black hole index, then start sets in lexicographic order
/// of their sorted node indices.
inline std::vector<Scenario> enumerate_scenarios(const SweepConfig& cfg) {
    check_config(cfg);
    std::vector<Scenario> out;
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
            const TorusDims dims(n, m);
            const int size = dims.size();
            const int holes = cfg.translation_reduce ? 1 : size;
            for (int bh = 0; bh < holes; ++bh) {
                std::vector<int> free;
                for (int c = 0; c < size; ++c)
                    if (c != bh) free.push_back(c);
                std::vector<int> pick(static_cast<std::size_t>(cfg.k));
                for (int q = 0; q < cfg.k; ++q) pick[static_cast<std::size_t>(q)] = q;
                const int f = static_cast<int>(free.size());
                for (;;) {
                    std::vector<Coord> starts;
                    for (int q : pick) starts.push_back(coord_of(dims, free[static_cast<std::size_t>(q)]));
                    out.push_back(scenario_for(cfg, dims, coord_of(dims, bh), std::move(starts)));
                    int q = cfg.k - 1;
                    while (q >= 0 && pick[static_cast<std::size_t>(q)] == f - cfg.k + q) --q;
                    if (q < 0) break;
                    ++pick[static_cast<std::size_t>(q)];
                    for (int r = q + 1; r < cfg.k; ++r)
                        pick[static_cast<std::size_t>(r)] = pick[static_cast<std::size_t>(r - 1)] + 1;
                }
            }
        }
    }
    return out;
}

/// `cfg.samples` scenarios drawn uniformly (size, then black hole, then start set) from
/// a generator seeded with `cfg.seed`.
inline std::vector<Scenario> sample_scenarios(const SweepConfig& cfg) {
    check_config(cfg);
    std::mt19937_64 rng(cfg.seed);
    auto uniform = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::vector<Scenario> out;
    out.reserve(static_cast<std::size_t>(cfg.samples));
    for (long s = 0; s < cfg.samples; ++s) {
        const TorusDims dims(uniform(cfg.n_min, cfg.n_max), uniform(cfg.m_min, cfg.m_max));
        const int bh = cfg.translation_reduce ? 0 : uniform(0, dims.size() - 1);
        std::vector<int> free;
        for (int c = 0; c < dims.size(); ++c)
            if (c != bh) free.push_back(c);
        std::vector<int> chosen;
        std::sample(free.begin(), free.end(), std::back_inserter(chosen), cfg.k, rng);
        std::sort(chosen.begin(), chosen.end());
        std::vector<Coord> starts;
        for (int c : chosen) starts.push_back(coord_of(dims, c));
        out.push_back(scenario_for(cfg, dims, coord_of(dims, bh), std::move(starts)));
    }
    return out;
}

struct Verification {
    RunResult run;
    std::vector<std::string> problems;  // cross-check failures on top of the scheduler's own

    Verdict verdict() const noexcept { return problems.empty() ? run.verdict : Verdict::Violation; }
    std::string reason() const { return problems.empty() ? run.reason : problems.front(); }
};

/// Runs one scenario and re-checks the outcome against the ground truth.
inline Verification verify_scenario(const Scenario& s) {
    Verification v;
    v.run = run_with(s, controller_factory(s));
    const RunResult& r = v.run;

    if (r.ok()) {
        if (r.survivors < 1) v.problems.push_back("success without a survivor");
        auto expected = links_into(s.dims, s.black_hole);
        std::vector<std::pair<Coord, Direction>> want(expected.begin(), expected.end()), got = r.marks;
        auto key = [&s](const std::pair<Coord, Direction>& x) {
            return index_of(s.dims, x.first) * 8 + static_cast<int>(x.second);
        };
        auto by_key = [&key](const auto& a, const auto& b) { return key(a) < key(b); };
        std::sort(want.begin(), want.end(), by_key);
        std::sort(got.begin(), got.end(), by_key);
        if (want != got) v.problems.push_back("mark set differs from the links into the black hole");
    }
    if (!s.exploratory()) {
        const int dead = static_cast<int>(r.deaths.size());
        if (s.algorithm == Algorithm::BHS32 && dead > 2) v.problems.push_back("more than two agents destroyed");
        if (s.algorithm == Algorithm::BHS42) {
            int south = 0, east = 0;
            for (const auto& d : r.deaths) {
                south += d.via == Direction::South;
                east += d.via == Direction::East;
            }
            if (dead > 3 || south > 1 || east > 2) v.problems.push_back("destruction bound exceeded");
        }
    }
    return v;
}

struct SweepFailure {
    Scenario scenario;
    Verdict verdict = Verdict::Violation;
    std::string reason;
    long ticks = 0;
};

struct SizeStats {
    long runs = 0;
    long max_ticks = 0;
};

struct SweepReport {
    SweepConfig config;
    bool exploratory = false;
    long total = 0;
    std::map<Verdict, long> verdicts;
    long max_ticks = 0;
    int max_destroyed = 0;
    long sync_checks = 0;
    int max_three_token_nodes = 0;
    std::map<std::pair<int, int>, SizeStats> by_size;
    std::vector<SweepFailure> failures;  // first few, in scenario order
    std::optional<Scenario> first_counterexample;
    std::uint64_t hash = 0;  // over every per-scenario outcome, in scenario order

    long count(Verdict v) const {
        auto it = verdicts.find(v);
        return it == verdicts.end() ? 0 : it->second;
    }
    long failed() const { return total - count(Verdict::Success); }
    bool passed() const { return exploratory || failed() == 0; }
};

/// Runs `scenarios` on `jobs` threads. Each worker takes a fixed stride of indices and
/// writes into its own slots, so the merged report does not depend on `jobs`.
inline SweepReport sweep_scenarios(const SweepConfig& cfg, const std::vector<Scenario>& scenarios,
                                   const std::function<void(long)>& progress = {}) {
    struct Slot {
        Verdict verdict = Verdict::Incomplete;
        std::string reason;
        long ticks = 0;
        int destroyed = 0;
        long sync_checks = 0;
        int towers = 0;
        std::uint64_t hash = 0;
    };
    std::vector<Slot> slots(scenarios.size());
    const int jobs = std::max(1, std::min<int>(cfg.jobs > 0 ? cfg.jobs : default_jobs(),
                                               static_cast<int>(std::max<std::size_t>(1, scenarios.size()))));
    auto work = [&](int w) {
        for (std::size_t i = static_cast<std::size_t>(w); i < scenarios.size(); i += static_cast<std::size_t>(jobs)) {
            Slot& out = slots[i];
            try {
                Verification v = verify_scenario(scenarios[i]);
                out.verdict = v.verdict();
                out.reason = v.reason();
                out.ticks = v.run.ticks;
                out.destroyed = v.run.destroyed;
                out.sync_checks = v.run.sync_checks;
                out.towers = v.run.max_three_token_nodes;
                out.hash = v.run.trace_hash;
            } catch (const std::exception& e) {
                out.verdict = Verdict::Violation;
                out.reason = e.what();
            }
            if (w == 0 && progress) progress(static_cast<long>(i));
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    SweepReport rep;
    rep.config = cfg;
    rep.exploratory = !scenarios.empty() && scenarios.front().exploratory();
    Fingerprint h;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Slot& s = slots[i];
        const Scenario& sc = scenarios[i];
        ++rep.total;
        ++rep.verdicts[s.verdict];
        rep.max_ticks = std::max(rep.max_ticks, s.ticks);
        rep.max_destroyed = std::max(rep.max_destroyed, s.destroyed);
        rep.sync_checks += s.sync_checks;
        rep.max_three_token_nodes = std::max(rep.max_three_token_nodes, s.towers);
        auto& size = rep.by_size[{sc.dims.n, sc.dims.m}];
        ++size.runs;
        size.max_ticks = std::max(size.max_ticks, s.ticks);
        h.mix(static_cast<int>(s.verdict), s.ticks, s.destroyed, s.hash);
        if (s.verdict != Verdict::Success) {
            if (!rep.first_counterexample) rep.first_counterexample = sc;
            if (static_cast<int>(rep.failures.size()) < cfg.keep_failures)
                rep.failures.push_back({sc, s.verdict, s.reason, s.ticks});
        }
    }
    rep.hash = h.value();
    return rep;
}

inline SweepReport sweep(const SweepConfig& cfg, const std::function<void(long)>& progress = {}) {
    auto scenarios = cfg.mode == SweepMode::Exhaustive ? enumerate_scenarios(cfg) : sample_scenarios(cfg);
    return sweep_scenarios(cfg, scenarios, progress);
}

// ---- report document ---------------------------------------------------------------

inline nlohmann::json to_json(const Scenario& s) {
    nlohmann::json starts = nlohmann::json::array();
    for (auto c : s.starts) starts.push_back({c.i, c.j});
    return {{"algorithm", to_string(s.algorithm)},
            {"dims", {s.dims.n, s.dims.m}},
            {"black_hole", {s.black_hole.i, s.black_hole.j}},
            {"starts", starts},
            {"tokens_per_agent", s.tokens_per_agent},
            {"magic_number", s.magic_number},
            {"max_ticks", s.tick_budget()}};
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    try {
        Scenario s;
        s.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
        s.dims = TorusDims(j.at("dims").at(0).get<int>(), j.at("dims").at(1).get<int>());
        s.black_hole = {j.at("black_hole").at(0).get<int>(), j.at("black_hole").at(1).get<int>()};
        for (const auto& c : j.at("starts")) s.starts.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
        s.tokens_per_agent = j.value("tokens_per_agent", default_tokens(s.algorithm));
        s.magic_number = j.value("magic_number", kDefaultMagicNumber);
        s.max_ticks = j.value("max_ticks", 0L);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed scenario: ") + e.what());
    }
}

inline constexpr const char* kExploratoryLabel = "exploratory \xe2\x80\x94 no paper claim";

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return out;
}

inline nlohmann::json to_json(const SweepReport& r) {
    const SweepConfig& c = r.config;
    nlohmann::json j;
    j["algorithm"] = to_string(c.algorithm);
    j["mode"] = c.mode == SweepMode::Exhaustive ? "exhaustive" : "sampled";
    j["n_range"] = {c.n_min, c.n_max};
    j["m_range"] = {c.m_min, c.m_max};
    j["k"] = c.k;
    j["tokens_per_agent"] = c.tokens_per_agent > 0 ? c.tokens_per_agent : default_tokens(c.algorithm);
    j["magic_number"] = c.magic_number;
    if (c.mode == SweepMode::Sampled) {
        j["samples"] = c.samples;
        j["seed"] = c.seed;
    }
    j["translation_reduce"] = c.translation_reduce;
    j["exploratory"] = r.exploratory;
    j["label"] = r.exploratory ? kExploratoryLabel : "claimed";
    j["total"] = r.total;
    j["verdicts"] = {{"success", r.count(Verdict::Success)},
                     {"incomplete", r.count(Verdict::Incomplete)},
                     {"violation", r.count(Verdict::Violation)},
                     {"timeout", r.count(Verdict::Timeout)}};
    j["failed"] = r.failed();
    j["passed"] = r.passed();
    j["max_ticks"] = r.max_ticks;
    j["max_destroyed"] = r.max_destroyed;
    j["sync_checks"] = r.sync_checks;
    j["max_three_token_nodes"] = r.max_three_token_nodes;
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& [nm, st] : r.by_size)
        sizes.push_back({{"n", nm.first}, {"m", nm.second}, {"runs", st.runs}, {"max_ticks", st.max_ticks}});
    j["sizes"] = sizes;
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : r.failures)
        fails.push_back({{"scenario", to_json(f.scenario)},
                         {"verdict", to_string(f.verdict)},
                         {"reason", f.reason},
                         {"ticks", f.ticks}});
    j["failures"] = fails;
    j["first_counterexample"] = r.first_counterexample ? to_json(*r.first_counterexample) : nlohmann::json(nullptr);
    j["report_hash"] = hex64(r.hash);
    return j;
}

}  // namespace bhs
