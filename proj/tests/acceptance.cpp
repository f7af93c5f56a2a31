// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
//
// The big sweeps are shared between criteria, so each one runs exactly once.

#include "bhs/analyze.hpp"
#include "bhs/audit.hpp"
#include "bhs/harness.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace bhs;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

struct Swept {
    std::vector<Scenario> scenarios;
    SweepReport report;
};

Swept run_sweep(SweepConfig cfg, std::vector<Scenario> scenarios) {
    auto t0 = std::chrono::steady_clock::now();
    SweepReport rep = sweep_scenarios(cfg, scenarios);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  .. %s %dx%d..%dx%d k=%d %s: %ld runs in %.1fs\n", to_string(cfg.algorithm), cfg.n_min,
                cfg.m_min, cfg.n_max, cfg.m_max, cfg.k,
                cfg.mode == SweepMode::Exhaustive ? "exhaustive" : "sampled", rep.total, secs);
    std::fflush(stdout);
    return {std::move(scenarios), std::move(rep)};
}

SweepConfig config(Algorithm a, int lo, int hi, int k) {
    SweepConfig c;
    c.algorithm = a;
    c.n_min = c.m_min = lo;
    c.n_max = c.m_max = hi;
    c.k = k;
    return c;
}

std::string summary(const SweepReport& r) {
    std::string s = std::to_string(r.count(Verdict::Success)) + "/" + std::to_string(r.total) + " succeeded";
    s += ", max destroyed " + std::to_string(r.max_destroyed);
    if (r.first_counterexample) {
        const auto& f = r.failures.front();
        s += ", first failure: " + std::string(to_string(f.verdict)) + " (" + f.reason + ") " +
             to_json(f.scenario).dump();
    }
    return s;
}

// ---- criterion 4 ------------------------------------------------------------------

// Runs BHS32 with every agent on row 1 or below and the black hole on row 0, so the
// start rings are safe. Returns the FirstRing big-step count of each agent on row 1.
std::vector<long> first_ring_counts(int cols, const std::vector<Coord>& starts) {
    Scenario s = make_scenario(Algorithm::BHS32, TorusDims(5, cols), {0, 0}, starts);
    RunResult r = run_with(s, controller_factory(s));
    std::vector<long> out;
    for (std::size_t a = 0; a < starts.size(); ++a)
        if (starts[a].i == 1) out.push_back(r.first_ring_big_steps[a]);
    return out;
}

void criterion_first_ring() {
    std::string bad;
    long checked = 0;
    for (int n = 3; n <= 6; ++n) {
        for (int a = 0; a < n; ++a) {
            // alone on its ring; the others sit on rings of their own
            for (long got : first_ring_counts(n, {{1, a}, {2, 0}, {3, 0}})) {
                ++checked;
                if (got != 6L * n) bad += " alone n=" + std::to_string(n) + " got " + std::to_string(got);
            }
            for (int b = a + 1; b < n; ++b) {
                for (long got : first_ring_counts(n, {{1, a}, {1, b}, {3, 0}})) {
                    ++checked;
                    if (got != 3L * n) bad += " pair n=" + std::to_string(n) + " got " + std::to_string(got);
                }
                for (int c = b + 1; c < n; ++c) {
                    for (long got : first_ring_counts(n, {{1, a}, {1, b}, {1, c}})) {
                        ++checked;
                        if (got != 2L * n) bad += " trio n=" + std::to_string(n) + " got " + std::to_string(got);
                    }
                }
            }
        }
    }
    report(4, bad.empty(), "FirstRing takes 6n/3n/2n big-steps for 1/2/3 agents, n=3..6",
           bad.empty() ? std::to_string(checked) + " agent runs exact" : bad.substr(0, 300));
}

// ---- criterion 6 ------------------------------------------------------------------

// Branch chain written against the textual form of the sequence.
AnalyzeOutcome oracle(const std::string& seq, int carried) {
    std::vector<std::string> sym;
    for (std::size_t i = 0; i + 1 < seq.size(); i += 2) sym.push_back(seq.substr(i, 2));
    bool has_b = seq.find('b') != std::string::npos;
    if (seq == "b1t1b1t1b1t1b2t2b2t2b2t2" || !has_b) return AnalyzeOutcome::DescendSafe;
    int t2 = 0;
    for (const auto& s : sym) t2 += s == "t2";
    if (t2 < 3)
        return carried == 1 ? AnalyzeOutcome::LocateByTwoTokenNode : AnalyzeOutcome::BlackHoleInCurrentNextRing;
    for (std::size_t i = 0; i + 1 < sym.size(); ++i)
        if (sym[i][0] == 't' && sym[i + 1][0] == 't')
            return sym[0][0] == 'b' ? AnalyzeOutcome::WaitToMeet : AnalyzeOutcome::SeekEastToMeet;
    return AnalyzeOutcome::DescendThenBlackHoleInNextRing;
}

void criterion_analyze() {
    static const char* names[] = {"b1", "b2", "t1", "t2"};
    long checked = 0, mismatched = 0;
    std::string first;
    for (int len = 0; len <= 12; ++len) {
        long total = 1;
        for (int i = 0; i < len; ++i) total *= 4;
        for (long code = 0; code < total; ++code) {
            std::string text;
            long rest = code;
            for (int i = 0; i < len; ++i, rest /= 4) text += names[rest % 4];
            ObservationSequence seq = ObservationSequence::parse(text);
            for (int carried = 1; carried <= 2; ++carried) {
                ++checked;
                if (analyze(seq, carried) != oracle(text, carried)) {
                    if (mismatched++ == 0) first = text + " carried " + std::to_string(carried);
                }
            }
        }
    }
    const std::vector<std::tuple<std::string, int, AnalyzeOutcome>> paper = {
        {"b1t1b1t1b1t1b2t2b2t2b2t2", 2, AnalyzeOutcome::DescendSafe},
        {"t1t1t1t2t2t2", 2, AnalyzeOutcome::DescendSafe},
        {"t1t1t1b1t1t1t1", 1, AnalyzeOutcome::LocateByTwoTokenNode},
        {"b1b1t1t1b1b1t1t2b1b1t2t2", 2, AnalyzeOutcome::WaitToMeet},
        {"t1b1b1t1t1b1b1t2t2b1b1t2", 2, AnalyzeOutcome::SeekEastToMeet},
        {"b1t1b1t1b1t1b1t2b1t2b1t2", 2, AnalyzeOutcome::DescendThenBlackHoleInNextRing},
    };
    for (const auto& [text, carried, want] : paper) {
        ++checked;
        auto got = analyze(ObservationSequence::parse(text), carried);
        if (got != want || oracle(text, carried) != want) {
            if (mismatched++ == 0) first = text + " gave " + to_string(got);
        }
    }
    report(6, mismatched == 0, "Analyze matches the branch oracle on all sequences up to length 12",
           std::to_string(checked) + " cases, " + std::to_string(mismatched) + " mismatches" +
               (first.empty() ? "" : ", first " + first));
}

// ---- criterion 9 ------------------------------------------------------------------

// Max ticks per node over the swept sizes may vary by at most a factor of two, and no
// run may reach its budget.
bool linear_growth(const SweepReport& r, std::string& detail) {
    double lo = 1e18, hi = 0;
    bool within = true;
    for (const auto& [nm, st] : r.by_size) {
        const double per = static_cast<double>(st.max_ticks) / (nm.first * nm.second);
        lo = std::min(lo, per);
        hi = std::max(hi, per);
        within &= st.max_ticks < 200L * nm.first * nm.second * r.config.magic_number;
    }
    within &= r.count(Verdict::Timeout) == 0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s ticks/node %.1f..%.1f (ratio %.2f)%s; ", to_string(r.config.algorithm), lo,
                  hi, hi / lo, within ? "" : " budget reached");
    detail += buf;
    return within && hi <= 2.0 * lo;
}

}  // namespace

int main() {
    std::printf("acceptance: %d worker threads\n", default_jobs());

    // 1. BHS33, exhaustive 3..5
    SweepConfig c33 = config(Algorithm::BHS33, 3, 5, 3);
    Swept s33 = run_sweep(c33, enumerate_scenarios(c33));
    report(1, s33.report.failed() == 0 && !s33.report.exploratory, "bhs33 exhaustive n,m in 3..5, k=3",
           summary(s33.report));

    // 2. BHS42, exhaustive 3..4 plus 10000 sampled 5x5
    SweepConfig c42 = config(Algorithm::BHS42, 3, 4, 4);
    Swept s42 = run_sweep(c42, enumerate_scenarios(c42));
    SweepConfig c42s = config(Algorithm::BHS42, 5, 5, 4);
    c42s.mode = SweepMode::Sampled;
    c42s.samples = 10000;
    c42s.seed = 42;
    Swept s42s = run_sweep(c42s, sample_scenarios(c42s));
    report(2, s42.report.failed() == 0 && s42s.report.failed() == 0 && s42.report.max_destroyed <= 3 &&
                  s42s.report.max_destroyed <= 3,
           "bhs42 exhaustive n,m in 3..4 and 10000 sampled 5x5, k=4, death bounds",
           "exhaustive " + summary(s42.report) + "; sampled " + summary(s42s.report));

    // 3. BHS32, exhaustive 3..5
    auto t32 = std::chrono::steady_clock::now();
    SweepConfig c32 = config(Algorithm::BHS32, 3, 5, 3);
    Swept s32 = run_sweep(c32, enumerate_scenarios(c32));
    double secs32 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t32).count();
    report(3, s32.report.failed() == 0 && s32.report.max_destroyed <= 2 && secs32 <= 3600.0,
           "bhs32 exhaustive n,m in 3..5, k=3, at most two destroyed, within an hour",
           summary(s32.report) + ", " + std::to_string(static_cast<int>(secs32)) + "s");

    // 4. FirstRing timing
    criterion_first_ring();

    // 5. Synchronization over every bhs32 run
    long sync_failures = 0;
    for (const auto& f : s32.report.failures) sync_failures += f.reason.rfind("synchronization", 0) == 0;
    report(5, s32.report.failed() == 0 && sync_failures == 0 && s32.report.sync_checks > 0,
           "InitNextRing synchronization holds in every bhs32 run",
           std::to_string(s32.report.sync_checks) + " InitNextRing entries checked, " +
               std::to_string(sync_failures) + " violations");

    // 6. Analyze
    criterion_analyze();

    // 7. Invariants (checked each tick by the scheduler) and replay determinism
    {
        bool ok = s33.report.count(Verdict::Violation) == 0 && s42.report.count(Verdict::Violation) == 0 &&
                  s42s.report.count(Verdict::Violation) == 0 && s32.report.count(Verdict::Violation) == 0 &&
                  s32.report.max_three_token_nodes <= 1;
        std::string detail = "no violation in " +
                             std::to_string(s33.report.total + s42.report.total + s42s.report.total +
                                            s32.report.total) +
                             " runs, at most " + std::to_string(s32.report.max_three_token_nodes) +
                             " three-token node in bhs32";
        int replays = 0, mismatched = 0;
        for (const Swept* s : {&s33, &s42, &s42s, &s32}) {
            SweepConfig again = s->report.config;
            again.jobs = 1;
            std::vector<Scenario> slice(s->scenarios.begin(),
                                        s->scenarios.begin() + std::min<std::size_t>(s->scenarios.size(), 2000));
            SweepReport first = sweep_scenarios(again, slice);
            again.jobs = 3;
            SweepReport second = sweep_scenarios(again, slice);
            ++replays;
            mismatched += first.hash != second.hash;
        }
        ok &= mismatched == 0;
        detail += ", " + std::to_string(replays - mismatched) + "/" + std::to_string(replays) +
                  " replayed sweeps hash-identical";
        report(7, ok, "token ledger, token cap, no tokens on the hole, monotone marks, replay determinism",
               detail);
    }

    // 8. Magic number
    {
        const MagicNumberAudit& a = magic_number_audit();
        std::string detail;
        for (const auto& [name, ticks] : a.rows()) detail += name + "=" + std::to_string(ticks) + " ";
        detail += "minimal=" + std::to_string(a.minimal()) + " default=" + std::to_string(kDefaultMagicNumber);
        report(8, a.minimal() >= 16 && a.admits(kDefaultMagicNumber), "audited minimal D >= 16 and default D passes",
               detail);
    }

    // 9. Tick budget and linear growth
    {
        std::string detail;
        bool ok = true;
        for (const Swept* s : {&s33, &s42, &s32}) ok &= linear_growth(s->report, detail);
        ok &= s42s.report.count(Verdict::Timeout) == 0;
        report(9, ok, "runs end within 200*n*m*D and max ticks grow linearly in n*m", detail);
    }

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
