// bhs: run, sweep and audit Black Hole Search scenarios on oriented tori.

#include "bhs/audit.hpp"
#include "bhs/harness.hpp"
#include "bhs/trace_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bhs;

constexpr int kExitOk = 0;
constexpr int kExitIncomplete = 1;
constexpr int kExitViolation = 2;
constexpr int kExitUsage = 64;

TorusDims parse_dims(const std::string& text) {
    static const std::regex re(R"((\d+)x(\d+))");
    std::smatch mt;
    if (!std::regex_match(text, mt, re)) throw UsageError("dims must look like NxM: " + text);
    return TorusDims(std::stoi(mt[1]), std::stoi(mt[2]));
}

Coord parse_coord(const std::string& text) {
    static const std::regex re(R"(\s*(\d+)\s*,\s*(\d+)\s*)");
    std::smatch mt;
    if (!std::regex_match(text, mt, re)) throw UsageError("coordinates must look like i,j: " + text);
    return {std::stoi(mt[1]), std::stoi(mt[2])};
}

std::vector<Coord> parse_agents(const std::string& text) {
    std::vector<Coord> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ';'))
        if (!item.empty()) out.push_back(parse_coord(item));
    if (out.empty()) throw UsageError("no agents given");
    return out;
}

// "3..5" for both sides, or "3..5x3..4" for rows and columns separately.
void parse_range(const std::string& text, SweepConfig& cfg) {
    static const std::regex both(R"((\d+)(?:\.\.(\d+))?)");
    static const std::regex split(R"((\d+)(?:\.\.(\d+))?x(\d+)(?:\.\.(\d+))?)");
    std::smatch mt;
    if (std::regex_match(text, mt, both)) {
        cfg.n_min = cfg.m_min = std::stoi(mt[1]);
        cfg.n_max = cfg.m_max = mt[2].matched ? std::stoi(mt[2]) : cfg.n_min;
    } else if (std::regex_match(text, mt, split)) {
        cfg.n_min = std::stoi(mt[1]);
        cfg.n_max = mt[2].matched ? std::stoi(mt[2]) : cfg.n_min;
        cfg.m_min = std::stoi(mt[3]);
        cfg.m_max = mt[4].matched ? std::stoi(mt[4]) : cfg.m_min;
    } else {
        throw UsageError("dims range must look like 3..5 or 3..5x3..4: " + text);
    }
}

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Success: return kExitOk;
        case Verdict::Violation: return kExitViolation;
        default: return kExitIncomplete;
    }
}

struct RunFlags {
    std::string algo, dims, bh, agents, trace;
    int tokens = 0;
    int magic = kDefaultMagicNumber;
    long max_ticks = 0;
};

int cmd_run(const RunFlags& f) {
    Scenario s = make_scenario(algorithm_from_string(f.algo), parse_dims(f.dims), parse_coord(f.bh),
                               parse_agents(f.agents));
    if (f.tokens > 0) s.tokens_per_agent = f.tokens;
    s.magic_number = f.magic;
    s.max_ticks = f.max_ticks;
    s.record_trace = !f.trace.empty();
    validate(s);

    Verification v = verify_scenario(s);
    const RunResult& r = v.run;
    std::cout << "verdict    " << to_string(v.verdict()) << '\n';
    if (!v.reason().empty()) std::cout << "reason     " << v.reason() << '\n';
    std::cout << "ticks      " << r.ticks << '\n'
              << "survivors  " << r.survivors << '\n'
              << "destroyed  " << r.destroyed << '\n'
              << "marks     ";
    for (auto [c, d] : r.marks) std::cout << ' ' << c.i << ',' << c.j << to_string(d);
    std::cout << '\n';
    if (s.exploratory()) std::cout << "note       " << kExploratoryLabel << '\n';

    if (!f.trace.empty()) {
        if (f.trace == "-") {
            write_jsonl(std::cout, r.trace);
        } else {
            std::ofstream out(f.trace);
            if (!out) throw UsageError("cannot write " + f.trace);
            write_jsonl(out, r.trace);
        }
    }
    return exit_for(v.verdict());
}

struct SweepFlags {
    std::string algo, range, report;
    int k = 3;
    bool exhaustive = false;
    long sample = 0;
    std::uint64_t seed = 1;
    int jobs = 0;
    int tokens = 0;
    int magic = kDefaultMagicNumber;
    long max_ticks = 0;
    bool reduce = false;
};

int cmd_sweep(const SweepFlags& f) {
    SweepConfig cfg;
    cfg.algorithm = algorithm_from_string(f.algo);
    parse_range(f.range, cfg);
    cfg.k = f.k;
    if (f.exhaustive == (f.sample > 0)) throw UsageError("choose exactly one of --exhaustive and --sample N");
    cfg.mode = f.exhaustive ? SweepMode::Exhaustive : SweepMode::Sampled;
    cfg.samples = f.sample;
    cfg.seed = f.seed;
    cfg.jobs = f.jobs > 0 ? f.jobs : default_jobs();
    cfg.tokens_per_agent = f.tokens;
    cfg.magic_number = f.magic;
    cfg.max_ticks = f.max_ticks;
    cfg.translation_reduce = f.reduce;

    SweepReport rep = sweep(cfg);
    const std::string doc = to_json(rep).dump(2);
    if (f.report.empty() || f.report == "-") {
        std::cout << doc << '\n';
    } else {
        std::ofstream out(f.report);
        if (!out) throw UsageError("cannot write " + f.report);
        out << doc << '\n';
        std::cerr << to_string(cfg.algorithm) << ": " << rep.total << " runs, " << rep.failed() << " failed"
                  << (rep.exploratory ? " (exploratory)" : "") << '\n';
    }
    return rep.passed() ? kExitOk : kExitViolation;
}

int cmd_audit(int magic) {
    const MagicNumberAudit& a = magic_number_audit();
    for (const auto& [name, ticks] : a.rows()) std::cout << name << ' ' << ticks << '\n';
    std::cout << "minimal_magic_number " << a.minimal() << '\n'
              << "configured_magic_number " << magic << ' ' << (a.admits(magic) ? "ok" : "too small") << '\n';
    return a.admits(magic) ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Black Hole Search on oriented tori"};
    app.require_subcommand(1);

    RunFlags rf;
    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("--algo", rf.algo, "bhs33, bhs42 or bhs32")->required();
    run->add_option("--dims", rf.dims, "torus size NxM")->required();
    run->add_option("--bh", rf.bh, "black hole i,j")->required();
    run->add_option("--agents", rf.agents, "agent starts i,j;i,j;...")->required();
    run->add_option("--tokens", rf.tokens, "tokens per agent (default per algorithm)");
    run->add_option("--magic-number", rf.magic, "big-step length D");
    run->add_option("--max-ticks", rf.max_ticks, "tick budget (default 200*n*m*D)");
    run->add_option("--trace", rf.trace, "write the JSONL trace here ('-' for stdout)");

    SweepFlags sf;
    auto* sw = app.add_subcommand("sweep", "run many scenarios");
    sw->add_option("--algo", sf.algo, "bhs33, bhs42 or bhs32")->required();
    sw->add_option("--dims-range", sf.range, "3..5 or 3..5x3..4")->required();
    sw->add_option("--k", sf.k, "number of agents");
    sw->add_flag("--exhaustive", sf.exhaustive, "every black hole and start set");
    sw->add_option("--sample", sf.sample, "number of random scenarios");
    sw->add_option("--seed", sf.seed, "seed for --sample");
    sw->add_option("--jobs", sf.jobs, "worker threads (default BHS_JOBS or all cores)");
    sw->add_option("--report", sf.report, "write the JSON report here (default stdout)");
    sw->add_option("--tokens", sf.tokens, "tokens per agent (default per algorithm)");
    sw->add_option("--magic-number", sf.magic, "big-step length D");
    sw->add_option("--max-ticks", sf.max_ticks, "per-run tick budget");
    sw->add_flag("--translation-reduce", sf.reduce, "only place the black hole at 0,0");

    int audit_magic = kDefaultMagicNumber;
    auto* au = app.add_subcommand("audit", "measure the big-step budget of bhs32");
    au->add_option("--magic-number", audit_magic, "D to check against the audit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) return cmd_run(rf);
        if (*sw) return cmd_sweep(sf);
        return cmd_audit(audit_magic);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
}
