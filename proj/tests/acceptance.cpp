// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 only if all pass.

#include "mailbox/explorer.hpp"
#include "mailbox/scenario.hpp"
#include "mailbox/stress.hpp"
#include "support/oracles.hpp"
#include "support/runs.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace mailbox;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExploreConfig bounds(std::uint32_t d, std::uint32_t c, Predicate p = Predicate::Full,
                     Algorithm a = Algorithm::SixFour) {
    ExploreConfig cfg;
    cfg.max_delivers = d;
    cfg.max_checks = c;
    cfg.predicate = p;
    cfg.algorithm = a;
    return cfg;
}

bool no_prefix(const FailureCounts& f, const std::string& prefix) {
    for (const auto& [k, v] : f) {
        if (k.rfind(prefix, 0) == 0 && v > 0) {
            return false;
        }
    }
    return true;
}

bool fifo_clean(const FailureCounts& f) { return !f.count("fact.fifo") && !f.count("fact.empty-dequeue"); }

// Checks that read only Fh, Th, Tp, Fp and pairs inside the stated domains.
bool flags_ok(const FlagObservations& fl) {
    constexpr std::uint8_t allowed_reads = (1u << static_cast<int>(Register::Fh)) |
                                           (1u << static_cast<int>(Register::Th)) |
                                           (1u << static_cast<int>(Register::Tp)) |
                                           (1u << static_cast<int>(Register::Fp));
    return !fl.out_of_domain && (fl.check_reads & ~allowed_reads) == 0 &&
           fl.postman_pairs < (1u << 6) && fl.homeowner_pairs < (1u << 4);
}

int popcount(unsigned v) { return __builtin_popcount(v); }

} // namespace

int main() {
    // 1, 3, 4 and 5 share the (3,5) exploration.
    const auto t0 = std::chrono::steady_clock::now();
    const auto main_run = explore(bounds(3, 5));
    const double main_secs = seconds_since(t0);
    const auto expected = oracle::ScheduleCounter(3, 5, Algorithm::SixFour).count();
    {
        const auto& f = main_run.failures;
        const bool ok = main_run.ok() && main_run.schedules == expected &&
                        no_prefix(f, "linear.") && no_prefix(f, "axiom.") &&
                        no_prefix(f, "prop.") && f.empty();
        std::ostringstream w;
        w << "explore (3,5) full: " << main_run.schedules << " schedules (independent count "
          << expected << "), " << main_run.classes << " classes checked, "
          << main_run.violating_schedules << " violating, " << main_secs << " s";
        report(1, ok && main_secs < 300, w.str());
    }

    {
        const auto sc = *bundled_scenario("agl_counterexample");
        auto c3_of = [](const TraceVerdict& v) {
            for (auto c : v.structure.checks) {
                if (v.structure.name(c) == "C3") {
                    return c;
                }
            }
            return EventIndex{0};
        };
        const auto weak = check_trace(replay(sc, Algorithm::SixFour, Predicate::TpNeThOnly));
        const auto c3w = c3_of(weak);
        bool item3 = false;
        for (const auto& f : weak.linearization.failures) {
            item3 |= f.item == 3 &&
                     std::find(f.witnesses.begin(), f.witnesses.end(), c3w) != f.witnesses.end();
        }
        const auto* a7 = weak.axioms.find("7");
        const bool weak_ok = c3w != 0 && weak.structure.event(c3w).positive() &&
                             weak.linearization.remnum[c3w] == 2 &&
                             weak.linearization.delnum[c3w] == 2 && item3 && a7 && !a7->ok &&
                             a7->witness && a7->witness->find("C3") != std::string::npos;
        const auto full = check_trace(replay(sc, Algorithm::SixFour, Predicate::Full));
        const auto c3f = c3_of(full);
        const bool full_ok = full.ok() && c3f != 0 && !full.structure.event(c3f).positive() &&
                             full.linearization.remnum[c3f] == 2 &&
                             full.linearization.delnum[c3f] == 2;
        report(2, weak_ok && full_ok,
               "counterexample: tp-ne-th gives Val(C3)=true with remnum=delnum=2, item 3 and "
               "axiom 7 fail at C3; full gives Val(C3)=false and passes");
    }

    {
        const auto& fl = main_run.flags;
        std::ostringstream w;
        w << "(Tp,Fp) values seen " << popcount(fl.postman_pairs) << "/6, (Th,Fh) values seen "
          << popcount(fl.homeowner_pairs) << "/4, checks read only Fh/Th/Tp/Fp";
        report(3, flags_ok(fl) && !main_run.failures.count("fact.access") &&
                      !main_run.failures.count("fact.domain"),
               w.str());
    }

    {
        std::ostringstream w;
        w << "deliver/remove 6 actions, check 1 or 4, asserted per trace; longest operation "
          << main_run.max_actions_per_op;
        report(4, !main_run.failures.count("fact.wait-free") && main_run.max_actions_per_op == 6,
               w.str());
    }

    // 5 and 8 share the stress runs.
    bool stress_ok = true;
    bool stress_fifo = true;
    double stress_secs = 0;
    std::uint64_t stress_actions = 0;
    {
        const auto s0 = std::chrono::steady_clock::now();
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            StressConfig cfg;
            cfg.ops = 10000;
            cfg.seed = seed;
            try {
                const auto res = run_stress(cfg);
                const auto v = check_trace(res.trace);
                FailureCounts c;
                v.tally(c);
                stress_ok &= v.ok();
                stress_fifo &= fifo_clean(c) && v.structure.removes.size() == cfg.ops;
                stress_actions += res.trace.actions.size();
            } catch (const StressTimeout& e) {
                std::printf("stress seed %llu: %s\n", static_cast<unsigned long long>(seed),
                            e.what());
                stress_ok = stress_fifo = false;
            }
        }
        stress_secs = seconds_since(s0);
    }

    report(5, fifo_clean(main_run.failures) && stress_fifo,
           "i-th remove dequeues the i-th letter and no dequeue finds the queue empty, in all "
           "explored (3,5) and stressed traces");

    {
        const auto base = explore(bounds(2, 4, Predicate::Full, Algorithm::Unbounded));
        const bool counted =
            base.schedules == oracle::ScheduleCounter(2, 4, Algorithm::Unbounded).count();
        // Every operation-level interleaving of up to 3 delivers and 5 checks, run sequentially.
        bool seq_ok = true;
        std::uint64_t scripts = 0;
        for (auto alg : {Algorithm::SixFour, Algorithm::Unbounded}) {
            std::function<void(runs::Sequential&, int, int, std::size_t, std::size_t)> go;
            go = [&](runs::Sequential& run, int d_left, int c_left, std::size_t d, std::size_t r) {
                const bool due = run.state.homeowner.remove_due;
                bool moved = false;
                if (d_left > 0) {
                    auto next = run;
                    runs::run_op(next, Actor::Postman, Operation::Deliver);
                    go(next, d_left - 1, c_left, d + 1, r);
                    moved = true;
                }
                if (due && c_left > 0) {
                    auto next = run;
                    runs::run_op(next, Actor::Homeowner, Operation::Remove);
                    go(next, d_left, c_left, d, r + 1);
                    moved = true;
                } else if (!due && c_left > 0) {
                    auto next = run;
                    const bool v = runs::run_op(next, Actor::Homeowner, Operation::Check);
                    seq_ok &= v == (d > r);
                    go(next, d_left, c_left - 1, d, r);
                    moved = true;
                }
                if (!moved) {
                    ++scripts;
                    seq_ok &= check_trace(run.trace).ok();
                }
            };
            runs::Sequential start{init_state(alg), {}, {}};
            start.trace.header.algorithm = alg;
            go(start, 3, 5, 0, 0);
        }
        std::ostringstream w;
        w << "baseline (2,4): " << base.schedules << " schedules, " << base.violating_schedules
          << " violating; " << scripts << " sequential runs of both algorithms match "
          << "delivers > removes";
        report(6, base.ok() && counted && seq_ok, w.str());
    }

    {
        const auto cfg = bounds(1, 1);
        const auto reduced = explore(cfg);
        const auto every = explore_reference(cfg);
        const auto count = oracle::ScheduleCounter(1, 1, Algorithm::SixFour).count();
        std::ostringstream w;
        w << "(1,1): explore " << reduced.schedules << ", every-schedule " << every.schedules
          << ", independent count " << count << ", C(10,4) = " << oracle::binomial(10, 4);
        report(7, reduced.schedules == 210 && every.schedules == 210 && count == 210 &&
                      oracle::binomial(10, 4) == 210 && reduced.ok() && every.ok(),
               w.str());
    }

    {
        std::ostringstream w;
        w << "stress ops=10^4 over 10 seeds: " << stress_actions << " actions, omega and full "
          << "checker clean, " << stress_secs << " s";
        report(8, stress_ok && stress_secs < 120, w.str());
    }

    std::printf("%s\n", failures == 0 ? "all criteria PASS" : "some criteria FAIL");
    return failures == 0 ? 0 : 1;
}
