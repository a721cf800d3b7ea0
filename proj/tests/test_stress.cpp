#include "mailbox/checker.hpp"
#include "mailbox/stress.hpp"

#include <doctest.h>

using namespace mailbox;

TEST_CASE("one letter") {
    StressConfig cfg;
    cfg.ops = 1;
    const auto res = run_stress(cfg);
    const auto v = check_trace(res.trace);
    CHECK(v.ok());
    CHECK(v.structure.delivers.size() == 1);
    CHECK(v.structure.removes.size() == 1);
    CHECK(v.structure.checks.size() >= 1);
    CHECK(res.checks == v.structure.checks.size());
}

TEST_CASE("recorded reads see the last write") {
    StressConfig cfg;
    cfg.ops = 2000;
    cfg.seed = 7;
    const auto res = run_stress(cfg);
    std::array<std::int64_t, kRegisterCount> value{0, 0, 2, 0, 0, 0, 0};
    std::int64_t queued = 0;
    for (const auto& a : res.trace.actions) {
        const auto r = static_cast<std::size_t>(a.reg);
        switch (a.kind) {
        case ActionKind::Write: value[r] = a.value; break;
        case ActionKind::Read: CHECK(a.value == value[r]); break;
        case ActionKind::Enqueue: CHECK(a.value == ++queued); break;
        case ActionKind::Dequeue: CHECK(a.value > 0); break;
        }
    }
    const auto v = check_trace(res.trace);
    CHECK(v.ok());
    CHECK(v.facts.max_actions_per_op <= 6);
}

TEST_CASE("invalid bound") {
    StressConfig cfg;
    cfg.ops = 0;
    CHECK_THROWS_AS(run_stress(cfg), std::invalid_argument);
}

TEST_CASE("same seed, same operation counts") {
    StressConfig cfg;
    cfg.ops = 100;
    cfg.seed = 3;
    const auto a = run_stress(cfg);
    CHECK(check_trace(a.trace).ok());
    CHECK(a.trace.header.delivers == 100);
}
