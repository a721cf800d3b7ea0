#include "mailbox/checker.hpp"
#include "mailbox/scenario.hpp"
#include "support/runs.hpp"

#include <doctest.h>

using namespace mailbox;

TEST_CASE("counterexample failure counters") {
    const auto sc = *bundled_scenario("agl_counterexample");
    const auto full = check_trace(replay(sc));
    CHECK(full.ok());
    CHECK(full.failure_lines().empty());

    const auto weak = check_trace(replay(sc, Algorithm::SixFour, Predicate::TpNeThOnly));
    CHECK_FALSE(weak.ok());
    FailureCounts counts;
    weak.tally(counts, 5);
    CHECK(counts["linear.item3"] == 5);
    CHECK(counts["axiom.7"] == 5);
    CHECK(counts["prop.P11"] == 5);
    CHECK(counts.count("structure") == 0);
    CHECK_FALSE(weak.failure_lines().empty());
}

TEST_CASE("structure errors are reported, not thrown") {
    auto t = runs::sequential("dc").trace;
    t.actions.pop_back();
    const auto v = check_trace(t);
    CHECK_FALSE(v.ok());
    REQUIRE(v.structure_error);
    FailureCounts counts;
    v.tally(counts);
    CHECK(counts["structure"] == 1);
}

TEST_CASE("baseline sequential traces pass") {
    for (const char* script : {"", "c", "dc", "dcrc", "ddcrcrc", "dcrdcrc"}) {
        CAPTURE(script);
        const auto v = check_trace(runs::sequential(script, Algorithm::Unbounded).trace);
        CHECK(v.ok());
        CHECK(v.propositions.empty());
    }
}

TEST_CASE("modes agree on the whole verdict") {
    const auto sc = *bundled_scenario("agl_counterexample");
    for (auto p : {Predicate::Full, Predicate::TpNeThOnly}) {
        const auto t = replay(sc, Algorithm::SixFour, p);
        const auto a = check_trace(t, CheckMode::Reference);
        const auto b = check_trace(t, CheckMode::Sweep);
        FailureCounts ca, cb;
        a.tally(ca);
        b.tally(cb);
        CHECK(ca == cb);
    }
}
