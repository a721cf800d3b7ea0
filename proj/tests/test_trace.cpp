#include "mailbox/explorer.hpp"
#include "mailbox/scenario.hpp"
#include "mailbox/trace.hpp"
#include "support/oracles.hpp"
#include "support/runs.hpp"

#include <doctest.h>

#include <set>

using namespace mailbox;

namespace {

EventIndex by_name(const EventStructure& s, const std::string& name) {
    for (EventIndex e = 0; e < s.events.size(); ++e) {
        if (s.name(e) == name) {
            return e;
        }
    }
    FAIL("no event " << name);
    return 0;
}

EventStructure counterexample(Predicate p = Predicate::Full) {
    return build_event_structure(replay(*bundled_scenario("agl_counterexample"),
                                        Algorithm::SixFour, p));
}

std::set<std::string> names(const std::vector<Finding>& f) {
    std::set<std::string> out;
    for (const auto& x : f) {
        out.insert(x.check);
    }
    return out;
}

} // namespace

TEST_CASE("sequential deliver then long check") {
    const auto s = build_event_structure(runs::sequential("dc").trace);
    REQUIRE(s.events.size() == 4);
    const auto d1 = by_name(s, "D1");
    const auto c1 = by_name(s, "C1");
    CHECK(s.precedes(d1, c1));
    CHECK_FALSE(s.precedes(c1, d1));
    CHECK(s.event(c1).kind == EventKind::CheckLong);
    CHECK_FALSE(s.precedes(EventStructure::kInitPostman, EventStructure::kInitHomeowner));
    CHECK_FALSE(s.precedes(EventStructure::kInitHomeowner, EventStructure::kInitPostman));
    CHECK(s.precedes(EventStructure::kInitHomeowner, d1));
}

TEST_CASE("counterexample structure") {
    const auto s = counterexample();
    // D2 is split across two scenario steps but is one operation
    CHECK(s.events.size() == 2 + 7);
    const auto d2 = by_name(s, "D2");
    for (const char* other : {"R1", "C2", "R2"}) {
        const auto o = by_name(s, other);
        CAPTURE(other);
        CHECK_FALSE(s.precedes(d2, o));
        CHECK_FALSE(s.precedes(o, d2));
    }
    const auto r1 = by_name(s, "R1");
    const auto c2 = by_name(s, "C2");
    const auto c3 = by_name(s, "C3");
    const auto r2 = by_name(s, "R2");
    CHECK(alpha(s, r1) == d2);
    CHECK(prerem(s, c3) == r2);
    CHECK(s.event(c2).kind == EventKind::CheckShort);
    CHECK(rho(s, c2) == d2);
    CHECK(rho(s, c3) == d2);
    CHECK(counters(s, c3).rn == 2u);
    CHECK(counters(s, d2).dn == 2u);
    CHECK(color(s, r2) == 1);
    CHECK(color(s, d2) == 0);
    CHECK_FALSE(s.event(c3).positive());
}

TEST_CASE("omega falls back to the initial writes") {
    const auto s = build_event_structure(runs::sequential("c").trace);
    const auto c1 = by_name(s, "C1");
    CHECK(s.writer_seen(c1, Register::Tp) == EventStructure::kInitPostman);
    CHECK(s.writer_seen(c1, Register::Th) == EventStructure::kInitHomeowner);
    CHECK(rho(s, c1) == EventStructure::kInitPostman);
    CHECK(prerem(s, c1) == EventStructure::kInitHomeowner);
}

TEST_CASE("alpha, prerem, rho, counters and color on sequential runs") {
    auto s = build_event_structure(runs::sequential("d").trace);
    CHECK(alpha(s, by_name(s, "D1")) == EventStructure::kInitHomeowner);
    CHECK(color(s, by_name(s, "D1")) == 1);

    s = build_event_structure(runs::sequential("dcr").trace);
    CHECK(alpha(s, by_name(s, "R1")) == by_name(s, "D1"));
    CHECK(rho(s, by_name(s, "C1")) == by_name(s, "D1"));

    s = build_event_structure(runs::sequential("ddcrcrc").trace);
    CHECK(prerem(s, by_name(s, "C2")) == by_name(s, "R1"));
    CHECK(prerem(s, by_name(s, "C3")) == by_name(s, "R2"));

    s = build_event_structure(runs::sequential("dddcrcrcr").trace);
    CHECK(counters(s, by_name(s, "R3")).rn == 3u);
    CHECK(counters(s, by_name(s, "D3")).dn == 3u);
}

TEST_CASE("structure errors") {
    auto t = runs::sequential("dc").trace;
    SUBCASE("cut-off operation") {
        t.actions.pop_back();
        try {
            build_event_structure(t);
            FAIL("accepted an unfinished check");
        } catch (const TraceError& e) {
            CHECK(e.code() == TraceError::Code::IncompleteTrace);
        }
    }
    SUBCASE("action that does not match the code") {
        t.actions[1].reg = Register::Rn;
        try {
            build_event_structure(t);
            FAIL("accepted a wrong register");
        } catch (const TraceError& e) {
            CHECK(e.code() == TraceError::Code::MalformedTrace);
        }
    }
    SUBCASE("gap in seq") {
        t.actions[2].seq = 17;
        CHECK_THROWS_AS(build_event_structure(t), TraceError);
    }
}

TEST_CASE("propositions agree with a brute-force evaluation") {
    for (auto pred : {Predicate::Full, Predicate::TpNeThOnly}) {
        ExploreConfig cfg;
        cfg.max_delivers = 3;
        cfg.max_checks = 6;
        cfg.predicate = pred;
        cfg.runs = 400;
        cfg.seed = 11;
        const auto walks = random_walk(cfg);
        std::size_t with_failures = 0;
        for (const auto& t : walks.traces) {
            const auto s = build_event_structure(t);
            const auto expected = oracle::brute_force_propositions(s);
            const auto got = names(check_propositions(s));
            CHECK(got == expected);
            with_failures += expected.empty() ? 0 : 1;
        }
        if (pred == Predicate::Full) {
            CHECK(with_failures == 0);
        }
    }
    // The counterexample fails P11 and Q under the weak predicate.
    const auto s = counterexample(Predicate::TpNeThOnly);
    const auto expected = oracle::brute_force_propositions(s);
    CHECK(expected.count("P11") == 1);
    CHECK(names(check_propositions(s)) == expected);
}

TEST_CASE("facts on explored traces") {
    ExploreConfig cfg;
    cfg.max_delivers = 2;
    cfg.max_checks = 4;
    cfg.runs = 200;
    const auto walks = random_walk(cfg);
    for (const auto& t : walks.traces) {
        const auto s = build_event_structure(t);
        const auto facts = check_trace_facts(s);
        CHECK(facts.failures.empty());
        for (const auto& e : s.events) {
            if (e.kind == EventKind::Deliver || e.kind == EventKind::Remove) {
                CHECK(e.action_count == 6);
            } else if (e.kind == EventKind::CheckShort) {
                CHECK(e.action_count == 1);
            } else if (e.kind == EventKind::CheckLong) {
                CHECK(e.action_count == 4);
            }
        }
    }
}

TEST_CASE("wrong letter is a fifo failure") {
    auto t = runs::sequential("ddcr").trace;
    for (auto& a : t.actions) {
        if (a.kind == ActionKind::Dequeue) {
            a.value = 2;
        }
    }
    const auto facts = check_trace_facts(build_event_structure(t));
    CHECK(names(facts.failures).count("fifo") == 1);
}
