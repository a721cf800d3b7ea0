#include "mailbox/trace.hpp"
#include "mailbox/protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace mailbox {

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::Deliver:
        return "deliver";
    case EventKind::CheckShort:
        return "check_short";
    case EventKind::CheckLong:
        return "check_long";
    case EventKind::CheckCounter:
        return "check_counter";
    case EventKind::Remove:
        return "remove";
    case EventKind::InitPostman:
        return "init_postman";
    case EventKind::InitHomeowner:
        return "init_homeowner";
    }
    return "?";
}

bool EventStructure::precedes(EventIndex a, EventIndex b) const {
    const auto& x = events[a];
    const auto& y = events[b];
    if (x.is_initial() && y.is_initial()) {
        return false;
    }
    return x.last_seq < y.first_seq;
}

std::string EventStructure::name(EventIndex e) const {
    const auto& ev = events[e];
    switch (ev.kind) {
    case EventKind::InitPostman:
        return "I_p";
    case EventKind::InitHomeowner:
        return "I_h";
    case EventKind::Deliver:
        return "D" + std::to_string(ev.ordinal);
    case EventKind::Remove:
        return "R" + std::to_string(ev.ordinal);
    default:
        return "C" + std::to_string(ev.ordinal);
    }
}

std::optional<std::uint32_t> EventStructure::find_action(EventIndex e, Register reg,
                                                         ActionKind kind) const {
    for (auto i : events[e].actions()) {
        if (actions[i].reg == reg && actions[i].kind == kind) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<EventIndex> EventStructure::writer_seen(EventIndex e, Register reg) const {
    auto r = find_action(e, reg, ActionKind::Read);
    if (!r || omega[*r] < 0) {
        return std::nullopt;
    }
    return owner[static_cast<std::size_t>(omega[*r])];
}

namespace {

struct Shape {
    std::uint8_t line;
    ActionKind kind;
    Register reg;
};

using K = ActionKind;
using R = Register;

constexpr std::array<Shape, 6> kDeliver64{{{1, K::Enqueue, R::Queue},
                                           {2, K::Write, R::Dn},
                                           {3, K::Read, R::Th},
                                           {4, K::Write, R::Tp},
                                           {5, K::Read, R::Rn},
                                           {6, K::Write, R::Fp}}};
constexpr std::array<Shape, 6> kRemove64{{{1, K::Dequeue, R::Queue},
                                          {2, K::Write, R::Rn},
                                          {3, K::Read, R::Tp},
                                          {4, K::Write, R::Th},
                                          {5, K::Read, R::Dn},
                                          {6, K::Write, R::Fh}}};
constexpr std::array<Shape, 4> kCheck64{{{1, K::Read, R::Fh},
                                         {2, K::Read, R::Th},
                                         {3, K::Read, R::Tp},
                                         {4, K::Read, R::Fp}}};
constexpr std::array<Shape, 2> kDeliverU{{{1, K::Enqueue, R::Queue}, {3, K::Write, R::Dn}}};
constexpr std::array<Shape, 1> kCheckU{{{1, K::Read, R::Dn}}};
constexpr std::array<Shape, 1> kRemoveU{{{1, K::Dequeue, R::Queue}}};

std::span<const Shape> shape_of(Algorithm a, Operation op) {
    if (a == Algorithm::SixFour) {
        switch (op) {
        case Operation::Deliver:
            return kDeliver64;
        case Operation::Check:
            return kCheck64;
        case Operation::Remove:
            return kRemove64;
        }
    }
    switch (op) {
    case Operation::Deliver:
        return kDeliverU;
    case Operation::Check:
        return kCheckU;
    case Operation::Remove:
        return kRemoveU;
    }
    return {};
}

Actor actor_of(Operation op) { return op == Operation::Deliver ? Actor::Postman : Actor::Homeowner; }

[[noreturn]] void malformed(const std::string& what) {
    throw TraceError(TraceError::Code::MalformedTrace, what);
}

std::string describe(const ActionRecord& a) {
    return "seq " + std::to_string(a.seq) + " (" + std::string(to_string(a.op)) + " op " +
           std::to_string(a.op_id) + " line " + std::to_string(a.line) + ")";
}

ActionRecord initial_write(std::int64_t seq, Actor actor, std::uint32_t op_id, Register reg,
                           std::int64_t value) {
    ActionRecord r;
    r.seq = seq;
    r.actor = actor;
    r.op_id = op_id;
    r.op = actor == Actor::Postman ? Operation::Deliver : Operation::Remove;
    r.line = 0;
    r.kind = ActionKind::Write;
    r.reg = reg;
    r.value = value;
    return r;
}

struct OpenOp {
    EventIndex event = 0;
    std::size_t expected = 0; // actions the operation will have once complete
    std::span<const Shape> shape;
    bool open = false;
};

std::int64_t value_at(const EventStructure& s, EventIndex e, Register reg, ActionKind kind) {
    return s.actions[*s.find_action(e, reg, kind)].value;
}

} // namespace

EventStructure build_event_structure(const Trace& trace) {
    EventStructure s;
    s.header = trace.header;
    const Algorithm alg = trace.header.algorithm;
    const bool six_four = alg == Algorithm::SixFour;

    OperationExecution ip;
    ip.id = 0;
    ip.kind = EventKind::InitPostman;
    ip.actor = Actor::Postman;
    ip.first_seq = ip.last_seq = -2;
    OperationExecution ih;
    ih.id = 1;
    ih.kind = EventKind::InitHomeowner;
    ih.actor = Actor::Homeowner;
    ih.first_seq = ih.last_seq = -1;

    auto add_initial = [&](OperationExecution& ev, EventIndex idx, Register reg, std::int64_t v) {
        ev.action_index[ev.action_count++] = static_cast<std::uint32_t>(s.actions.size());
        s.actions.push_back(initial_write(ev.first_seq, ev.actor, ev.id, reg, v));
        s.owner.push_back(idx);
    };
    add_initial(ip, 0, Register::Dn, 0);
    if (six_four) {
        add_initial(ip, 0, Register::Tp, 0);
        add_initial(ip, 0, Register::Fp, 2);
        add_initial(ih, 1, Register::Rn, 0);
        add_initial(ih, 1, Register::Th, 0);
        add_initial(ih, 1, Register::Fh, 0);
    }
    s.events.push_back(ip);
    s.events.push_back(ih);

    const std::size_t base = s.actions.size();
    s.actions.reserve(base + trace.actions.size());
    s.owner.reserve(base + trace.actions.size());

    std::array<OpenOp, 2> open{};
    std::array<std::uint32_t, 3> ordinals{};
    std::vector<std::uint32_t> op_ids;

    for (std::size_t i = 0; i < trace.actions.size(); ++i) {
        const auto& a = trace.actions[i];
        if (a.seq != static_cast<std::int64_t>(i)) {
            malformed("sequence numbers must be dense from 0; found " + std::to_string(a.seq) +
                      " at position " + std::to_string(i));
        }
        if (a.actor != actor_of(a.op)) {
            malformed(describe(a) + ": operation run by the wrong process");
        }
        auto& cur = open[static_cast<std::size_t>(a.actor)];
        if (!cur.open || s.events[cur.event].id != a.op_id) {
            if (cur.open) {
                malformed(describe(a) + ": previous operation of this process is unfinished");
            }
            OperationExecution ev;
            ev.id = a.op_id;
            ev.actor = a.actor;
            ev.ordinal = ++ordinals[static_cast<std::size_t>(a.op)];
            ev.first_seq = a.seq;
            switch (a.op) {
            case Operation::Deliver:
                ev.kind = EventKind::Deliver;
                break;
            case Operation::Remove:
                ev.kind = EventKind::Remove;
                break;
            case Operation::Check:
                ev.kind = six_four ? EventKind::CheckLong : EventKind::CheckCounter;
                break;
            }
            cur.event = static_cast<EventIndex>(s.events.size());
            cur.shape = shape_of(alg, a.op);
            cur.expected = cur.shape.size();
            cur.open = true;
            s.events.push_back(ev);
            op_ids.push_back(a.op_id);
        }
        auto& ev = s.events[cur.event];
        const std::size_t pos = ev.action_count;
        const Shape& want = cur.shape[pos];
        if (a.line != want.line || a.kind != want.kind || a.reg != want.reg) {
            malformed(describe(a) + ": expected line " + std::to_string(want.line) + " " +
                      std::string(to_string(want.kind)) + " " + std::string(to_string(want.reg)));
        }
        const auto idx = static_cast<std::uint32_t>(s.actions.size());
        s.actions.push_back(a);
        s.owner.push_back(cur.event);
        ev.action_index[ev.action_count++] = idx;
        ev.last_seq = a.seq;
        if (six_four && a.op == Operation::Check && pos == 0 && a.value == 1) {
            ev.kind = EventKind::CheckShort;
            cur.expected = 1;
        }
        if (ev.action_count == cur.expected) {
            cur.open = false;
        }
    }
    for (const auto& cur : open) {
        if (cur.open) {
            throw TraceError(TraceError::Code::IncompleteTrace,
                             "trace ends inside operation " +
                                 std::to_string(s.events[cur.event].id));
        }
    }
    std::sort(op_ids.begin(), op_ids.end());
    if (std::adjacent_find(op_ids.begin(), op_ids.end()) != op_ids.end()) {
        malformed("an operation id is used by more than one operation");
    }

    // writer-of map
    s.omega.assign(s.actions.size(), -1);
    std::array<std::int32_t, kRegisterCount> last_write;
    last_write.fill(-1);
    for (std::size_t i = 0; i < s.actions.size(); ++i) {
        const auto& a = s.actions[i];
        if (a.kind == ActionKind::Write) {
            last_write[static_cast<std::size_t>(a.reg)] = static_cast<std::int32_t>(i);
        } else if (a.kind == ActionKind::Read) {
            s.omega[i] = last_write[static_cast<std::size_t>(a.reg)];
        }
    }

    for (EventIndex e = 2; e < s.events.size(); ++e) {
        const auto& ev = s.events[e];
        if (ev.actor == Actor::Postman) {
            s.delivers.push_back(e);
        } else {
            s.homeowner_ops.push_back(e);
            (ev.kind == EventKind::Remove ? s.removes : s.checks).push_back(e);
        }
    }

    // derived attributes
    auto& evs = s.events;
    evs[0].dn = 0;
    evs[0].polarity = Polarity::Negative;
    evs[1].rn = 0;
    evs[1].polarity = Polarity::Negative;
    if (six_four) {
        evs[0].color = 0;
        evs[1].color = 0;
    }

    for (EventIndex e : s.delivers) {
        auto& d = evs[e];
        d.letter = static_cast<Letter>(s.actions[d.action_index[0]].value);
        d.dn = d.ordinal;
        if (six_four) {
            const auto dn_local = value_at(s, e, Register::Dn, ActionKind::Write);
            const auto rn_local = value_at(s, e, Register::Rn, ActionKind::Read);
            d.color = static_cast<std::uint8_t>(value_at(s, e, Register::Tp, ActionKind::Write));
            d.polarity = rn_local < dn_local ? Polarity::Positive : Polarity::Negative;
            d.alpha = s.writer_seen(e, Register::Rn);
        }
    }

    EventIndex last_remove = EventStructure::kInitHomeowner;
    std::uint64_t removes_before = 0;
    std::uint64_t baseline_rn = 0;
    for (EventIndex e : s.homeowner_ops) {
        auto& x = evs[e];
        if (x.kind == EventKind::Remove) {
            x.letter = static_cast<Letter>(s.actions[x.action_index[0]].value);
            x.rn = x.ordinal;
            if (six_four) {
                x.color = static_cast<std::uint8_t>(value_at(s, e, Register::Th, ActionKind::Write));
                x.polarity = value_at(s, e, Register::Fh, ActionKind::Write) != 0
                                 ? Polarity::Positive
                                 : Polarity::Negative;
                x.alpha = s.writer_seen(e, Register::Dn);
            }
            last_remove = e;
            ++removes_before;
            continue;
        }
        x.rn = removes_before;
        x.prerem = last_remove;
        switch (x.kind) {
        case EventKind::CheckShort: {
            x.verdict = true;
            const auto& pr = evs[last_remove];
            x.rho = pr.alpha ? *pr.alpha : EventStructure::kInitPostman;
            break;
        }
        case EventKind::CheckLong: {
            const auto th = value_at(s, e, Register::Th, ActionKind::Read);
            const auto tp = value_at(s, e, Register::Tp, ActionKind::Read);
            const auto fp = value_at(s, e, Register::Fp, ActionKind::Read);
            x.verdict = check_verdict(false, static_cast<std::uint8_t>(th),
                                      static_cast<std::uint8_t>(tp),
                                      static_cast<std::uint8_t>(fp), s.header.predicate);
            x.color = static_cast<std::uint8_t>(tp);
            x.rho = s.writer_seen(e, Register::Fp);
            break;
        }
        case EventKind::CheckCounter: {
            const auto dn = value_at(s, e, Register::Dn, ActionKind::Read);
            x.verdict = dn > static_cast<std::int64_t>(baseline_rn);
            if (*x.verdict) {
                ++baseline_rn;
            }
            x.rho = s.writer_seen(e, Register::Dn);
            break;
        }
        default:
            break;
        }
        x.polarity = *x.verdict ? Polarity::Positive : Polarity::Negative;
    }
    return s;
}

EventIndex alpha(const EventStructure& s, EventIndex x) {
    const auto& a = s.event(x).alpha;
    if (!a) {
        throw std::invalid_argument("alpha is defined for 6/4 delivers and removes only");
    }
    return *a;
}

EventIndex prerem(const EventStructure& s, EventIndex c) {
    const auto& p = s.event(c).prerem;
    if (!p) {
        throw std::invalid_argument("prerem is defined for checks only");
    }
    return *p;
}

EventIndex rho(const EventStructure& s, EventIndex c) {
    const auto& r = s.event(c).rho;
    if (!r) {
        throw std::invalid_argument("rho is defined for checks only");
    }
    return *r;
}

Counters counters(const EventStructure& s, EventIndex e) {
    return {s.event(e).dn, s.event(e).rn};
}

std::optional<std::uint8_t> color(const EventStructure& s, EventIndex e) { return s.event(e).color; }

TraceFacts check_trace_facts(const EventStructure& s) {
    TraceFacts f;
    const bool six_four = s.header.algorithm == Algorithm::SixFour;
    auto fail = [&](const char* check, std::string detail) {
        f.failures.push_back({check, std::move(detail)});
    };

    std::int64_t tp = 0, fp = 2, th = 0, fh = 0;
    auto observe = [&] {
        if (tp < 0 || tp > 1 || fp < 0 || fp > 2 || th < 0 || th > 1 || fh < 0 || fh > 1) {
            f.flags.out_of_domain = true;
            return;
        }
        f.flags.postman_pairs |= static_cast<std::uint8_t>(1u << (tp * 3 + fp));
        f.flags.homeowner_pairs |= static_cast<std::uint8_t>(1u << (th * 2 + fh));
    };
    if (six_four) {
        observe();
    }

    for (std::size_t i = 0; i < s.actions.size(); ++i) {
        const auto& a = s.actions[i];
        const bool initial = a.seq < 0;
        if (a.reg != Register::Queue && !in_domain(a.reg, a.value)) {
            fail("domain", "seq " + std::to_string(a.seq) + ": " + std::string(to_string(a.reg)) +
                               " = " + std::to_string(a.value));
        }
        if (a.kind == ActionKind::Write && writer_of(a.reg) != a.actor) {
            fail("writer", "seq " + std::to_string(a.seq) + ": " + std::string(to_string(a.actor)) +
                               " wrote " + std::string(to_string(a.reg)));
        }
        if (a.kind == ActionKind::Read) {
            const auto w = s.omega[i];
            if (w < 0 || s.actions[static_cast<std::size_t>(w)].value != a.value) {
                fail("omega", "seq " + std::to_string(a.seq) + " read " +
                                  std::string(to_string(a.reg)) + " = " + std::to_string(a.value) +
                                  " but the last write stored a different value");
            }
        }
        if (!initial && a.op == Operation::Check) {
            f.flags.check_reads |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(a.reg));
            const bool flag_read = a.kind == ActionKind::Read &&
                                   (a.reg == Register::Fh || a.reg == Register::Th ||
                                    a.reg == Register::Tp || a.reg == Register::Fp);
            if (six_four && !flag_read) {
                fail("access", "seq " + std::to_string(a.seq) + ": check touched " +
                                   std::string(to_string(a.reg)));
            }
        }
        if (six_four && !initial && a.kind == ActionKind::Write) {
            switch (a.reg) {
            case Register::Tp:
                tp = a.value;
                break;
            case Register::Fp:
                fp = a.value;
                break;
            case Register::Th:
                th = a.value;
                break;
            case Register::Fh:
                fh = a.value;
                break;
            default:
                break;
            }
            observe();
        }
    }

    for (EventIndex e = 2; e < s.events.size(); ++e) {
        const auto& ev = s.events[e];
        f.max_actions_per_op = std::max<std::uint32_t>(f.max_actions_per_op, ev.action_count);
        int want = 0;
        switch (ev.kind) {
        case EventKind::Deliver:
            want = six_four ? 6 : 2;
            break;
        case EventKind::Remove:
            want = six_four ? 6 : 1;
            break;
        case EventKind::CheckShort:
        case EventKind::CheckCounter:
            want = 1;
            break;
        case EventKind::CheckLong:
            want = 4;
            break;
        default:
            break;
        }
        if (ev.action_count != want) {
            fail("wait-free", s.name(e) + " has " + std::to_string(ev.action_count) + " actions");
        }
    }

    for (EventIndex e : s.delivers) {
        auto w = s.find_action(e, Register::Dn, ActionKind::Write);
        if (w && s.actions[*w].value != static_cast<std::int64_t>(s.event(e).ordinal)) {
            fail("numbering", s.name(e) + " wrote Dn = " + std::to_string(s.actions[*w].value));
        }
    }
    for (EventIndex e : s.removes) {
        auto w = s.find_action(e, Register::Rn, ActionKind::Write);
        if (w && s.actions[*w].value != static_cast<std::int64_t>(s.event(e).ordinal)) {
            fail("numbering", s.name(e) + " wrote Rn = " + std::to_string(s.actions[*w].value));
        }
    }

    for (std::size_t k = 0; k < s.homeowner_ops.size(); ++k) {
        const auto e = s.homeowner_ops[k];
        if (s.event(e).kind != EventKind::Remove) {
            continue;
        }
        const bool ok = k > 0 && s.event(s.homeowner_ops[k - 1]).is_check() &&
                        s.event(s.homeowner_ops[k - 1]).verdict == true;
        if (!ok) {
            fail("protocol", s.name(e) + " is not immediately preceded by a positive check");
        }
    }

    for (EventIndex e : s.removes) {
        const auto& r = s.event(e);
        if (r.letter == 0) {
            fail("empty-dequeue", s.name(e) + " dequeued from an empty queue");
            continue;
        }
        if (r.ordinal > s.delivers.size() ||
            s.event(s.delivers[r.ordinal - 1]).letter != r.letter) {
            fail("fifo", s.name(e) + " dequeued letter " + std::to_string(*r.letter) +
                             " which is not the letter of D" + std::to_string(r.ordinal));
        }
    }
    return f;
}

std::vector<Finding> check_propositions(const EventStructure& s) {
    std::vector<Finding> out;
    if (s.header.algorithm != Algorithm::SixFour) {
        return out;
    }
    auto fail = [&](const char* p, std::string detail) { out.push_back({p, std::move(detail)}); };
    // Position on the postman chain: 0 for I_p, i for D_i. X <= Y on postman
    // events is pidx(X) <= pidx(Y) because the chain is serial.
    auto pidx = [&](EventIndex e) -> std::uint32_t { return e == 0 ? 0 : s.event(e).ordinal; };
    auto is_postman = [&](EventIndex e) { return s.event(e).actor == Actor::Postman; };

    for (EventIndex r : s.removes) {
        if (alpha(s, r) == EventStructure::kInitPostman) {
            fail("alpha", "alpha(" + s.name(r) + ") = I_p");
        }
    }
    for (std::size_t k = 1; k < s.removes.size(); ++k) {
        const auto a = alpha(s, s.removes[k - 1]);
        const auto b = alpha(s, s.removes[k]);
        if (pidx(a) > pidx(b)) {
            fail("RR", "alpha(" + s.name(s.removes[k - 1]) + ") = " + s.name(a) + " but alpha(" +
                           s.name(s.removes[k]) + ") = " + s.name(b));
        }
    }

    // Delivers completed before a given seq: delivers are serial and sorted.
    auto delivers_ended_before = [&](std::int64_t seq) {
        std::uint32_t n = 0;
        while (n < s.delivers.size() && s.event(s.delivers[n]).last_seq < seq) {
            ++n;
        }
        return n;
    };

    std::uint32_t suffix_min = UINT32_MAX;
    std::vector<std::uint32_t> min_alpha_after(s.homeowner_ops.size(), UINT32_MAX);
    for (std::size_t k = s.homeowner_ops.size(); k-- > 0;) {
        min_alpha_after[k] = suffix_min;
        const auto e = s.homeowner_ops[k];
        if (s.event(e).kind == EventKind::Remove) {
            suffix_min = std::min(suffix_min, pidx(alpha(s, e)));
        }
    }

    for (std::size_t k = 0; k < s.homeowner_ops.size(); ++k) {
        const EventIndex c = s.homeowner_ops[k];
        const auto& ev = s.event(c);
        if (!ev.is_check()) {
            continue;
        }
        const EventIndex r = rho(s, c);
        const std::string cn = s.name(c);
        if (!is_postman(r)) {
            fail("rho", "rho(" + cn + ") = " + s.name(r) + " is not a postman event");
            continue;
        }

        // NP: the first deliver after C must follow rho(C).
        auto it = std::find_if(s.delivers.begin(), s.delivers.end(),
                               [&](EventIndex d) { return ev.last_seq < s.event(d).first_seq; });
        if (it != s.delivers.end() && !s.precedes(r, *it)) {
            fail("NP", cn + " < " + s.name(*it) + " but rho(" + cn + ") = " + s.name(r) +
                           " does not precede it");
        }

        if (min_alpha_after[k] != UINT32_MAX && pidx(r) > min_alpha_after[k]) {
            fail("lemm1", "rho(" + cn + ") = " + s.name(r) +
                              " is after the alpha of a later remove");
        }

        if (ev.kind == EventKind::CheckLong) {
            const EventIndex pr = prerem(s, c);
            const bool rhs = s.event(r).positive() && ev.color != s.event(pr).color &&
                             s.event(r).color == ev.color;
            if (ev.positive() != rhs) {
                fail("Q", cn + " positive=" + std::to_string(ev.positive()) +
                              " but the color/polarity condition is " + std::to_string(rhs));
            }
            if (pr != EventStructure::kInitHomeowner) {
                const auto w2 = s.find_action(r, Register::Tp, ActionKind::Write);
                const auto r1 = s.find_action(pr, Register::Tp, ActionKind::Read);
                if (w2 && r1 && s.actions[*w2].seq < s.actions[*r1].seq && ev.positive()) {
                    fail("P", cn + " is positive although w2(" + s.name(r) + ") < r1(" +
                                  s.name(pr) + ")");
                }
            }
        }

        if (ev.positive()) {
            if (r == EventStructure::kInitPostman || *ev.rn >= *s.event(r).dn) {
                fail("P11", cn + " is positive with rn = " + std::to_string(*ev.rn) +
                                " and rho = " + s.name(r) + " (dn " +
                                std::to_string(*s.event(r).dn) + ")");
            }
        } else {
            const auto ended = delivers_ended_before(ev.first_seq);
            if (*ev.rn < ended) {
                fail("P3", cn + " is negative with rn = " + std::to_string(*ev.rn) + " although D" +
                               std::to_string(ended) + " precedes it");
            }
        }
    }
    return out;
}

} // namespace mailbox
