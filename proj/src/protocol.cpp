#include "mailbox/protocol.hpp"

namespace mailbox {

void MailQueue::enqueue(Letter letter) {
    if (count_ == kCapacity) {
        throw StepError("mail queue capacity exceeded");
    }
    slots_[(head_ + count_) % kCapacity] = letter;
    ++count_;
}

std::optional<Letter> MailQueue::dequeue() {
    if (count_ == 0) {
        return std::nullopt;
    }
    Letter l = slots_[head_];
    head_ = static_cast<std::uint8_t>((head_ + 1) % kCapacity);
    --count_;
    return l;
}

bool EnabledSteps::contains(const StepId& s) const {
    for (const auto& e : *this) {
        if (e == s) {
            return true;
        }
    }
    return false;
}

std::optional<StepId> EnabledSteps::for_actor(Actor a) const {
    for (const auto& e : *this) {
        if (e.actor == a) {
            return e;
        }
    }
    return std::nullopt;
}

ProtocolState init_state(Algorithm algorithm, Predicate predicate, DriverBudget budget) {
    ProtocolState s;
    s.algorithm = algorithm;
    s.predicate = predicate;
    s.budget = budget;
    return s;
}

EnabledSteps enabled_steps(const ProtocolState& s) {
    EnabledSteps out;
    if (!s.postman_idle()) {
        out.steps[out.count++] = {Actor::Postman, StepKind::Advance, Operation::Deliver};
    } else if (s.budget.delivers_left > 0) {
        out.steps[out.count++] = {Actor::Postman, StepKind::Begin, Operation::Deliver};
    }

    const auto& h = s.homeowner;
    if (h.activity == HomeownerActivity::Check) {
        out.steps[out.count++] = {Actor::Homeowner, StepKind::Advance, Operation::Check};
    } else if (h.activity == HomeownerActivity::Remove) {
        out.steps[out.count++] = {Actor::Homeowner, StepKind::Advance, Operation::Remove};
    } else if (s.budget.checks_left > 0) {
        // The loop stops with the last budgeted check, so a remove is only
        // begun when another check can follow it.
        Operation next = h.remove_due ? Operation::Remove : Operation::Check;
        out.steps[out.count++] = {Actor::Homeowner, StepKind::Begin, next};
    }
    return out;
}

namespace {

ActionRecord stamp(ProtocolState& s, Actor actor, std::uint32_t op_id, Operation op,
                   std::uint8_t line, ActionKind kind, Register reg, std::int64_t value) {
    ActionRecord r;
    r.seq = static_cast<std::int64_t>(s.next_seq++);
    r.actor = actor;
    r.op_id = op_id;
    r.op = op;
    r.line = line;
    r.kind = kind;
    r.reg = reg;
    r.value = value;
    return r;
}

void take_budget(std::uint32_t& left) {
    if (left != kUnbounded) {
        --left;
    }
}

void begin(ProtocolState& s, StepId step) {
    if (step.actor == Actor::Postman) {
        s.postman.pc = 1;
        s.postman.op_id = s.next_op_id++;
        take_budget(s.budget.delivers_left);
        return;
    }
    auto& h = s.homeowner;
    h.op_id = s.next_op_id++;
    h.pc = 1;
    if (step.op == Operation::Check) {
        h.activity = HomeownerActivity::Check;
        take_budget(s.budget.checks_left);
    } else {
        h.activity = HomeownerActivity::Remove;
        h.remove_due = false;
    }
}

Letter take_letter(ProtocolState& s) {
    auto l = s.queue.dequeue();
    if (!l) {
        s.dequeue_on_empty = true;
        return 0;
    }
    return *l;
}

ActionRecord deliver_six_four(ProtocolState& s) {
    auto& p = s.postman;
    auto& reg = s.registers;
    const auto id = p.op_id;
    constexpr auto A = Actor::Postman;
    constexpr auto O = Operation::Deliver;
    switch (p.pc) {
    case 1: {
        auto letter = static_cast<Letter>(p.dn + 1);
        s.queue.enqueue(letter);
        p.pc = 2;
        return stamp(s, A, id, O, 1, ActionKind::Enqueue, Register::Queue, letter);
    }
    case 2:
        p.dn += 1;
        reg.dn = p.dn;
        p.pc = 3;
        return stamp(s, A, id, O, 2, ActionKind::Write, Register::Dn,
                     static_cast<std::int64_t>(reg.dn));
    case 3:
        p.t = reg.th;
        p.pc = 4;
        return stamp(s, A, id, O, 3, ActionKind::Read, Register::Th, p.t);
    case 4:
        reg.tp = static_cast<std::uint8_t>(1 - p.t);
        p.pc = 5;
        return stamp(s, A, id, O, 4, ActionKind::Write, Register::Tp, reg.tp);
    case 5:
        p.rn = reg.rn;
        p.pc = 6;
        return stamp(s, A, id, O, 5, ActionKind::Read, Register::Rn,
                     static_cast<std::int64_t>(p.rn));
    case 6:
        reg.fp = p.rn < p.dn ? static_cast<std::uint8_t>(1 - p.t) : std::uint8_t{2};
        p.pc = 0;
        return stamp(s, A, id, O, 6, ActionKind::Write, Register::Fp, reg.fp);
    default:
        throw StepError("postman has no deliver line to execute");
    }
}

ActionRecord check_six_four(ProtocolState& s) {
    auto& h = s.homeowner;
    const auto& reg = s.registers;
    const auto id = h.op_id;
    constexpr auto A = Actor::Homeowner;
    constexpr auto O = Operation::Check;
    auto finish = [&](bool verdict) {
        h.activity = HomeownerActivity::Idle;
        h.pc = 0;
        h.last_verdict = verdict;
        h.remove_due = verdict;
    };
    switch (h.pc) {
    case 1: {
        h.fh = reg.fh;
        auto r = stamp(s, A, id, O, 1, ActionKind::Read, Register::Fh, h.fh ? 1 : 0);
        if (h.fh) {
            finish(true);
        } else {
            h.pc = 2;
        }
        return r;
    }
    case 2:
        h.th = reg.th;
        h.pc = 3;
        return stamp(s, A, id, O, 2, ActionKind::Read, Register::Th, h.th);
    case 3:
        h.tp = reg.tp;
        h.pc = 4;
        return stamp(s, A, id, O, 3, ActionKind::Read, Register::Tp, h.tp);
    case 4: {
        h.fp = reg.fp;
        auto r = stamp(s, A, id, O, 4, ActionKind::Read, Register::Fp, h.fp);
        finish(check_verdict(h.fh, h.th, h.tp, h.fp, s.predicate));
        return r;
    }
    default:
        throw StepError("homeowner has no check line to execute");
    }
}

ActionRecord remove_six_four(ProtocolState& s) {
    auto& h = s.homeowner;
    auto& reg = s.registers;
    const auto id = h.op_id;
    constexpr auto A = Actor::Homeowner;
    constexpr auto O = Operation::Remove;
    switch (h.pc) {
    case 1: {
        auto letter = take_letter(s);
        h.pc = 2;
        return stamp(s, A, id, O, 1, ActionKind::Dequeue, Register::Queue, letter);
    }
    case 2:
        h.rn += 1;
        reg.rn = h.rn;
        h.pc = 3;
        return stamp(s, A, id, O, 2, ActionKind::Write, Register::Rn,
                     static_cast<std::int64_t>(reg.rn));
    case 3:
        h.t = reg.tp;
        h.pc = 4;
        return stamp(s, A, id, O, 3, ActionKind::Read, Register::Tp, h.t);
    case 4:
        reg.th = h.t;
        h.pc = 5;
        return stamp(s, A, id, O, 4, ActionKind::Write, Register::Th, reg.th);
    case 5:
        h.dn = reg.dn;
        h.pc = 6;
        return stamp(s, A, id, O, 5, ActionKind::Read, Register::Dn,
                     static_cast<std::int64_t>(h.dn));
    case 6:
        reg.fh = h.rn < h.dn;
        h.pc = 0;
        h.activity = HomeownerActivity::Idle;
        return stamp(s, A, id, O, 6, ActionKind::Write, Register::Fh, reg.fh ? 1 : 0);
    default:
        throw StepError("homeowner has no remove line to execute");
    }
}

// Baseline: Q is indexed by the delivery/removal counters, modeled as the same FIFO.
ActionRecord deliver_unbounded(ProtocolState& s) {
    auto& p = s.postman;
    const auto id = p.op_id;
    constexpr auto A = Actor::Postman;
    constexpr auto O = Operation::Deliver;
    if (p.pc == 1) {
        auto letter = static_cast<Letter>(p.dn + 1);
        s.queue.enqueue(letter);
        p.pc = 3;
        return stamp(s, A, id, O, 1, ActionKind::Enqueue, Register::Queue, letter);
    }
    if (p.pc == 3) {
        // line 2 (dn := dn + 1) is local and runs with line 3
        p.dn += 1;
        s.registers.dn = p.dn;
        p.pc = 0;
        return stamp(s, A, id, O, 3, ActionKind::Write, Register::Dn,
                     static_cast<std::int64_t>(p.dn));
    }
    throw StepError("postman has no deliver line to execute");
}

ActionRecord check_unbounded(ProtocolState& s) {
    auto& h = s.homeowner;
    h.dn = s.registers.dn;
    auto r = stamp(s, Actor::Homeowner, h.op_id, Operation::Check, 1, ActionKind::Read,
                   Register::Dn, static_cast<std::int64_t>(h.dn));
    bool verdict = h.dn > h.rn;
    if (verdict) {
        h.rn += 1;
    }
    h.activity = HomeownerActivity::Idle;
    h.pc = 0;
    h.last_verdict = verdict;
    h.remove_due = verdict;
    return r;
}

ActionRecord remove_unbounded(ProtocolState& s) {
    auto& h = s.homeowner;
    auto letter = take_letter(s);
    h.activity = HomeownerActivity::Idle;
    h.pc = 0;
    return stamp(s, Actor::Homeowner, h.op_id, Operation::Remove, 1, ActionKind::Dequeue,
                 Register::Queue, letter);
}

ActionRecord advance(ProtocolState& s, Actor actor) {
    const bool six_four = s.algorithm == Algorithm::SixFour;
    if (actor == Actor::Postman) {
        return six_four ? deliver_six_four(s) : deliver_unbounded(s);
    }
    if (s.homeowner.activity == HomeownerActivity::Check) {
        return six_four ? check_six_four(s) : check_unbounded(s);
    }
    return six_four ? remove_six_four(s) : remove_unbounded(s);
}

} // namespace

std::optional<ActionRecord> apply_step(ProtocolState& state, StepId step) {
    if (!enabled_steps(state).contains(step)) {
        throw StepError("step is not enabled");
    }
    if (step.kind == StepKind::Begin) {
        begin(state, step);
        return std::nullopt;
    }
    return advance(state, step.actor);
}

StepResult successor(const ProtocolState& state, StepId step) {
    StepResult r{state, std::nullopt};
    r.record = apply_step(r.state, step);
    return r;
}

StepResult unbounded_step(const ProtocolState& state, StepId step) {
    if (state.algorithm != Algorithm::Unbounded) {
        throw StepError("unbounded_step requires the unbounded algorithm");
    }
    return successor(state, step);
}

} // namespace mailbox
