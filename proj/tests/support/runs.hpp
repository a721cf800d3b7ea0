#pragma once

// Helpers that drive the step machine one whole operation at a time.

#include "mailbox/protocol.hpp"

#include <string>
#include <vector>

namespace runs {

using namespace mailbox;

struct Sequential {
    ProtocolState state;
    Trace trace;
    std::vector<bool> verdicts; // one per check, in order
};

/// Runs one operation to completion. Returns the check verdict for checks.
inline bool run_op(Sequential& run, Actor actor, Operation op) {
    auto& s = run.state;
    apply_step(s, StepId{actor, StepKind::Begin, op});
    auto busy = [&] { return actor == Actor::Postman ? !s.postman_idle() : !s.homeowner_idle(); };
    while (busy()) {
        if (auto rec = apply_step(s, StepId{actor, StepKind::Advance, op})) {
            run.trace.actions.push_back(*rec);
        }
    }
    if (op == Operation::Check) {
        run.verdicts.push_back(s.homeowner.last_verdict);
        ++run.trace.header.checks;
    } else if (op == Operation::Deliver) {
        ++run.trace.header.delivers;
    }
    return s.homeowner.last_verdict;
}

/// `script` letters: d deliver, c check, r remove.
inline Sequential sequential(const std::string& script, Algorithm alg = Algorithm::SixFour,
                             Predicate pred = Predicate::Full) {
    Sequential run{init_state(alg, pred), {}, {}};
    run.trace.header.algorithm = alg;
    run.trace.header.predicate = pred;
    for (char c : script) {
        if (c == 'd') {
            run_op(run, Actor::Postman, Operation::Deliver);
        } else if (c == 'c') {
            run_op(run, Actor::Homeowner, Operation::Check);
        } else {
            run_op(run, Actor::Homeowner, Operation::Remove);
        }
    }
    return run;
}

} // namespace runs
