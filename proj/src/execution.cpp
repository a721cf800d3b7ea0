#include "mailbox/execution.hpp"

#include "mailbox/trace.hpp"

#include <stdexcept>

namespace mailbox {

AbstractExecution abstract_execution(const EventStructure& s) {
    AbstractExecution x;
    x.events.reserve(s.events.size());
    for (EventIndex e = 0; e < s.events.size(); ++e) {
        const auto& ev = s.events[e];
        AbstractEvent a;
        a.deliver = ev.kind == EventKind::Deliver;
        a.remove = ev.kind == EventKind::Remove;
        a.check = ev.is_check();
        a.initial = ev.is_initial();
        a.positive = ev.positive();
        if (a.initial) {
            a.begin = a.end = -1;
        } else {
            a.begin = ev.first_seq;
            a.end = ev.last_seq;
        }
        a.dn = ev.dn;
        a.rn = ev.rn;
        a.rho = ev.rho;
        a.letter = ev.letter;
        a.label = s.name(e);
        x.events.push_back(std::move(a));
    }
    return x;
}

CheckMode resolve_mode(const AbstractExecution& x, CheckMode m) {
    if (m == CheckMode::Sweep && !x.interval_based()) {
        throw std::invalid_argument("sweep checks need interval precedence");
    }
    if (m != CheckMode::Auto) {
        return m;
    }
    return !x.interval_based() || x.size() <= AbstractExecution::kMaxExplicit
               ? CheckMode::Reference
               : CheckMode::Sweep;
}

} // namespace mailbox
