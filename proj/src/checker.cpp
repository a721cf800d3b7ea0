#include "mailbox/checker.hpp"

#include <set>

namespace mailbox {

bool TraceVerdict::ok() const {
    return !structure_error && facts.failures.empty() && propositions.empty() && lemmas.empty() &&
           linearization.ok && axioms.ok();
}

void TraceVerdict::tally(FailureCounts& counts, std::uint64_t weight) const {
    std::set<std::string> keys;
    if (structure_error) {
        keys.insert("structure");
    }
    for (const auto& f : facts.failures) {
        keys.insert("fact." + f.check);
    }
    for (const auto& f : propositions) {
        keys.insert("prop." + f.check);
    }
    for (const auto& f : lemmas) {
        keys.insert("lemma." + f.check);
    }
    for (const auto& f : linearization.failures) {
        keys.insert("linear.item" + std::to_string(f.item));
    }
    for (const auto& r : axioms.results) {
        if (!r.ok) {
            keys.insert("axiom." + r.axiom);
        }
    }
    for (const auto& k : keys) {
        counts[k] += weight;
    }
}

std::vector<std::string> TraceVerdict::failure_lines() const {
    std::vector<std::string> out;
    if (structure_error) {
        out.push_back(std::string("structure: ") + structure_error->what());
        return out;
    }
    for (const auto& f : facts.failures) {
        out.push_back("fact " + f.check + ": " + f.detail);
    }
    for (const auto& f : propositions) {
        out.push_back("proposition " + f.check + ": " + f.detail);
    }
    for (const auto& f : lemmas) {
        out.push_back("lemma " + f.check + ": " + f.detail);
    }
    for (const auto& f : linearization.failures) {
        out.push_back("linear item " + std::to_string(f.item) + ": " + f.detail);
    }
    for (const auto& r : axioms.results) {
        if (!r.ok) {
            out.push_back("axiom " + r.axiom + ": " + r.witness.value_or(""));
        }
    }
    return out;
}

TraceVerdict check_trace(const Trace& trace, CheckMode mode) {
    TraceVerdict v{};
    try {
        v.structure = build_event_structure(trace);
    } catch (const TraceError& e) {
        v.structure_error = e;
        return v;
    }
    v.facts = check_trace_facts(v.structure);
    v.propositions = check_propositions(v.structure);
    const auto x = abstract_execution(v.structure);
    v.lemmas = check_lhd_lemmas(x, mode);
    v.linearization = linearize(x, mode);
    v.axioms = check_axioms(x, mode);
    return v;
}

} // namespace mailbox
