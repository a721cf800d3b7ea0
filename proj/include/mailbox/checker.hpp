#pragma once

// Runs every per-trace check: action-level facts, the 6/4 propositions, the
// lhd lemmas, the linearization and the axioms.

#include "mailbox/axioms.hpp"
#include "mailbox/linearizer.hpp"
#include "mailbox/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace mailbox {

/// Failure counters keyed by check name, e.g. "linear.item3", "axiom.7",
/// "prop.P11", "fact.fifo", "lemma.L1", "structure".
using FailureCounts = std::map<std::string, std::uint64_t>;

struct TraceVerdict {
    std::optional<TraceError> structure_error;
    EventStructure structure;
    TraceFacts facts;
    std::vector<Finding> propositions;
    std::vector<Finding> lemmas;
    LinearizationVerdict linearization;
    AxiomReport axioms;

    bool ok() const;
    /// Adds `weight` to the counter of every failed check (once per check name).
    void tally(FailureCounts& counts, std::uint64_t weight = 1) const;
    /// One line per failure.
    std::vector<std::string> failure_lines() const;
};

TraceVerdict check_trace(const Trace& trace, CheckMode mode = CheckMode::Auto);

} // namespace mailbox
