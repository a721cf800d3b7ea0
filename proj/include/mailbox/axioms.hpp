#pragma once

// The nine event-level properties (with sub-items 1a and 1b) evaluated on an
// abstract execution. Nothing here knows about registers or actions.

#include "mailbox/execution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mailbox {

struct AxiomResult {
    std::string axiom; // "1", "1a", "1b", "2", ..., "9"
    bool ok = true;
    std::optional<std::string> witness;
};

struct AxiomReport {
    std::vector<AxiomResult> results;

    bool ok() const;
    const AxiomResult* find(const std::string& axiom) const;
};

AxiomReport check_axioms(const AbstractExecution& x, CheckMode mode = CheckMode::Auto);

} // namespace mailbox
