#pragma once

// The check/deliver relation lhd, the union with precedence, its linear
// extension and the four items of the linear mailbox specification.

#include "mailbox/execution.hpp"
#include "mailbox/finding.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mailbox {

enum class RelationKind : std::uint8_t { Precedence, Lhd, Union, Total };

struct OrderRelation {
    RelationKind kind = RelationKind::Precedence;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

    bool contains(std::uint32_t a, std::uint32_t b) const;
};

/// (C, D) for negative C with rn(C) < dn(D); (D, C) for positive C with dn(D) = rn(C) + 1.
OrderRelation build_lhd(const AbstractExecution& x);
OrderRelation precedence_relation(const AbstractExecution& x);
OrderRelation union_relation(const OrderRelation& a, const OrderRelation& b);

struct CycleCheck {
    bool acyclic = true;
    std::vector<std::uint32_t> cycle; // shortest cycle, first node not repeated
};

CycleCheck check_acyclic(const OrderRelation& r, std::size_t n);

struct LinearizationFailure {
    int item = 0; // 1..4
    std::vector<std::uint32_t> witnesses;
    std::string detail;
};

struct LinearizationVerdict {
    bool ok = true;
    bool cyclic = false;
    std::vector<std::uint32_t> cycle;
    std::vector<std::uint32_t> order;    // events in the total order; empty if cyclic
    std::vector<std::uint32_t> position; // inverse of order
    std::vector<std::uint32_t> remnum;   // per event: removes before it in the total order
    std::vector<std::uint32_t> delnum;   // per event: delivers before it
    std::vector<LinearizationFailure> failures;

    bool before(std::uint32_t a, std::uint32_t b) const { return position[a] < position[b]; }
    /// The total order as explicit pairs (quadratic).
    OrderRelation total() const;
};

/// Topological extension of precedence and lhd; ties go to the smaller begin,
/// then the smaller index (I_p before I_h).
LinearizationVerdict linearize(const AbstractExecution& x, CheckMode mode = CheckMode::Auto);

/// L1 (X lhd Y => not Y < X), L3 (C lhd D lhd C' => C < C'), L4 (no D lhd C lhd D').
std::vector<Finding> check_lhd_lemmas(const AbstractExecution& x,
                                      CheckMode mode = CheckMode::Auto);

} // namespace mailbox
