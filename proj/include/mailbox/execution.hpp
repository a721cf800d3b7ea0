#pragma once

// Event-level structure with no registers or actions: what the linearizer and
// the axiom checker consume. Precedence comes from [begin, end] intervals
// (a < b iff a.end < b.begin) unless an explicit successor relation is given.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mailbox {

struct EventStructure;

struct AbstractEvent {
    bool deliver = false;
    bool check = false;
    bool remove = false;
    bool initial = false;
    bool positive = false;
    std::int64_t begin = 0;
    std::int64_t end = 0;
    std::optional<std::uint64_t> dn;
    std::optional<std::uint64_t> rn;
    std::optional<std::uint32_t> rho;
    std::optional<std::uint32_t> letter;
    std::string label;

    bool homeowner() const { return check || remove; }
};

struct AbstractExecution {
    static constexpr std::size_t kMaxExplicit = 64;

    std::vector<AbstractEvent> events;
    /// Explicit strict precedence: bit j of successors[i] set iff i < j. Requires
    /// at most kMaxExplicit events. Lets tests build orders that are not interval orders.
    std::optional<std::vector<std::uint64_t>> successors;

    std::size_t size() const { return events.size(); }
    bool interval_based() const { return !successors.has_value(); }
    bool precedes(std::uint32_t a, std::uint32_t b) const {
        if (successors) {
            return ((*successors)[a] >> b) & 1u;
        }
        return events[a].end < events[b].begin;
    }
    std::string name(std::uint32_t e) const {
        return events[e].label.empty() ? "#" + std::to_string(e) : events[e].label;
    }
};

/// Both initial events get the interval [-1, -1], so they are incomparable and
/// precede everything else.
AbstractExecution abstract_execution(const EventStructure& s);

/// Which algorithm family a checker uses.
enum class CheckMode { Auto, Reference, Sweep };

/// Auto resolves to Reference for explicit relations or small structures.
CheckMode resolve_mode(const AbstractExecution& x, CheckMode m);

} // namespace mailbox
