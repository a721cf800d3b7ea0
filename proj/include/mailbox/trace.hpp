#pragma once

// Event-level view of a trace: operation executions, the two initial events,
// real-time precedence, the writer-of map on reads, and the derived functions
// (alpha, rho, prerem, dn/rn counters, colors, polarity) used by the checkers.

#include "mailbox/action.hpp"
#include "mailbox/finding.hpp"
#include "mailbox/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mailbox {

enum class EventKind : std::uint8_t {
    Deliver,
    CheckShort,
    CheckLong,
    CheckCounter, // baseline check: a single read of Dn
    Remove,
    InitPostman,
    InitHomeowner,
};

std::string_view to_string(EventKind k);

enum class Polarity : std::uint8_t { Positive, Negative };

using EventIndex = std::uint32_t;

struct OperationExecution {
    std::uint32_t id = 0;
    EventKind kind = EventKind::Deliver;
    Actor actor = Actor::Postman;
    std::uint32_t ordinal = 0; // i in D_i / C_i / R_i
    std::array<std::uint32_t, 6> action_index{};
    std::uint8_t action_count = 0;
    std::int64_t first_seq = 0;
    std::int64_t last_seq = 0;

    std::optional<Letter> letter;
    std::optional<std::uint64_t> dn;
    std::optional<std::uint64_t> rn;
    std::optional<std::uint8_t> color;
    std::optional<Polarity> polarity;
    std::optional<bool> verdict;
    std::optional<EventIndex> alpha;
    std::optional<EventIndex> rho;
    std::optional<EventIndex> prerem;

    std::span<const std::uint32_t> actions() const { return {action_index.data(), action_count}; }
    bool is_check() const {
        return kind == EventKind::CheckShort || kind == EventKind::CheckLong ||
               kind == EventKind::CheckCounter;
    }
    bool is_initial() const {
        return kind == EventKind::InitPostman || kind == EventKind::InitHomeowner;
    }
    bool positive() const { return polarity == Polarity::Positive; }
};

class TraceError : public std::runtime_error {
public:
    enum class Code { IncompleteTrace, MalformedTrace };
    TraceError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

struct EventStructure {
    static constexpr EventIndex kInitPostman = 0;
    static constexpr EventIndex kInitHomeowner = 1;

    TraceHeader header;
    // Synthetic initial writes (seq -2 for I_p, -1 for I_h) followed by the trace.
    std::vector<ActionRecord> actions;
    std::vector<std::int32_t> omega; // per action: index of the write it read, or -1
    std::vector<EventIndex> owner;   // per action
    std::vector<OperationExecution> events; // I_p, I_h, then by first action
    std::vector<EventIndex> delivers;       // postman chain
    std::vector<EventIndex> homeowner_ops;  // homeowner chain (checks and removes)
    std::vector<EventIndex> removes;
    std::vector<EventIndex> checks;

    const OperationExecution& event(EventIndex e) const { return events[e]; }
    /// A < B iff every action of A precedes every action of B; I_p and I_h are incomparable.
    bool precedes(EventIndex a, EventIndex b) const;
    bool precedes_or_equal(EventIndex a, EventIndex b) const { return a == b || precedes(a, b); }
    /// D3, C1, R2, I_p, I_h.
    std::string name(EventIndex e) const;
    /// The action of event e with the given register and kind, if any.
    std::optional<std::uint32_t> find_action(EventIndex e, Register reg, ActionKind kind) const;
    /// The event owning the write observed by e's read of reg.
    std::optional<EventIndex> writer_seen(EventIndex e, Register reg) const;
};

/// Groups actions into operations and computes every derived attribute.
/// Throws TraceError for cut-off operations or actions that do not match the code.
EventStructure build_event_structure(const Trace& trace);

/// [omega(r2(x))]: for a deliver the writer of its Rn read, for a remove of its Dn read.
EventIndex alpha(const EventStructure& s, EventIndex x);
/// The last remove preceding c, else I_h.
EventIndex prerem(const EventStructure& s, EventIndex c);
/// short check: alpha(prerem(c)); long check: writer of its Fp read;
/// baseline check: writer of its Dn read.
EventIndex rho(const EventStructure& s, EventIndex c);

struct Counters {
    std::optional<std::uint64_t> dn;
    std::optional<std::uint64_t> rn;
};
Counters counters(const EventStructure& s, EventIndex e);
/// Undefined for short checks and baseline operations.
std::optional<std::uint8_t> color(const EventStructure& s, EventIndex e);

/// Register-pair values seen in any state along a trace.
struct FlagObservations {
    std::uint8_t postman_pairs = 0;   // bit tp*3+fp
    std::uint8_t homeowner_pairs = 0; // bit th*2+fh
    std::uint8_t check_reads = 0;     // bit per Register read by a check
    bool out_of_domain = false;

    void merge(const FlagObservations& o) {
        postman_pairs |= o.postman_pairs;
        homeowner_pairs |= o.homeowner_pairs;
        check_reads |= o.check_reads;
        out_of_domain |= o.out_of_domain;
    }
    bool operator==(const FlagObservations&) const = default;
};

struct TraceFacts {
    std::vector<Finding> failures; // checks: omega, domain, writer, access, wait-free, numbering, protocol, fifo, empty-dequeue
    FlagObservations flags;
    std::uint32_t max_actions_per_op = 0;
};

/// Action-level invariants of a single trace.
TraceFacts check_trace_facts(const EventStructure& s);

/// RR, NP, lemm1, Q, P, P11, P3 and alpha(R) != I_p on a 6/4 trace; empty for the baseline.
std::vector<Finding> check_propositions(const EventStructure& s);

} // namespace mailbox
