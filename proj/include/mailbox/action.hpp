#pragma once

#include "mailbox/types.hpp"

#include <cstdint>
#include <vector>

namespace mailbox {

/// One atomic shared-memory event. `value` holds the value read or written,
/// the enqueued letter, or the dequeued letter (0 for a dequeue on an empty queue).
struct ActionRecord {
    std::int64_t seq = 0;
    Actor actor = Actor::Postman;
    std::uint32_t op_id = 0;
    Operation op = Operation::Deliver;
    std::uint8_t line = 0;
    ActionKind kind = ActionKind::Read;
    Register reg = Register::Dn;
    std::int64_t value = 0;

    bool operator==(const ActionRecord&) const = default;
};

inline constexpr std::uint32_t kUnbounded = 0xffffffffu;

struct TraceHeader {
    Algorithm algorithm = Algorithm::SixFour;
    Predicate predicate = Predicate::Full;
    std::uint32_t delivers = 0;
    std::uint32_t checks = 0;
    std::uint64_t seed = 0;

    bool operator==(const TraceHeader&) const = default;
};

/// A finite run: actions in increasing seq order, seq dense from 0.
struct Trace {
    TraceHeader header;
    std::vector<ActionRecord> actions;

    bool operator==(const Trace&) const = default;
};

} // namespace mailbox
