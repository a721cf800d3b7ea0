#pragma once

// Atomic-step state machines for the 6/4 mailbox algorithm and the unbounded
// baseline. Every numbered code line performs at most one shared action; local
// assignments on that line happen atomically with it.

#include "mailbox/action.hpp"
#include "mailbox/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace mailbox {

struct RegisterFile {
    std::uint64_t dn = 0;
    std::uint8_t tp = 0;
    std::uint8_t fp = 2;
    std::uint64_t rn = 0;
    std::uint8_t th = 0;
    bool fh = false;

    bool operator==(const RegisterFile&) const = default;
};

/// Bounded FIFO of letters. Capacity is far beyond any explorable bound.
class MailQueue {
public:
    static constexpr std::size_t kCapacity = 64;

    void enqueue(Letter letter);
    /// nullopt when empty; the caller records the violation.
    std::optional<Letter> dequeue();
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool operator==(const MailQueue&) const = default;

private:
    std::array<Letter, kCapacity> slots_{};
    std::uint8_t head_ = 0;
    std::uint8_t count_ = 0;
};

enum class HomeownerActivity : std::uint8_t { Idle, Check, Remove };

struct PostmanLocals {
    std::uint64_t dn = 0;
    std::uint64_t rn = 0;
    std::uint8_t t = 0;
    std::uint8_t pc = 0; // 0 idle, otherwise the next deliver line to execute
    std::uint32_t op_id = 0;

    bool operator==(const PostmanLocals&) const = default;
};

struct HomeownerLocals {
    bool fh = false;
    std::uint8_t th = 0;
    std::uint8_t tp = 0;
    std::uint8_t fp = 0;
    std::uint64_t rn = 0;
    std::uint64_t dn = 0;
    std::uint8_t t = 0;
    HomeownerActivity activity = HomeownerActivity::Idle;
    std::uint8_t pc = 0;
    std::uint32_t op_id = 0;
    // Driver state for the check-until-true loop, not a variable of check.
    bool remove_due = false;
    bool last_verdict = false;

    bool operator==(const HomeownerLocals&) const = default;
};

/// How many operations each process may still begin (kUnbounded for no limit).
struct DriverBudget {
    std::uint32_t delivers_left = 0;
    std::uint32_t checks_left = 0;

    bool operator==(const DriverBudget&) const = default;
};

struct ProtocolState {
    Algorithm algorithm = Algorithm::SixFour;
    Predicate predicate = Predicate::Full;
    RegisterFile registers;
    PostmanLocals postman;
    HomeownerLocals homeowner;
    MailQueue queue;
    DriverBudget budget;
    std::uint64_t next_seq = 0;
    std::uint32_t next_op_id = 2; // 0 and 1 name the initial events
    bool dequeue_on_empty = false;

    bool operator==(const ProtocolState&) const = default;

    bool postman_idle() const { return postman.pc == 0; }
    bool homeowner_idle() const { return homeowner.activity == HomeownerActivity::Idle; }
};

enum class StepKind : std::uint8_t { Begin, Advance };

struct StepId {
    Actor actor = Actor::Postman;
    StepKind kind = StepKind::Advance;
    Operation op = Operation::Deliver; // meaningful for Begin

    bool operator==(const StepId&) const = default;
};

/// At most one enabled step per process.
struct EnabledSteps {
    std::array<StepId, 2> steps{};
    std::uint8_t count = 0;

    const StepId* begin() const { return steps.data(); }
    const StepId* end() const { return steps.data() + count; }
    bool contains(const StepId& s) const;
    std::optional<StepId> for_actor(Actor a) const;
};

class StepError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

ProtocolState init_state(Algorithm algorithm = Algorithm::SixFour,
                         Predicate predicate = Predicate::Full,
                         DriverBudget budget = {kUnbounded, kUnbounded});

EnabledSteps enabled_steps(const ProtocolState& state);

/// Executes one step in place. Begin steps perform no shared action and return
/// nullopt. Throws StepError if the step is not enabled.
std::optional<ActionRecord> apply_step(ProtocolState& state, StepId step);

struct StepResult {
    ProtocolState state;
    std::optional<ActionRecord> record;
};

/// Pure form of apply_step.
StepResult successor(const ProtocolState& state, StepId step);

/// The baseline step machine: deliver = {enqueue, write Dn}, check = {read Dn}
/// with a persistent remove counter, remove = {dequeue}. Requires
/// state.algorithm == Algorithm::Unbounded.
StepResult unbounded_step(const ProtocolState& state, StepId step);

/// A long check's return value; fh short-circuits to true.
constexpr bool check_verdict(bool fh, std::uint8_t th, std::uint8_t tp, std::uint8_t fp,
                             Predicate variant) {
    if (fh) {
        return true;
    }
    if (variant == Predicate::TpNeThOnly) {
        return tp != th;
    }
    return tp != th && fp == tp;
}

/// Shared actions per completed operation, the wait-freedom constants.
constexpr int actions_per_deliver(Algorithm a) { return a == Algorithm::SixFour ? 6 : 2; }
constexpr int actions_per_remove(Algorithm a) { return a == Algorithm::SixFour ? 6 : 1; }

} // namespace mailbox
