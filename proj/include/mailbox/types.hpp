#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mailbox {

enum class Actor : std::uint8_t { Postman, Homeowner };

// Queue is the mailbox FIFO; enqueue/dequeue are its two actions.
enum class Register : std::uint8_t { Dn, Tp, Fp, Rn, Th, Fh, Queue };
inline constexpr int kRegisterCount = 7;

enum class ActionKind : std::uint8_t { Read, Write, Enqueue, Dequeue };

// The high-level operation an action belongs to, as recorded in a trace.
enum class Operation : std::uint8_t { Deliver, Check, Remove };

enum class Predicate : std::uint8_t { Full, TpNeThOnly };

enum class Algorithm : std::uint8_t { SixFour, Unbounded };

using Letter = std::uint32_t;

std::string_view to_string(Actor a);
std::string_view to_string(Register r);
std::string_view to_string(ActionKind k);
std::string_view to_string(Operation o);
std::string_view to_string(Predicate p);
std::string_view to_string(Algorithm a);

std::optional<Actor> parse_actor(std::string_view s);
std::optional<Register> parse_register(std::string_view s);
std::optional<ActionKind> parse_action_kind(std::string_view s);
std::optional<Operation> parse_operation(std::string_view s);
std::optional<Predicate> parse_predicate(std::string_view s);
std::optional<Algorithm> parse_algorithm(std::string_view s);

// The process allowed to write a register (the queue is shared: both touch it).
constexpr std::optional<Actor> writer_of(Register r) {
    switch (r) {
    case Register::Dn:
    case Register::Tp:
    case Register::Fp:
        return Actor::Postman;
    case Register::Rn:
    case Register::Th:
    case Register::Fh:
        return Actor::Homeowner;
    case Register::Queue:
        break;
    }
    return std::nullopt;
}

// Domain check for register values; Dn and Rn are naturals.
constexpr bool in_domain(Register r, std::int64_t v) {
    switch (r) {
    case Register::Dn:
    case Register::Rn:
        return v >= 0;
    case Register::Tp:
    case Register::Th:
    case Register::Fh:
        return v == 0 || v == 1;
    case Register::Fp:
        return v >= 0 && v <= 2;
    case Register::Queue:
        return v >= 0;
    }
    return false;
}

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mailbox
