#include "mailbox/types.hpp"

#include <array>
#include <utility>

namespace mailbox {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<std::string_view, E>, N>& table,
                        std::string_view s) {
    for (const auto& [name, value] : table) {
        if (name == s) {
            return value;
        }
    }
    return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<std::string_view, E>, N>& table, E e) {
    for (const auto& [name, value] : table) {
        if (value == e) {
            return name;
        }
    }
    return "?";
}

constexpr std::array<std::pair<std::string_view, Actor>, 2> kActors{{
    {"postman", Actor::Postman},
    {"homeowner", Actor::Homeowner},
}};

constexpr std::array<std::pair<std::string_view, Register>, 7> kRegisters{{
    {"Dn", Register::Dn},
    {"Tp", Register::Tp},
    {"Fp", Register::Fp},
    {"Rn", Register::Rn},
    {"Th", Register::Th},
    {"Fh", Register::Fh},
    {"queue", Register::Queue},
}};

constexpr std::array<std::pair<std::string_view, ActionKind>, 4> kActionKinds{{
    {"read", ActionKind::Read},
    {"write", ActionKind::Write},
    {"enqueue", ActionKind::Enqueue},
    {"dequeue", ActionKind::Dequeue},
}};

constexpr std::array<std::pair<std::string_view, Operation>, 3> kOperations{{
    {"deliver", Operation::Deliver},
    {"check", Operation::Check},
    {"remove", Operation::Remove},
}};

constexpr std::array<std::pair<std::string_view, Predicate>, 2> kPredicates{{
    {"full", Predicate::Full},
    {"tp-ne-th", Predicate::TpNeThOnly},
}};

constexpr std::array<std::pair<std::string_view, Algorithm>, 2> kAlgorithms{{
    {"six-four", Algorithm::SixFour},
    {"unbounded", Algorithm::Unbounded},
}};

} // namespace

std::string_view to_string(Actor a) { return name_of(kActors, a); }
std::string_view to_string(Register r) { return name_of(kRegisters, r); }
std::string_view to_string(ActionKind k) { return name_of(kActionKinds, k); }
std::string_view to_string(Operation o) { return name_of(kOperations, o); }
std::string_view to_string(Predicate p) { return name_of(kPredicates, p); }
std::string_view to_string(Algorithm a) { return name_of(kAlgorithms, a); }

std::optional<Actor> parse_actor(std::string_view s) { return lookup(kActors, s); }
std::optional<Register> parse_register(std::string_view s) { return lookup(kRegisters, s); }
std::optional<ActionKind> parse_action_kind(std::string_view s) { return lookup(kActionKinds, s); }
std::optional<Operation> parse_operation(std::string_view s) { return lookup(kOperations, s); }
std::optional<Predicate> parse_predicate(std::string_view s) { return lookup(kPredicates, s); }
std::optional<Algorithm> parse_algorithm(std::string_view s) { return lookup(kAlgorithms, s); }

} // namespace mailbox
