#pragma once

// Scripted schedules. One directive per line:
//
//   <actor> <operation> [lines a-b]
//
// where actor is `postman` or `homeowner`, operation is `deliver`, `check`
// or `remove`, and the optional range names code lines of that operation
// (`lines a` for a single line). Without a range the whole remaining
// operation runs. A range continues an operation the actor already started;
// a check stops after line 1 when it reads Fh = true. `#` starts a comment.

#include "mailbox/action.hpp"
#include "mailbox/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mailbox {

struct Directive {
    Actor actor = Actor::Postman;
    Operation op = Operation::Deliver;
    std::optional<std::uint8_t> first_line;
    std::optional<std::uint8_t> last_line;
    std::size_t source_line = 0;
};

struct Scenario {
    std::string name;
    std::vector<Directive> steps;
};

class IllegalDirective : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws ParseError on malformed text.
Scenario parse_scenario(std::string_view text, std::string name = "scenario");
Scenario load_scenario(const std::string& path);

/// Names of the scenarios compiled into the library.
std::vector<std::string> bundled_scenarios();
/// nullopt for an unknown name.
std::optional<Scenario> bundled_scenario(std::string_view name);

/// Runs the directives from the initial state with unbounded driver budgets.
/// Throws IllegalDirective when a directive cannot run at its turn.
Trace replay(const Scenario& scenario, Algorithm algorithm = Algorithm::SixFour,
             Predicate predicate = Predicate::Full);

} // namespace mailbox
