#pragma once

// Schedule generation: exhaustive exploration, seeded random walks and replay
// of scripted scenarios.
//
// A schedule is the sequence of actors that take the next shared action;
// beginning an operation is fused with its first action. Two actions of
// different processes commute unless they touch the same register or queue
// with at least one write, or one of them ends an operation and the other
// begins one (or both begin one). Every check reads only reads-from, conflict
// order and operation endpoints, so one representative per commutation class
// decides the whole class; `explore` visits the lexicographically least
// representative (postman first) and weighs it by the number of schedules in
// its class. `explore_reference` visits every schedule on its own.

#include "mailbox/checker.hpp"
#include "mailbox/protocol.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mailbox {

struct ExploreConfig {
    std::uint32_t max_delivers = 3;
    std::uint32_t max_checks = 5;
    Predicate predicate = Predicate::Full;
    Algorithm algorithm = Algorithm::SixFour;
    std::uint32_t max_actions = 128;
    std::uint64_t seed = 0;
    std::uint32_t runs = 0;             // random walks; 0 for exhaustive
    std::uint32_t max_examples = 8;     // violating traces kept in the summary
    CheckMode mode = CheckMode::Auto;
};

/// Default safety cap, overridden by MAILBOX_MAX_ACTIONS when set.
std::uint32_t default_max_actions();

class BoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Violation {
    std::string choices; // 'p' / 'h' per action
    Trace trace;
    std::vector<std::string> failures;
};

struct ExploreSummary {
    std::uint64_t schedules = 0;           // every schedule, counted with multiplicity
    std::uint64_t classes = 0;             // traces actually checked
    std::uint64_t violating_schedules = 0;
    std::uint64_t violating_classes = 0;
    FailureCounts failures;                // weighted by schedules
    FlagObservations flags;
    std::uint32_t max_actions_seen = 0;
    std::uint32_t max_actions_per_op = 0;
    std::vector<Violation> violations;     // smallest choice strings first

    bool ok() const { return violating_schedules == 0; }
    void merge(ExploreSummary&& other, std::uint32_t max_examples);
};

/// The two kinds of step a schedule can take.
std::vector<Actor> enabled_actors(const ProtocolState& s);
/// Begins an operation if needed and performs the process's next shared action.
ActionRecord fused_step(ProtocolState& s, Actor actor);

ProtocolState initial_state(const ExploreConfig& config);

/// Whether two actions of different processes fail to commute.
bool dependent(const ActionRecord& a, const ActionRecord& b, Algorithm algorithm);

/// Number of schedules equivalent to `actions` (itself included).
std::uint64_t class_size(const std::vector<ActionRecord>& actions, Algorithm algorithm);

/// Exhaustive, one representative per class, parallel over schedule prefixes.
ExploreSummary explore(const ExploreConfig& config);
/// Exhaustive, every schedule, single-threaded.
ExploreSummary explore_reference(const ExploreConfig& config);

struct RandomWalkResult {
    ExploreSummary summary;
    std::vector<Trace> traces;
    std::vector<std::string> choices;
};

/// `config.runs` uniformly random maximal schedules drawn from `config.seed`.
RandomWalkResult random_walk(const ExploreConfig& config);

/// Replays a choice string ('p'/'h') from the initial state.
Trace run_schedule(const ExploreConfig& config, const std::string& choices);

} // namespace mailbox
