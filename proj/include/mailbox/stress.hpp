#pragma once

// Runs the 6/4 algorithm on two threads and records a total order of the
// shared actions. Each register is one 64-bit atomic word holding
// (value, stamp of the write that stored it). A write takes a stamp from the
// global clock and then stores; a read loads and then takes a stamp. The
// recording is accepted only if every read observed exactly the last write
// before it in stamp order; otherwise the run is discarded and repeated.

#include "mailbox/action.hpp"
#include "mailbox/types.hpp"

#include <chrono>
#include <cstdint>
#include <stdexcept>

namespace mailbox {

struct StressConfig {
    std::uint32_t ops = 1000;
    std::uint64_t seed = 0;
    Predicate predicate = Predicate::Full;
    std::chrono::milliseconds timeout{20000};
    std::uint32_t max_attempts = 50;
};

struct StressResult {
    Trace trace;
    std::uint32_t attempts = 0;  // runs needed for an unambiguous recording
    std::uint64_t checks = 0;
    std::uint64_t short_checks = 0;
};

class StressTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument for ops == 0 and StressTimeout when the
/// homeowner fails to drain in time or no attempt records cleanly.
StressResult run_stress(const StressConfig& config);

} // namespace mailbox
