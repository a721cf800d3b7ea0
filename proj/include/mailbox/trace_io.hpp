#pragma once

// Text trace format and human-readable reports.
//
//   mailbox-trace 1
//   algorithm six-four
//   predicate full
//   delivers 3
//   checks 5
//   seed 0
//   actions 2
//   0 postman 2 deliver 1 enqueue queue 1
//   1 postman 2 deliver 2 write Dn 1
//   end
//
// Record fields: seq actor op_id op_kind line action_kind register value.

#include "mailbox/action.hpp"
#include "mailbox/checker.hpp"
#include "mailbox/explorer.hpp"

#include <string>
#include <string_view>

namespace mailbox {

std::string emit_trace(const Trace& trace);
/// Throws ParseError.
Trace parse_trace(std::string_view text);

void write_trace_file(const std::string& path, const Trace& trace);
Trace read_trace_file(const std::string& path);

/// Per-event table: kind, actions, omega, alpha, rho, prerem, color, rn, dn, polarity, verdict,
/// remnum, delnum.
std::string format_event_table(const TraceVerdict& verdict);
std::string format_verdict(const TraceVerdict& verdict);
std::string format_summary(const ExploreSummary& summary);

} // namespace mailbox
