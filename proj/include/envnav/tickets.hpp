// Violation intervals and the persistent ticket list.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "envnav/eval/engine.hpp"
#include "envnav/lang/ast.hpp"
#include "envnav/timeseries.hpp"

namespace envnav::tickets {

struct ViolationInterval {
  std::string rule;
  Timestamp start;
  Timestamp end;  // exclusive
  std::size_t samples = 0;
  std::size_t first = 0;  // grid index of `start`

  Seconds duration() const { return end - start; }
  friend bool operator==(const ViolationInterval&, const ViolationInterval&) = default;
};

struct TicketConfig {
  Seconds min_duration = 0;
  std::size_t excerpt_padding = 0;
};

enum class TicketStatus : std::uint8_t { Open, Resolved };
std::string_view to_string(TicketStatus s);

struct Ticket {
  std::string id;
  std::string rule;
  ViolationInterval interval;
  TicketStatus status = TicketStatus::Open;
  std::vector<std::string> sensors;
  // Per context entry with data: its series over the interval plus padding.
  std::map<std::string, TimeSeries> excerpt;
  Timestamp created_at;

  friend bool operator==(const Ticket&, const Ticket&) = default;
};

std::string ticket_id(const std::string& rule, Timestamp start);

// Maximal runs of false samples lasting at least min_duration.
std::vector<ViolationInterval> extract_violations(const eval::VirtualSensor& vs, const TicketConfig& cfg = {});

std::vector<Ticket> open_tickets(const std::vector<ViolationInterval>& intervals, const lang::RuleDef& rule,
                                 eval::EvalContext& ctx, const TicketConfig& cfg, Timestamp run_time);

// Current rule series by name; lets merge_tickets check old intervals.
using RuleSeries = std::map<std::string, TimeSeries, std::less<>>;

// Matches by id. Tickets only in `previous` are resolved when their interval no
// longer holds a violation. With `scope`, that requires the rule's current
// series to cover the interval without any false sample; without it, absence
// from `current` is enough. Nothing is ever dropped.
std::vector<Ticket> merge_tickets(const std::vector<Ticket>& previous, const std::vector<Ticket>& current,
                                  const RuleSeries* scope = nullptr);

std::string tickets_to_json(const std::vector<Ticket>& tickets);
// Throws envnav::Error on malformed input.
std::vector<Ticket> tickets_from_json(const std::string& text);

}  // namespace envnav::tickets
