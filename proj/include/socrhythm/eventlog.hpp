#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "socrhythm/types.hpp"

namespace socrhythm {

/// One private-room visit. Self-visits never make it past ingest.
struct VisitEvent {
  UserId visitor;
  UserId owner;
  EpochSeconds start = 0;
  std::int64_t dwell = 0;  // seconds, > 0

  EpochSeconds end() const noexcept { return start + dwell; }
  friend bool operator==(const VisitEvent&, const VisitEvent&) = default;
};

struct ParseDiagnostic {
  std::size_t line = 0;  // 1-based
  Errc code = Errc::MalformedRecord;
  std::string message;
};

struct ParseResult {
  std::vector<VisitEvent> events;
  std::vector<ParseDiagnostic> diagnostics;
  std::size_t self_visits_dropped = 0;
};

/// Parses `visitor,owner,start_epoch_s,dwell_s` lines. A first line whose
/// third field is not an integer is treated as a header. Bad lines are
/// reported and skipped; parsing never stops early.
ParseResult parse_events(std::istream& in);
ParseResult parse_events_file(const std::string& path);

void write_events(std::ostream& out, std::span<const VisitEvent> events);

/// floor((t - origin) / 604800). Throws BeforeOrigin when t < origin.
WeekIndex assign_week(EpochSeconds t, EpochSeconds origin);
WeekIndex assign_week(EpochSeconds t, const WeekClock& clock);

struct WeeklyUsageSeries {
  UserId user;
  WeekIndex week;
  std::array<double, kHoursPerWeek> minutes{};
};

using UsageByUser = std::map<UserId, WeeklyUsageSeries>;

/// Per-user usage minutes in each hour of `week`. Both visit participants
/// accrue the overlapped minutes; each bin is capped at 60.
UsageByUser build_usage_series(std::span<const VisitEvent> events, WeekIndex week,
                               const WeekClock& clock);

/// Weeks up to the last one in which an event starts (max week index + 1),
/// or 0. Minutes spilling past that week are not counted as a new week.
std::int64_t week_span(std::span<const VisitEvent> events, const WeekClock& clock);

}  // namespace socrhythm
