#include "socrhythm/eventlog.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "socrhythm/csv.hpp"

namespace socrhythm {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

ParseResult parse_events(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = csv::split(trimmed);
    const auto report = [&](Errc code, std::string msg) {
      result.diagnostics.push_back({lineno, code, std::move(msg)});
    };
    if (fields.size() != 4) {
      if (lineno == 1 && fields.size() >= 3 && !csv::parse_int(fields[2])) continue;
      report(Errc::MalformedRecord, "expected 4 fields, got " + std::to_string(fields.size()));
      continue;
    }
    const auto start = csv::parse_int(fields[2]);
    if (!start) {
      if (lineno == 1) continue;  // header
      report(Errc::MalformedRecord, "start time is not an integer: '" + std::string(fields[2]) + "'");
      continue;
    }
    const auto dwell = csv::parse_int(fields[3]);
    if (!dwell) {
      report(Errc::MalformedRecord, "dwell is not an integer: '" + std::string(fields[3]) + "'");
      continue;
    }
    if (*dwell <= 0) {
      report(Errc::NonPositiveDwell, "dwell must be > 0, got " + std::to_string(*dwell));
      continue;
    }
    if (fields[0].empty() || fields[1].empty()) {
      report(Errc::MalformedRecord, "empty user id");
      continue;
    }
    if (fields[0] == fields[1]) {
      ++result.self_visits_dropped;
      continue;
    }
    result.events.push_back(
        VisitEvent{UserId(std::string(fields[0])), UserId(std::string(fields[1])), *start, *dwell});
  }
  return result;
}

ParseResult parse_events_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open event file " + path);
  return parse_events(in);
}

void write_events(std::ostream& out, std::span<const VisitEvent> events) {
  out << "visitor,owner,start_epoch_s,dwell_s\n";
  for (const auto& e : events) {
    out << e.visitor.str() << ',' << e.owner.str() << ',' << e.start << ',' << e.dwell << '\n';
  }
}

WeekIndex assign_week(EpochSeconds t, EpochSeconds origin) {
  if (t < origin) {
    throw Error(Errc::BeforeOrigin,
                "timestamp " + std::to_string(t) + " precedes origin " + std::to_string(origin));
  }
  return WeekIndex{(t - origin) / kSecondsPerWeek};
}

WeekIndex assign_week(EpochSeconds t, const WeekClock& clock) {
  return assign_week(t, clock.effective_origin());
}

UsageByUser build_usage_series(std::span<const VisitEvent> events, WeekIndex week,
                               const WeekClock& clock) {
  const EpochSeconds ws = clock.week_start(week);
  const EpochSeconds we = ws + kSecondsPerWeek;

  // Integer seconds keep the accumulation exact and order independent.
  std::unordered_map<UserId, std::array<std::int64_t, kHoursPerWeek>> seconds;
  const auto credit = [&](const UserId& user, EpochSeconds lo, EpochSeconds hi) {
    auto& bins = seconds[user];
    for (EpochSeconds t = lo; t < hi;) {
      const auto bin = (t - ws) / kSecondsPerHour;
      const EpochSeconds bin_end = ws + (bin + 1) * kSecondsPerHour;
      const EpochSeconds stop = std::min(hi, bin_end);
      bins[static_cast<std::size_t>(bin)] += stop - t;
      t = stop;
    }
  };

  for (const auto& e : events) {
    const EpochSeconds lo = std::max(e.start, ws);
    const EpochSeconds hi = std::min(e.end(), we);
    if (hi <= lo) continue;
    credit(e.visitor, lo, hi);
    credit(e.owner, lo, hi);
  }

  UsageByUser out;
  for (auto& [user, bins] : seconds) {
    WeeklyUsageSeries series{user, week, {}};
    for (std::size_t h = 0; h < bins.size(); ++h) {
      series.minutes[h] = std::min(60.0, static_cast<double>(bins[h]) / 60.0);
    }
    out.emplace(user, std::move(series));
  }
  return out;
}

std::int64_t week_span(std::span<const VisitEvent> events, const WeekClock& clock) {
  std::int64_t last = -1;
  const EpochSeconds origin = clock.effective_origin();
  for (const auto& e : events) {
    if (e.start < origin) continue;
    last = std::max(last, floor_div(e.start - origin, kSecondsPerWeek));
  }
  return last + 1;
}

}  // namespace socrhythm
