#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "socrhythm/errors.hpp"

namespace socrhythm {

using EpochSeconds = std::int64_t;

inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerWeek = 168 * kSecondsPerHour;
inline constexpr int kHoursPerWeek = 168;
inline constexpr int kHoursPerDay = 24;

/// Default edge-strength boundary on log10 of weekly dwell seconds (~21 min).
inline constexpr double kStrongLog10Threshold = 3.1;

/// Pseudonymous user token. Never empty.
class UserId {
 public:
  UserId() = default;
  explicit UserId(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw Error(Errc::MalformedRecord, "empty user id");
  }

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const UserId&, const UserId&) = default;
  friend auto operator<=>(const UserId&, const UserId&) = default;

 private:
  std::string value_;
};

struct WeekIndex {
  std::int64_t value = 0;

  friend bool operator==(WeekIndex, WeekIndex) = default;
  friend auto operator<=>(WeekIndex, WeekIndex) = default;
};

/// Maps wall-clock timestamps onto weekly, hourly analysis windows.
///
/// `origin` is the epoch second of local midnight expressed as if local time
/// were UTC; the window actually starts `utc_offset_hours` earlier in UTC.
struct WeekClock {
  EpochSeconds origin = 0;
  int utc_offset_hours = 9;

  EpochSeconds effective_origin() const noexcept {
    return origin - static_cast<EpochSeconds>(utc_offset_hours) * kSecondsPerHour;
  }
  EpochSeconds week_start(WeekIndex week) const noexcept {
    return effective_origin() + week.value * kSecondsPerWeek;
  }
};

}  // namespace socrhythm

template <>
struct std::hash<socrhythm::UserId> {
  std::size_t operator()(const socrhythm::UserId& u) const noexcept {
    return std::hash<std::string>{}(u.str());
  }
};
