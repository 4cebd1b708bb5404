#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "socrhythm/eventlog.hpp"
#include "socrhythm/types.hpp"

namespace socrhythm {

inline constexpr int kSpectrumSize = kHoursPerWeek;
/// Day-cycle harmonics kept by the bandpass: periods 24/i hours, i = 1..11.
inline constexpr int kDayHarmonics = 11;
/// One cycle per day is seven cycles per week.
inline constexpr int kDayCycleBin = 7;

/// Forward convention: X[k] = sum_t x[t] exp(-2 pi i k t / 168), no scaling.
using Spectrum = std::array<std::complex<double>, kSpectrumSize>;
using Profile24 = std::array<double, kHoursPerDay>;

struct RhythmVector {
  UserId user;
  WeekIndex week;
  Profile24 values{};  // unit L2 norm
};

Spectrum dft168(std::span<const double> series);
/// Inverse with the 1/168 factor; returns complex samples t = 0..167.
std::array<std::complex<double>, kSpectrumSize> idft168(const Spectrum& spectrum);

/// The 23 retained indices: 0, 7i and 168 - 7i for i = 1..11, ascending.
const std::array<int, 2 * kDayHarmonics + 1>& retained_bins();
bool is_retained_bin(int k);

Spectrum bandpass(const Spectrum& spectrum);

/// Inverse transform at t = 0..23 from a spectrum supported on the retained
/// set. Throws NotBandlimited if any other bin exceeds 1e-12 (relative to the
/// largest magnitude, floor 1).
Profile24 reconstruct24(const Spectrum& spectrum);

/// v / |v|_2. Throws ZeroVector for an all-zero input.
Profile24 normalize(std::span<const double> v);

RhythmVector rhythm_of_week(const WeeklyUsageSeries& series);

/// Inner product of two unit rhythm vectors, clamped to [-1, 1].
double similarity(const Profile24& a, const Profile24& b);
inline double similarity(const RhythmVector& a, const RhythmVector& b) {
  return similarity(a.values, b.values);
}

/// Rhythms for many user-weeks, keyed by (week, user).
class RhythmTable {
 public:
  void insert(RhythmVector r);
  const RhythmVector* find(const UserId& user, WeekIndex week) const;
  bool contains(const UserId& user, WeekIndex week) const { return find(user, week) != nullptr; }
  std::size_t size() const noexcept { return rows_.size(); }
  /// Rows in (week, user) order.
  std::vector<const RhythmVector*> rows() const;
  std::vector<UserId> users_in_week(WeekIndex week) const;

 private:
  std::map<std::pair<std::int64_t, UserId>, RhythmVector> rows_;
};

struct SkippedUserWeek {
  UserId user;
  WeekIndex week;
  std::string reason;
};

struct RhythmExtraction {
  RhythmTable table;
  std::vector<SkippedUserWeek> skipped;
};

/// Runs the weekly pipeline for weeks [0, weeks). A user seen anywhere in the
/// log but without usage in a week is listed as skipped for that week.
RhythmExtraction extract_rhythms(std::span<const VisitEvent> events, const WeekClock& clock,
                                 std::int64_t weeks);

void write_rhythms(std::ostream& out, const RhythmTable& table);
RhythmTable read_rhythms(std::istream& in);

}  // namespace socrhythm
