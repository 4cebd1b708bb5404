#include "socrhythm/rhythm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <string>

#include "socrhythm/csv.hpp"

namespace socrhythm {

namespace {

using cplx = std::complex<double>;

// twiddle(m) = exp(-2 pi i m / 168)
const std::array<cplx, kSpectrumSize>& twiddles() {
  static const auto table = [] {
    std::array<cplx, kSpectrumSize> t{};
    for (int m = 0; m < kSpectrumSize; ++m) {
      const long double angle = -2.0L * std::numbers::pi_v<long double> * m / kSpectrumSize;
      t[static_cast<std::size_t>(m)] =
          cplx(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
    }
    return t;
  }();
  return table;
}

int smallest_factor(int n) {
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

// Mixed-radix decimation in time over x[offset + stride * j], j < n.
// `sign` = -1 forward, +1 inverse (unscaled).
void fft_rec(const cplx* x, int stride, int n, cplx* out, int sign) {
  if (n == 1) {
    out[0] = x[0];
    return;
  }
  const int p = smallest_factor(n);
  const int m = n / p;
  std::vector<cplx> sub(static_cast<std::size_t>(n));
  for (int r = 0; r < p; ++r) {
    fft_rec(x + r * stride, stride * p, m, sub.data() + r * m, sign);
  }
  const auto& w = twiddles();
  const int scale = kSpectrumSize / n;
  for (int k = 0; k < n; ++k) {
    cplx acc = 0;
    const int km = k % m;
    for (int r = 0; r < p; ++r) {
      const int e = (r * k % n) * scale;
      const cplx tw = sign < 0 ? w[static_cast<std::size_t>(e)] : std::conj(w[static_cast<std::size_t>(e)]);
      acc += tw * sub[static_cast<std::size_t>(r * m + km)];
    }
    out[k] = acc;
  }
}

}  // namespace

Spectrum dft168(std::span<const double> series) {
  if (series.size() != static_cast<std::size_t>(kSpectrumSize)) {
    throw Error(Errc::WrongLength,
                "expected 168 samples, got " + std::to_string(series.size()));
  }
  std::array<cplx, kSpectrumSize> in{};
  std::copy(series.begin(), series.end(), in.begin());
  Spectrum out{};
  fft_rec(in.data(), 1, kSpectrumSize, out.data(), -1);
  return out;
}

std::array<cplx, kSpectrumSize> idft168(const Spectrum& spectrum) {
  std::array<cplx, kSpectrumSize> out{};
  fft_rec(spectrum.data(), 1, kSpectrumSize, out.data(), +1);
  for (auto& v : out) v /= static_cast<double>(kSpectrumSize);
  return out;
}

const std::array<int, 2 * kDayHarmonics + 1>& retained_bins() {
  static const auto bins = [] {
    std::array<int, 2 * kDayHarmonics + 1> b{};
    std::size_t n = 0;
    b[n++] = 0;
    for (int i = 1; i <= kDayHarmonics; ++i) b[n++] = kDayCycleBin * i;
    for (int i = kDayHarmonics; i >= 1; --i) b[n++] = kSpectrumSize - kDayCycleBin * i;
    return b;
  }();
  return bins;
}

bool is_retained_bin(int k) {
  if (k < 0 || k >= kSpectrumSize || k % kDayCycleBin != 0) return false;
  const int i = k / kDayCycleBin;
  return i <= kDayHarmonics || i >= kSpectrumSize / kDayCycleBin - kDayHarmonics;
}

Spectrum bandpass(const Spectrum& spectrum) {
  Spectrum out{};
  for (int k : retained_bins()) out[static_cast<std::size_t>(k)] = spectrum[static_cast<std::size_t>(k)];
  return out;
}

Profile24 reconstruct24(const Spectrum& spectrum) {
  double scale = 1.0;
  for (const auto& c : spectrum) scale = std::max(scale, std::abs(c));
  for (int k = 0; k < kSpectrumSize; ++k) {
    if (!is_retained_bin(k) && std::abs(spectrum[static_cast<std::size_t>(k)]) > 1e-12 * scale) {
      throw Error(Errc::NotBandlimited, "energy at non-retained bin " + std::to_string(k));
    }
  }
  const auto& w = twiddles();
  Profile24 out{};
  for (int t = 0; t < kHoursPerDay; ++t) {
    cplx acc = 0;
    for (int k : retained_bins()) {
      acc += spectrum[static_cast<std::size_t>(k)] *
             std::conj(w[static_cast<std::size_t>(k * t % kSpectrumSize)]);
    }
    out[static_cast<std::size_t>(t)] = acc.real() / kSpectrumSize;
  }
  return out;
}

Profile24 normalize(std::span<const double> v) {
  if (v.size() != static_cast<std::size_t>(kHoursPerDay)) {
    throw Error(Errc::WrongLength, "expected 24 values, got " + std::to_string(v.size()));
  }
  double norm2 = 0;
  for (double x : v) norm2 += x * x;
  if (!(norm2 > 0)) throw Error(Errc::ZeroVector, "cannot normalize an all-zero profile");
  const double norm = std::sqrt(norm2);
  Profile24 out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] / norm;
  return out;
}

RhythmVector rhythm_of_week(const WeeklyUsageSeries& series) {
  const auto profile = reconstruct24(bandpass(dft168(series.minutes)));
  return RhythmVector{series.user, series.week, normalize(profile)};
}

double similarity(const Profile24& a, const Profile24& b) {
  double s = 0;
  for (std::size_t h = 0; h < a.size(); ++h) s += a[h] * b[h];
  return std::clamp(s, -1.0, 1.0);
}

void RhythmTable::insert(RhythmVector r) {
  auto key = std::make_pair(r.week.value, r.user);
  rows_.insert_or_assign(std::move(key), std::move(r));
}

const RhythmVector* RhythmTable::find(const UserId& user, WeekIndex week) const {
  const auto it = rows_.find(std::make_pair(week.value, user));
  return it == rows_.end() ? nullptr : &it->second;
}

std::vector<const RhythmVector*> RhythmTable::rows() const {
  std::vector<const RhythmVector*> out;
  out.reserve(rows_.size());
  for (const auto& [key, r] : rows_) out.push_back(&r);
  return out;
}

std::vector<UserId> RhythmTable::users_in_week(WeekIndex week) const {
  std::vector<UserId> out;
  auto it = rows_.lower_bound(std::make_pair(week.value, UserId{}));
  for (; it != rows_.end() && it->first.first == week.value; ++it) out.push_back(it->first.second);
  return out;
}

RhythmExtraction extract_rhythms(std::span<const VisitEvent> events, const WeekClock& clock,
                                 std::int64_t weeks) {
  std::set<UserId> everyone;
  for (const auto& e : events) {
    everyone.insert(e.visitor);
    everyone.insert(e.owner);
  }
  RhythmExtraction out;
  for (std::int64_t w = 0; w < weeks; ++w) {
    const WeekIndex week{w};
    const auto usage = build_usage_series(events, week, clock);
    for (const auto& user : everyone) {
      const auto it = usage.find(user);
      if (it == usage.end()) {
        out.skipped.push_back({user, week, "inactive"});
        continue;
      }
      try {
        out.table.insert(rhythm_of_week(it->second));
      } catch (const Error& e) {
        if (e.code() != Errc::ZeroVector) throw;
        out.skipped.push_back({user, week, "zero-rhythm"});
      }
    }
  }
  return out;
}

void write_rhythms(std::ostream& out, const RhythmTable& table) {
  out << "user,week";
  for (int h = 0; h < kHoursPerDay; ++h) out << ",v" << h;
  out << '\n';
  for (const auto* r : table.rows()) {
    out << r->user.str() << ',' << r->week.value;
    for (double v : r->values) out << ',' << csv::format_double17(v);
    out << '\n';
  }
}

RhythmTable read_rhythms(std::istream& in) {
  RhythmTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty()) continue;
    const auto f = csv::split(trimmed);
    if (f.size() != 2 + kHoursPerDay) {
      throw Error(Errc::MalformedRecord, "rhythm line " + std::to_string(lineno) + ": expected 26 fields");
    }
    const auto week = csv::parse_int(f[1]);
    if (!week) {
      if (lineno == 1) continue;
      throw Error(Errc::MalformedRecord, "rhythm line " + std::to_string(lineno) + ": bad week");
    }
    RhythmVector r{UserId(std::string(f[0])), WeekIndex{*week}, {}};
    for (int h = 0; h < kHoursPerDay; ++h) {
      const auto v = csv::parse_double(f[static_cast<std::size_t>(2 + h)]);
      if (!v) throw Error(Errc::MalformedRecord, "rhythm line " + std::to_string(lineno) + ": bad value");
      r.values[static_cast<std::size_t>(h)] = *v;
    }
    table.insert(std::move(r));
  }
  return table;
}

}  // namespace socrhythm
