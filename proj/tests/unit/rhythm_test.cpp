#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "socrhythm/random.hpp"
#include "socrhythm/rhythm.hpp"

using namespace socrhythm;
using std::numbers::pi;

namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

std::array<double, kHoursPerWeek> series_of(auto f) {
  std::array<double, kHoursPerWeek> s{};
  for (int t = 0; t < kHoursPerWeek; ++t) s[t] = f(t);
  return s;
}

std::array<double, kHoursPerWeek> random_series(Rng& rng) {
  return series_of([&](int) { return 60 * uniform01(rng); });
}

Spectrum naive_dft(std::span<const double> x) {
  Spectrum out;
  for (int k = 0; k < kSpectrumSize; ++k) {
    long double re = 0, im = 0;
    for (int t = 0; t < kSpectrumSize; ++t) {
      const long double a = -2.0L * std::numbers::pi_v<long double> * ((k * t) % kSpectrumSize) / kSpectrumSize;
      re += x[t] * std::cos(a);
      im += x[t] * std::sin(a);
    }
    out[k] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

double max_abs(const Spectrum& s) {
  double m = 0;
  for (const auto& c : s) m = std::max(m, std::abs(c));
  return m;
}

Profile24 analytic_one_plus_cos(int shift) {
  Profile24 v{};
  double n = 0;
  for (int h = 0; h < 24; ++h) {
    v[h] = 1 + std::cos(2 * pi * (h - shift) / 24);
    n += v[h] * v[h];
  }
  for (auto& x : v) x /= std::sqrt(n);
  return v;
}

WeeklyUsageSeries usage(const std::array<double, kHoursPerWeek>& s) {
  WeeklyUsageSeries u{UserId("u"), WeekIndex{0}, {}};
  u.minutes = s;
  return u;
}

}  // namespace

TEST_CASE("dft168 basic spectra") {
  const auto c = dft168(series_of([](int) { return 2.5; }));
  CHECK(std::abs(c[0] - std::complex<double>(168 * 2.5, 0)) < 1e-9);
  for (int k = 1; k < kSpectrumSize; ++k) CHECK(std::abs(c[k]) < 1e-9);

  const auto s = dft168(series_of([](int t) { return std::cos(2 * pi * t / 24); }));
  for (int k = 0; k < kSpectrumSize; ++k) {
    if (k == 7 || k == 161) {
      CHECK(std::abs(s[k] - std::complex<double>(84, 0)) < 1e-9);
    } else {
      CHECK(std::abs(s[k]) < 1e-9);
    }
  }
  CHECK_THROWS_AS(dft168(std::vector<double>(24, 0.0)), Error);
}

TEST_CASE("dft168 equals the naive sum") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_series(rng);
    const auto got = dft168(x);
    const auto want = naive_dft(x);
    const double scale = max_abs(want);
    for (int k = 0; k < kSpectrumSize; ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-9 * scale);
  }
}

TEST_CASE("idft168 inverts dft168") {
  Rng rng(2);
  const auto x = random_series(rng);
  const auto back = idft168(dft168(x));
  for (int t = 0; t < kSpectrumSize; ++t) {
    CHECK(back[t].real() == doctest::Approx(x[t]).epsilon(1e-12));
    CHECK(std::abs(back[t].imag()) < 1e-9);
  }
}

TEST_CASE("bandpass keeps exactly the day harmonics") {
  std::vector<int> expected{0};
  for (int i = 1; i <= 11; ++i) {
    expected.push_back(7 * i);
    expected.push_back(168 - 7 * i);
  }
  std::sort(expected.begin(), expected.end());
  const auto& kept = retained_bins();
  CHECK(std::vector<int>(kept.begin(), kept.end()) == expected);

  Spectrum only7{};
  only7[7] = {3, -1};
  CHECK(bandpass(only7) == only7);
  Spectrum only8{};
  only8[8] = {3, -1};
  CHECK(max_abs(bandpass(only8)) == 0);

  Rng rng(3);
  Spectrum r;
  for (auto& c : r) c = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
  const auto f = bandpass(r);
  for (int k = 0; k < kSpectrumSize; ++k) {
    const bool keep = std::find(expected.begin(), expected.end(), k) != expected.end();
    CHECK(is_retained_bin(k) == keep);
    if (keep) {
      CHECK(f[k] == r[k]);
    } else {
      CHECK(f[k] == std::complex<double>(0, 0));
    }
  }
  CHECK(bandpass(f) == f);
}

TEST_CASE("reconstruct24") {
  Spectrum dc{};
  dc[0] = 168 * 1.5;
  for (double v : reconstruct24(dc)) CHECK(v == doctest::Approx(1.5).epsilon(1e-12));

  const auto cosine = reconstruct24(bandpass(dft168(series_of([](int t) { return std::cos(2 * pi * t / 24); }))));
  for (int h = 0; h < 24; ++h) CHECK(std::abs(cosine[h] - std::cos(2 * pi * h / 24)) < 1e-9);

  Spectrum bad{};
  bad[8] = 1;
  CHECK_THROWS_AS(reconstruct24(bad), Error);

  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto s = bandpass(dft168(random_series(rng)));
    const auto full = idft168(s);
    const auto r = reconstruct24(s);
    for (int h = 0; h < 24; ++h) CHECK(std::abs(r[h] - full[h].real()) < 1e-9 * (1 + std::abs(full[h].real())));
  }
}

TEST_CASE("normalize") {
  std::vector<double> ones(24, 1.0);
  for (double v : normalize(ones)) CHECK(v == doctest::Approx(1 / std::sqrt(24.0)));
  CHECK_THROWS_AS(normalize(std::vector<double>(24, 0.0)), Error);
  CHECK_THROWS_AS(normalize(std::vector<double>(23, 1.0)), Error);

  Rng rng(5);
  std::vector<double> v(24);
  for (auto& x : v) x = uniform01(rng) - 0.3;
  const auto n = normalize(v);
  double norm = 0, dot = 0, vv = 0;
  for (int h = 0; h < 24; ++h) {
    norm += n[h] * n[h];
    dot += n[h] * v[h];
    vv += v[h] * v[h];
  }
  CHECK(norm == doctest::Approx(1).epsilon(1e-14));
  CHECK(dot / std::sqrt(vv) == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("rhythm_of_week on analytic inputs") {
  const auto r = rhythm_of_week(usage(series_of([](int t) { return 1 + std::cos(2 * pi * t / 24); })));
  const auto want = analytic_one_plus_cos(0);
  for (int h = 0; h < 24; ++h) CHECK(std::abs(r.values[h] - want[h]) < 1e-9);

  // a 3 h cycle is a retained harmonic; periods off the day grid are removed
  const auto mixed = rhythm_of_week(usage(series_of([](int t) {
    return std::cos(2 * pi * t / 3) + 0.7 * std::sin(2 * pi * 5 * t / 168) + 0.4 * std::cos(2 * pi * 30 * t / 168);
  })));
  Profile24 three{};
  for (int h = 0; h < 24; ++h) three[h] = std::cos(2 * pi * h / 3) / std::sqrt(12.0);
  for (int h = 0; h < 24; ++h) CHECK(std::abs(mixed.values[h] - three[h]) < 1e-9);
}

TEST_CASE("rhythm peak follows an evening-heavy week") {
  Rng rng(6);
  std::normal_distribution<double> noise(0, 2);
  const auto s = series_of([&](int t) {
    const int h = t % 24;
    const double bump = 40 * std::exp(3 * (std::cos(2 * pi * (h - 21) / 24) - 1));
    return std::max(0.0, bump + noise(rng));
  });
  std::array<double, 24> hourly{};
  for (int t = 0; t < kHoursPerWeek; ++t) hourly[t % 24] += s[t] / 7;
  const auto r = rhythm_of_week(usage(s));
  const auto peak = std::max_element(r.values.begin(), r.values.end()) - r.values.begin();
  CHECK(peak == std::max_element(hourly.begin(), hourly.end()) - hourly.begin());
  CHECK(peak >= 19);
  CHECK(peak <= 23);
}

TEST_CASE("time shifts") {
  const auto base = rhythm_of_week(usage(series_of([](int t) { return 1 + std::cos(2 * pi * t / 24); })));
  const auto shifted = rhythm_of_week(usage(series_of([](int t) { return 1 + std::cos(2 * pi * (t - 1) / 24); })));
  const auto want = analytic_one_plus_cos(1);
  for (int h = 0; h < 24; ++h) {
    CHECK(std::abs(shifted.values[h] - base.values[(h + 23) % 24]) < 1e-9);
    CHECK(std::abs(shifted.values[h] - want[h]) < 1e-9);
  }

  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_series(rng);
    const auto r = rhythm_of_week(usage(x));
    const auto r24 = rhythm_of_week(usage(series_of([&](int t) { return x[(t + 144) % 168]; })));
    const auto r1 = rhythm_of_week(usage(series_of([&](int t) { return x[(t + 167) % 168]; })));
    for (int h = 0; h < 24; ++h) {
      CHECK(std::abs(r24.values[h] - r.values[h]) < 1e-9);
      CHECK(std::abs(r1.values[h] - r.values[(h + 23) % 24]) < 1e-9);
    }
  }
}

TEST_CASE("pipeline linearity and Parseval") {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_series(rng);
    const auto y = random_series(rng);
    const double a = uniform01(rng) * 3, b = uniform01(rng) * 3 - 1;
    const auto raw = [](const std::array<double, kHoursPerWeek>& s) { return reconstruct24(bandpass(dft168(s))); };
    const auto rx = raw(x), ry = raw(y);
    const auto rz = raw(series_of([&](int t) { return a * x[t] + b * y[t]; }));
    for (int h = 0; h < 24; ++h) CHECK(std::abs(rz[h] - (a * rx[h] + b * ry[h])) < 1e-9 * (1 + std::abs(rz[h])));

    const auto s = bandpass(dft168(x));
    double retained = 0;
    for (int k : retained_bins()) retained += std::norm(s[k]);
    double energy = 0;
    for (double v : rx) energy += v * v;
    CHECK(std::abs(7 * energy - retained / 168) <= 1e-9 * (retained / 168));
  }
}

TEST_CASE("similarity properties and extended-precision oracle") {
  Rng rng(10);
  std::vector<double> v(24);
  for (auto& x : v) x = uniform01(rng) - 0.5;
  const auto r = normalize(v);
  Profile24 neg{};
  for (int h = 0; h < 24; ++h) neg[h] = -r[h];
  CHECK(similarity(r, r) == doctest::Approx(1).epsilon(1e-14));
  CHECK(similarity(r, neg) == doctest::Approx(-1).epsilon(1e-14));

  for (int i = 0; i < 50; ++i) {
    for (auto& x : v) x = uniform01(rng) - 0.2;
    const auto a = normalize(v);
    for (auto& x : v) x = uniform01(rng) - 0.2;
    const auto b = normalize(v);
    Wide dot = 0;
    for (int h = 0; h < 24; ++h) dot += Wide(a[h]) * Wide(b[h]);
    CHECK(std::abs(similarity(a, b) - static_cast<double>(dot)) < 1e-15);
    CHECK(similarity(a, b) == similarity(b, a));
  }
}

TEST_CASE("rhythm table round-trip and extraction") {
  const WeekClock clock{0, 0};
  std::vector<VisitEvent> ev{{UserId("a"), UserId("b"), 21 * 3600, 3600},
                             {UserId("a"), UserId("c"), kSecondsPerWeek + 3600, 1800}};
  const auto ex = extract_rhythms(ev, clock, 2);
  CHECK(ex.table.size() == 4);
  REQUIRE(ex.skipped.size() == 2);  // c in week 0, b in week 1
  CHECK(ex.skipped[0].week.value == 0);
  CHECK(ex.skipped[0].user == UserId("c"));
  CHECK(ex.skipped[1].user == UserId("b"));
  const auto* a0 = ex.table.find(UserId("a"), WeekIndex{0});
  REQUIRE(a0 != nullptr);
  CHECK(similarity(*a0, *ex.table.find(UserId("b"), WeekIndex{0})) == doctest::Approx(1));

  std::stringstream s;
  write_rhythms(s, ex.table);
  const auto back = read_rhythms(s);
  REQUIRE(back.size() == ex.table.size());
  for (const auto* row : ex.table.rows()) {
    const auto* other = back.find(row->user, row->week);
    REQUIRE(other != nullptr);
    CHECK(other->values == row->values);
  }
}
