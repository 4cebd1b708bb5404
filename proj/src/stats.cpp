#include "socrhythm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "socrhythm/errors.hpp"

namespace socrhythm::stats {

double mean(std::span<const double> x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0;
  const double m = mean(x);
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1;
  const double qam = a - 1;
  double c = 1;
  double d = 1 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
  return 1 - front * beta_continued_fraction(b, a, 1 - x) / b;
}

double student_t_two_sided(double t, double dof) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0;
  const double x = dof / (dof + t * t);
  return std::clamp(incomplete_beta(dof / 2, 0.5, x), 0.0, 1.0);
}

WelchResult welch_t(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) {
    throw Error(Errc::TooFewSamples, "Welch's t-test needs >= 2 values per sample (got " +
                                         std::to_string(x.size()) + ", " + std::to_string(y.size()) + ")");
  }
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double mx = mean(x);
  const double my = mean(y);
  const double vx = std::pow(sample_sd(x), 2) / nx;
  const double vy = std::pow(sample_sd(y), 2) / ny;
  WelchResult r;
  r.mean_difference = mx - my;
  if (vx + vy == 0) throw Error(Errc::ZeroVariance, "both samples are constant");
  r.t = (mx - my) / std::sqrt(vx + vy);
  r.dof = (vx + vy) * (vx + vy) / (vx * vx / (nx - 1) + vy * vy / (ny - 1));
  r.p = student_t_two_sided(r.t, r.dof);
  return r;
}

void rank_average(std::span<const double> x, std::span<double> ranks) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  Correlation c;
  c.n = std::min(x.size(), y.size());
  if (c.n < 3) {
    c.rho = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  const double mx = mean(x.first(c.n));
  const double my = mean(y.first(c.n));
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < c.n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) {
    c.rho = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  c.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(c.n - 2);
  if (std::abs(c.rho) >= 1) {
    c.p = 0;
  } else {
    c.p = student_t_two_sided(c.rho * std::sqrt(dof / (1 - c.rho * c.rho)), dof);
  }
  return c;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  std::vector<double> rx(n), ry(n);
  rank_average(x.first(n), rx);
  rank_average(y.first(n), ry);
  return pearson(rx, ry);
}

SlopeTest ols_slope(std::span<const double> x, std::span<const double> y) {
  SlopeTest r;
  r.n = std::min(x.size(), y.size());
  if (r.n < 3) throw Error(Errc::TooFewSamples, "slope test needs >= 3 points");
  const double mx = mean(x.first(r.n));
  const double my = mean(y.first(r.n));
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < r.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw Error(Errc::ZeroVariance, "slope test needs spread in x");
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < r.n; ++i) {
    const double e = y[i] - r.intercept - r.slope * x[i];
    sse += e * e;
  }
  const double dof = static_cast<double>(r.n - 2);
  r.stderr_slope = std::sqrt(sse / dof / sxx);
  if (r.stderr_slope == 0) {
    r.t = r.slope == 0 ? 0 : std::copysign(std::numeric_limits<double>::infinity(), r.slope);
    r.p = r.slope == 0 ? 1 : 0;
  } else {
    r.t = r.slope / r.stderr_slope;
    r.p = student_t_two_sided(r.t, dof);
  }
  return r;
}

}  // namespace socrhythm::stats
