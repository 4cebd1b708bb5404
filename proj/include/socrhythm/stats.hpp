#pragma once

#include <cstddef>
#include <span>

namespace socrhythm::stats {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_sd(std::span<const double> x);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Two-sided tail P(|T| >= |t|) of Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

struct WelchResult {
  double t = 0;
  double dof = 0;
  double p = 1;  // two-sided
  double mean_difference = 0;  // mean(x) - mean(y)
};

/// Welch's unequal-variance t-test. Throws TooFewSamples (< 2 per sample)
/// and ZeroVariance (both samples constant).
WelchResult welch_t(std::span<const double> x, std::span<const double> y);

/// Average ranks, ties sharing their mean rank.
void rank_average(std::span<const double> x, std::span<double> ranks);

struct Correlation {
  double rho = 0;
  double p = 1;  // two-sided, t approximation with n - 2 dof
  std::size_t n = 0;
};

Correlation pearson(std::span<const double> x, std::span<const double> y);
Correlation spearman(std::span<const double> x, std::span<const double> y);

struct SlopeTest {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  double t = 0;
  double p = 1;
  std::size_t n = 0;
};

/// Ordinary least squares y ~ a + b x with a t-test on b (n - 2 dof).
SlopeTest ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace socrhythm::stats
