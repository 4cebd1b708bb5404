#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace socrhythm {

struct BinStats {
  double lo = 0;
  double hi = 0;
  double mean = 0;
  double sd = 0;  // sample sd, 0 when count < 2
  std::size_t count = 0;
};

/// Ordered, non-overlapping bins [lo, hi); the last bin also holds its upper edge.
struct BinnedCurve {
  std::vector<BinStats> bins;
  bool log_scale = false;

  /// Arithmetic midpoint, or geometric midpoint for log-scaled bins.
  double center(std::size_t i) const;
  bool empty() const;
};

std::vector<double> uniform_edges(double lo, double hi, double width);
/// Edges 10^(k / per_decade) for k in [lo_exp * per_decade, hi_exp * per_decade].
std::vector<double> log10_edges(int lo_exp, int hi_exp, int per_decade);

/// Mean and sd of y grouped by the bin of x. Values outside the edges are
/// ignored. Within a bin values are summed in sorted order, so results do not
/// depend on input order.
BinnedCurve bin_by(std::span<const double> x, std::span<const double> y, std::span<const double> edges,
                   bool log_scale = false);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t total() const;
};

Histogram histogram(std::span<const double> values, std::span<const double> edges);

}  // namespace socrhythm
