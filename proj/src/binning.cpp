#include "socrhythm/binning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "socrhythm/errors.hpp"

namespace socrhythm {

double BinnedCurve::center(std::size_t i) const {
  const auto& b = bins.at(i);
  return log_scale ? std::sqrt(b.lo * b.hi) : 0.5 * (b.lo + b.hi);
}

bool BinnedCurve::empty() const {
  return std::all_of(bins.begin(), bins.end(), [](const BinStats& b) { return b.count == 0; });
}

std::vector<double> uniform_edges(double lo, double hi, double width) {
  if (!(hi > lo) || !(width > 0)) throw Error(Errc::Infeasible, "bad bin range");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / width));
  std::vector<double> edges(n + 1);
  // Snap to a 1e-12 grid so decimal edges such as 0.30 print and compare cleanly.
  for (std::size_t i = 0; i <= n; ++i) {
    edges[i] = std::round((lo + width * static_cast<double>(i)) * 1e12) / 1e12;
  }
  edges.back() = hi;
  return edges;
}

std::vector<double> log10_edges(int lo_exp, int hi_exp, int per_decade) {
  if (hi_exp <= lo_exp || per_decade <= 0) throw Error(Errc::Infeasible, "bad log bin range");
  std::vector<double> edges;
  for (int k = lo_exp * per_decade; k <= hi_exp * per_decade; ++k) {
    edges.push_back(std::pow(10.0, static_cast<double>(k) / per_decade));
  }
  return edges;
}

namespace {

std::ptrdiff_t find_bin(std::span<const double> edges, double x) {
  if (edges.size() < 2 || !(x >= edges.front()) || !(x <= edges.back())) return -1;
  if (x == edges.back()) return static_cast<std::ptrdiff_t>(edges.size()) - 2;
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return std::distance(edges.begin(), it) - 1;
}

}  // namespace

BinnedCurve bin_by(std::span<const double> x, std::span<const double> y, std::span<const double> edges,
                   bool log_scale) {
  BinnedCurve curve;
  curve.log_scale = log_scale;
  if (edges.size() < 2) return curve;
  std::vector<std::vector<double>> groups(edges.size() - 1);
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = find_bin(edges, x[i]);
    if (b >= 0) groups[static_cast<std::size_t>(b)].push_back(y[i]);
  }
  curve.bins.resize(groups.size());
  for (std::size_t b = 0; b < groups.size(); ++b) {
    auto& g = groups[b];
    std::sort(g.begin(), g.end());
    BinStats s{edges[b], edges[b + 1], 0, 0, g.size()};
    if (!g.empty()) {
      s.mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
      if (g.size() > 1) {
        double ss = 0;
        for (double v : g) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(g.size() - 1));
      }
    }
    curve.bins[b] = s;
  }
  return curve;
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Histogram histogram(std::span<const double> values, std::span<const double> edges) {
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() > 1 ? edges.size() - 1 : 0, 0);
  for (double v : values) {
    const auto b = find_bin(edges, v);
    if (b >= 0) ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

}  // namespace socrhythm
