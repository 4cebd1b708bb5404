#pragma once

#include <optional>
#include <string>
#include <vector>

#include "socrhythm/binning.hpp"

namespace socrhythm::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sd;  // empty: no ribbon
  std::string color = "#1f4e9c";
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::optional<double> baseline;  // horizontal reference line
  std::string baseline_label = "baseline";
  std::optional<double> vertical;  // e.g. the weight threshold
  bool log_x = false;
  int width = 640;
  int height = 420;
};

/// Populated bins of `curve` as a polyline with a +-1 sd ribbon.
Series from_curve(const BinnedCurve& curve, std::string label, std::string color = "#1f4e9c",
                  std::size_t min_count = 1);

std::string render(const Plot& plot);

}  // namespace socrhythm::svg
