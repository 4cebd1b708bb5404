#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace socrhythm::svg {

namespace {

constexpr double kLeft = 64, kRight = 20, kTop = 36, kBottom = 52;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

}  // namespace

Series from_curve(const BinnedCurve& curve, std::string label, std::string color, std::size_t min_count) {
  Series s;
  s.label = std::move(label);
  s.color = std::move(color);
  for (std::size_t i = 0; i < curve.bins.size(); ++i) {
    const auto& b = curve.bins[i];
    if (b.count < std::max<std::size_t>(min_count, 1)) continue;
    s.x.push_back(curve.center(i));
    s.y.push_back(b.mean);
    s.sd.push_back(b.sd);
  }
  return s;
}

std::string render(const Plot& plot) {
  const auto tx = [&](double x) { return plot.log_x ? std::log10(x) : x; };
  Range xr, yr;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.add(tx(s.x[i]));
      const double sd = s.sd.empty() ? 0 : s.sd[i];
      yr.add(s.y[i] - sd);
      yr.add(s.y[i] + sd);
    }
  }
  if (plot.baseline) yr.add(*plot.baseline);
  if (plot.vertical) xr.add(tx(*plot.vertical));
  xr.settle();
  yr.settle();
  const double pw = plot.width - kLeft - kRight;
  const double ph = plot.height - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (tx(x) - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << plot.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(plot.title)
    << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xr.lo + (xr.hi - xr.lo) * k / 4;
    const double yv = yr.lo + (yr.hi - yr.lo) * k / 4;
    const double gx = kLeft + pw * k / 4;
    const double gy = kTop + ph - ph * k / 4;
    o << "<text x=\"" << fmt(gx) << "\" y=\"" << fmt(kTop + ph + 16) << "\" text-anchor=\"middle\">"
      << fmt(plot.log_x ? std::pow(10.0, xv) : xv) << "</text>\n";
    o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(gy + 4) << "\" text-anchor=\"end\">" << fmt(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << plot.height - 10 << "\" text-anchor=\"middle\">"
    << escape(plot.x_label) << "</text>\n";
  o << "<text transform=\"translate(14," << fmt(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(plot.y_label) << "</text>\n";

  if (plot.vertical) {
    const double x = px(*plot.vertical);
    o << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(kTop + ph)
      << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  if (plot.baseline) {
    const double y = py(*plot.baseline);
    o << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft + pw) << "\" y2=\"" << fmt(y)
      << "\" stroke=\"#2a6fdb\" stroke-width=\"1.5\"/>\n";
    o << "<text x=\"" << fmt(kLeft + pw - 4) << "\" y=\"" << fmt(y - 4) << "\" text-anchor=\"end\" fill=\"#2a6fdb\">"
      << escape(plot.baseline_label) << "</text>\n";
  }

  int legend_row = 0;
  for (const auto& s : plot.series) {
    if (s.x.empty()) continue;
    if (!s.sd.empty()) {
      o << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) o << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i] + s.sd[i])) << ' ';
      for (std::size_t i = s.x.size(); i-- > 0;) o << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i] - s.sd[i])) << ' ';
      o << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) o << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    o << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"2.5\" fill=\"" << s.color
        << "\"/>\n";
    }
    const double ly = kTop + 14 + 16 * legend_row++;
    o << "<line x1=\"" << fmt(kLeft + 8) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(kLeft + 28) << "\" y2=\""
      << fmt(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fmt(kLeft + 32) << "\" y=\"" << fmt(ly) << "\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace socrhythm::svg
