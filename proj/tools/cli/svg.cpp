#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace gaussbounds::cli {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double range, int target) {
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return mag * (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0);
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double step = nice_step(hi - lo, 5);
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    const double l = log ? std::log10(lo) : lo;
    const double h = log ? std::log10(hi) : hi;
    return (a - l) / (h - l);
  }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

std::string tick_label(double v) { return fmt::format("{:g}", v); }

}  // namespace

std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec) {
  Axis ax, ay;
  ay.log = spec.log_y;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !ay.usable(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 1.0;
    ymax = 10.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ay.log) {
    ymin = std::pow(10.0, std::floor(std::log10(ymin)));
    ymax = std::pow(10.0, std::ceil(std::log10(ymax)));
    if (ymax <= ymin) ymax = ymin * 10.0;
  } else {
    if (ymax == ymin) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }
  ax.lo = xmin;
  ax.hi = xmax;
  ay.lo = ymin;
  ay.hi = ymax;

  const double W = spec.width, H = spec.height;
  const double left = 80, right = 150, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + ax.map(x) * pw; };
  auto py = [&](double y) { return top + (1.0 - ay.map(y)) * ph; };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      spec.width, spec.height, spec.width, spec.height);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", spec.width, spec.height);
  if (!spec.title.empty()) {
    out += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       left + pw / 2, escape(spec.title));
  }
  out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                     left, top, pw, ph);

  for (double t : linear_ticks(ax.lo, ax.hi)) {
    const double x = px(t);
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", x,
                       top + ph, top + ph + 5);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x, top + ph + 18,
                       tick_label(t));
  }
  std::vector<double> yt;
  if (ay.log) {
    const int d0 = static_cast<int>(std::lround(std::log10(ay.lo)));
    const int d1 = static_cast<int>(std::lround(std::log10(ay.hi)));
    for (int d = d0; d <= d1; ++d) {
      for (double m : {1.0, 2.0, 5.0}) {
        const double v = m * std::pow(10.0, d);
        if (v >= ay.lo * (1 - 1e-12) && v <= ay.hi * (1 + 1e-12) && (m == 1.0 || d1 - d0 <= 2)) yt.push_back(v);
      }
    }
  } else {
    yt = linear_ticks(ay.lo, ay.hi);
  }
  for (double t : yt) {
    const double y = py(t);
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n", left, y,
                       left + pw, y);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", left - 6, y + 4,
                       tick_label(t));
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2, H - 15,
                     escape(spec.x_label));
  out += fmt::format(
      "<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">{1}</text>\n",
      top + ph / 2, escape(spec.y_label + (ay.log ? " (log)" : "")));

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    std::string pts;
    auto flush = [&]() {
      if (!pts.empty()) {
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", s.color, pts);
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !ay.usable(s.y[i])) {
        flush();
        continue;
      }
      pts += fmt::format("{}{:.2f},{:.2f}", pts.empty() ? "" : " ", px(s.x[i]), py(s.y[i]));
    }
    flush();
    const double ly = top + 10 + 20 * static_cast<double>(k);
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                       left + pw + 12, ly, left + pw + 40, s.color);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", left + pw + 46, ly + 4, escape(s.label));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace gaussbounds::cli
