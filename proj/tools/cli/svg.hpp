#pragma once

#include <string>
#include <vector>

namespace gaussbounds::cli {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = true;
  int width = 720;
  int height = 480;
};

// Line plot with axes, ticks and a legend. Non-finite points (and non-positive
// ones on a log axis) break the line.
std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec);

}  // namespace gaussbounds::cli
