#pragma once

#include <string>
#include <vector>

namespace sarinf::svg {

struct Point {
  double x = 0.0;
  double y = 0.0;
  double err = -1.0;  // half-length of a vertical error bar; negative for none
};

struct Series {
  std::string name;
  std::vector<Point> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Optional tick labels for integer x positions 1..n (categorical axes).
  std::vector<std::string> x_categories;
  double width = 640.0;
  double height = 420.0;
};

/// Scatter plot with optional error bars. Points are emitted as
/// <circle class="point">, error bars as <line class="errorbar">.
std::string scatter(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace sarinf::svg
