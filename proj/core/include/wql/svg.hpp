#pragma once

#include <span>
#include <string>
#include <utility>

namespace wql {

/// Fixed layout for the hand-emitted charts. Axis domains are in
/// transformed units (log10 when the axis is logarithmic).
struct ChartLayout {
  double width = 640, height = 480;
  double margin_left = 70, margin_right = 20, margin_top = 40, margin_bottom = 50;
  bool logx = false, logy = false;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  std::pair<double, double> to_pixel(double x, double y) const;
};

ChartLayout chart_layout(std::span<const double> xs, std::span<const double> ys,
                         bool logx, bool logy);

/// Minimal standalone SVG: axes, tick labels, one polyline through the data.
std::string line_chart_svg(std::span<const double> xs, std::span<const double> ys,
                           bool logx, bool logy, const std::string& xlabel,
                           const std::string& ylabel, const std::string& title);

}  // namespace wql
