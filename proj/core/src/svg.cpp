#include "wql/svg.hpp"

#include <cmath>
#include <cstdio>

#include "wql/common.hpp"

namespace wql {

namespace {

double axis_value(double v, bool log) {
  if (!log) return v;
  if (!(v > 0)) throw Error(ErrKind::Argument, "svg: log axis requires positive values");
  return std::log10(v);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::pair<double, double> ChartLayout::to_pixel(double x, double y) const {
  const double tx = axis_value(x, logx);
  const double ty = axis_value(y, logy);
  const double pw = width - margin_left - margin_right;
  const double ph = height - margin_top - margin_bottom;
  const double sx = xmax > xmin ? (tx - xmin) / (xmax - xmin) : 0.5;
  const double sy = ymax > ymin ? (ty - ymin) / (ymax - ymin) : 0.5;
  return {margin_left + sx * pw, height - margin_bottom - sy * ph};
}

ChartLayout chart_layout(std::span<const double> xs, std::span<const double> ys,
                         bool logx, bool logy) {
  if (xs.empty() || xs.size() != ys.size())
    throw Error(ErrKind::Argument, "svg: need equally sized, nonempty data");
  ChartLayout l;
  l.logx = logx;
  l.logy = logy;
  l.xmin = l.xmax = axis_value(xs[0], logx);
  l.ymin = l.ymax = axis_value(ys[0], logy);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double tx = axis_value(xs[i], logx);
    const double ty = axis_value(ys[i], logy);
    l.xmin = std::min(l.xmin, tx);
    l.xmax = std::max(l.xmax, tx);
    l.ymin = std::min(l.ymin, ty);
    l.ymax = std::max(l.ymax, ty);
  }
  // A flat axis still needs a nonzero span.
  if (l.xmax == l.xmin) { l.xmin -= 0.5; l.xmax += 0.5; }
  if (l.ymax == l.ymin) { l.ymin -= 0.5; l.ymax += 0.5; }
  return l;
}

std::string line_chart_svg(std::span<const double> xs, std::span<const double> ys,
                           bool logx, bool logy, const std::string& xlabel,
                           const std::string& ylabel, const std::string& title) {
  const ChartLayout l = chart_layout(xs, ys, logx, logy);
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(l.width) +
       "\" height=\"" + num(l.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const double x0 = l.margin_left, x1 = l.width - l.margin_right;
  const double y0 = l.height - l.margin_bottom, y1 = l.margin_top;
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) +
       "\" y2=\"" + num(y0) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) +
       "\" y2=\"" + num(y1) + "\" stroke=\"black\"/>\n";

  const int ticks = 4;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = l.xmin + (l.xmax - l.xmin) * i / ticks;
    const double fy = l.ymin + (l.ymax - l.ymin) * i / ticks;
    const double vx = l.logx ? std::pow(10.0, fx) : fx;
    const double vy = l.logy ? std::pow(10.0, fy) : fy;
    const double px = x0 + (x1 - x0) * i / ticks;
    const double py = y0 - (y0 - y1) * i / ticks;
    s += "<line x1=\"" + num(px) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px) +
         "\" y2=\"" + num(y0 + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(px) + "\" y=\"" + num(y0 + 18) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + num(vx) + "</text>\n";
    s += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x0) +
         "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + num(vy) + "</text>\n";
  }

  s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto [px, py] = l.to_pixel(xs[i], ys[i]);
    if (i) s += ' ';
    s += num(px) + "," + num(py);
  }
  s += "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto [px, py] = l.to_pixel(xs[i], ys[i]);
    s += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) +
         "\" r=\"3\" fill=\"steelblue\"/>\n";
  }

  s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(l.height - 10) +
       "\" font-size=\"13\" text-anchor=\"middle\">" + xlabel + "</text>\n";
  s += "<text x=\"15\" y=\"" + num((y0 + y1) / 2) +
       "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
       num((y0 + y1) / 2) + ")\">" + ylabel + "</text>\n";
  s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"22\" font-size=\"14\" "
       "text-anchor=\"middle\">" + title + "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace wql
