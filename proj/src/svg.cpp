#include "leadwalk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace leadwalk {

namespace {

struct Rgb {
  int r, g, b;
};

// Linear blue -> red over [lo, hi], clamped outside.
Rgb colormap(double v, double lo, double hi) {
  double u = (v - lo) / (hi - lo);
  u = std::clamp(u, 0.0, 1.0);
  return {static_cast<int>(std::lround(255.0 * u)), 40,
          static_cast<int>(std::lround(255.0 * (1.0 - u)))};
}

std::string color_str(const Rgb& c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

std::string num(double v) { return format_g9(v); }

}  // namespace

std::string render_heatmap_svg(const HeatmapGrid& grid) {
  const auto rows = static_cast<Eigen::Index>(grid.tau_seconds.size());
  const auto cols = static_cast<Eigen::Index>(grid.t_seconds.size());
  if (rows == 0 || cols == 0)
    throw Error(Error::Kind::range, "empty heatmap grid");

  // Column stride keeps the plot below ~600 drawn columns.
  const Eigen::Index stride = std::max<Eigen::Index>(1, (cols + 599) / 600);
  const Eigen::Index drawn_cols = (cols + stride - 1) / stride;

  const double cell_w = std::max(1.0, std::floor(600.0 / drawn_cols));
  const double cell_h = std::max(1.0, std::floor(480.0 / rows));
  const double plot_w = cell_w * drawn_cols;
  const double plot_h = cell_h * rows;
  const double ml = 70, mt = 40, mb = 50, mr = 20;
  const double width = ml + plot_w + mr;
  const double height = mt + plot_h + mb;

  const bool heading = grid.mode == Mode::heading;
  const double lo = heading ? 0.5 : 0.0;
  const double hi = heading ? 1.0 : 0.5;
  const double level = heading ? 0.95 : 0.05;

  // Row 0 holds the most negative tau; draw positive tau on top.
  const auto y_of_row = [&](Eigen::Index r) {
    return mt + (rows - 1 - r) * cell_h;
  };
  const auto x_of_col = [&](Eigen::Index c) { return ml + (c / stride) * cell_w; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(ml) + "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"15\">" +
         grid.from + " &#8594; " + grid.to + " (" + to_string(grid.mode) +
         ")</text>\n";
  svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" +
         num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"#e8e8e8\"/>\n";

  // Cells.
  for (Eigen::Index c = 0; c < cols; c += stride) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!grid.defined(r, c)) continue;
      const Rgb color = colormap(grid.value(r, c), lo, hi);
      svg += "<rect x=\"" + num(x_of_col(c)) + "\" y=\"" + num(y_of_row(r)) +
             "\" width=\"" + num(cell_w) + "\" height=\"" + num(cell_h) +
             "\" fill=\"" + color_str(color) + "\"/>\n";
    }
  }

  // Level-curve markers: white dashes where the level is crossed along tau.
  std::string levels;
  for (Eigen::Index c = 0; c < cols; c += stride) {
    for (Eigen::Index r = 0; r + 1 < rows; ++r) {
      if (!grid.defined(r, c) || !grid.defined(r + 1, c)) continue;
      const double a = grid.value(r, c) - level;
      const double b = grid.value(r + 1, c) - level;
      if ((a <= 0 && b > 0) || (a > 0 && b <= 0)) {
        const double y = y_of_row(r) + cell_h / 2.0 -
                         cell_h * std::abs(a) / (std::abs(a) + std::abs(b));
        levels += "<line x1=\"" + num(x_of_col(c)) + "\" y1=\"" + num(y) +
                  "\" x2=\"" + num(x_of_col(c) + cell_w) + "\" y2=\"" + num(y) +
                  "\" stroke=\"white\" stroke-width=\"1.2\" "
                  "stroke-dasharray=\"2,2\"/>\n";
      }
    }
  }
  svg += levels;

  // tau = 0 line.
  Eigen::Index zero_row = 0;
  double best = std::abs(grid.tau_seconds[0]);
  for (Eigen::Index r = 1; r < rows; ++r)
    if (std::abs(grid.tau_seconds[r]) < best) {
      best = std::abs(grid.tau_seconds[r]);
      zero_row = r;
    }
  const double y0 = y_of_row(zero_row) + cell_h / 2.0;
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(y0) + "\" x2=\"" +
         num(ml + plot_w) + "\" y2=\"" + num(y0) +
         "\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";

  // tau*(t) trace.
  const double tau_lo = grid.tau_seconds.front();
  const double tau_hi = grid.tau_seconds.back();
  std::string points;
  bool in_segment = false;
  std::string polylines;
  for (Eigen::Index c = 0; c < cols; c += stride) {
    const double tau = grid.tau_star_seconds[c];
    if (std::isnan(tau)) {
      if (in_segment && !points.empty()) {
        polylines += "<polyline fill=\"none\" stroke=\"#00a000\" "
                     "stroke-width=\"1.6\" points=\"" + points + "\"/>\n";
        points.clear();
      }
      in_segment = false;
      continue;
    }
    const double frac = (tau - tau_lo) / (tau_hi - tau_lo);
    const double y = mt + plot_h - frac * (plot_h - cell_h) - cell_h / 2.0;
    points += num(x_of_col(c) + cell_w / 2.0) + "," + num(y) + " ";
    in_segment = true;
  }
  if (!points.empty())
    polylines += "<polyline fill=\"none\" stroke=\"#00a000\" "
                 "stroke-width=\"1.6\" points=\"" + points + "\"/>\n";
  svg += polylines;

  // Axes with a few ticks.
  svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" +
         num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const auto c = static_cast<Eigen::Index>((cols - 1) * k / 4);
    const double x = x_of_col(c - c % stride) + cell_w / 2.0;
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(mt + plot_h + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" +
           format_g9(grid.t_seconds[c]) + "</text>\n";
  }
  for (double tau : {tau_lo, 0.0, tau_hi}) {
    const double frac = (tau - tau_lo) / (tau_hi - tau_lo);
    const double y = mt + plot_h - frac * (plot_h - cell_h) - cell_h / 2.0;
    svg += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" +
           format_g9(tau) + "</text>\n";
  }
  svg += "<text x=\"" + num(ml + plot_w / 2) + "\" y=\"" +
         num(mt + plot_h + 38) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">t (s)</text>\n";
  svg += "<text x=\"16\" y=\"" + num(mt + plot_h / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " + num(mt + plot_h / 2) +
         ")\" text-anchor=\"middle\">&#964; (s)</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace leadwalk
