#pragma once

#include <string>

#include "leadwalk/report.hpp"

namespace leadwalk {

// Self-contained heatmap rendering of a correlation grid: colored cells
// (heading: blue at <= 0.5 up to red at 1; speed: blue at 0 up to red at
// >= 0.5), white dashed level curve (0.95 heading / 0.05 speed), black
// dashed tau = 0 line and the green tau*(t) trace.
std::string render_heatmap_svg(const HeatmapGrid& grid);

}  // namespace leadwalk
