#pragma once

#include <span>
#include <string>
#include <vector>

#include "cndisc/detector.hpp"
#include "cndisc/series.hpp"

namespace cndisc::cli {

/// Self-contained SVG with three stacked panels: the data with one
/// `knot-marker` line per knot, the Delta-t profile, and the three error
/// profiles on a log scale.
std::string render_svg(const SampleSeries& series, const std::vector<PointDiagnostics>& profile,
                       std::span<const Knot> knots);

}  // namespace cndisc::cli
