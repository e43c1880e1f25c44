#pragma once

#include <string>

#include "gadepth/depth.hpp"

namespace gadepth {

// Renders the depth plot as a standalone SVG: mean curves for the training
// (blue), testing (green) and validation (red) folds plus the per-replicate
// scatter.
void write_depth_plot_svg(const DepthCurve& curve, const std::string& path,
                          const std::string& title = "");

}  // namespace gadepth
