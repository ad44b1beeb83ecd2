#pragma once

#include <span>
#include <string>

#include "lobm/book.hpp"
#include "lobm/momentum.hpp"

namespace lobm {

struct SvgOptions {
  int width = 1200;
  int panel_height = 300;
  std::string title;
  /// Two panels (limit on top, market below) instead of one combined panel.
  bool separated = true;
  /// Optional <metadata> text (e.g. a generation timestamp). Empty by default so
  /// output bytes depend only on the data.
  std::string metadata;
};

/// Static line plot of cumulative momentum with the reference midprice drawn
/// on a secondary axis. Long series are reduced to a min/max envelope per pixel
/// column.
std::string render_momentum_svg(std::span<const MomentumSample> samples, std::span<const Bucket> buckets,
                                const AreaConfig& cfg, const SvgOptions& options);

}  // namespace lobm
