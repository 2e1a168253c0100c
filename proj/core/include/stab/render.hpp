#pragma once

#include <span>
#include <string>

#include "stab/instance.hpp"

namespace stab {

struct RenderStyle {
  /// Longest side of the drawing area in SVG units.
  double size = 480.0;
  double margin = 20.0;
  double point_radius = 3.0;
  /// Stroke width of an edge with weight 1.
  double base_stroke = 3.0;
};

/// Points as circles, edges as full-width lines, and a "k = ..." caption.
/// Output depends only on the arguments. Throws if an edge index is out of
/// range for the instance.
std::string render_svg(const Instance& inst, const Solution& sol,
                       const RenderStyle& style = {});

/// Fractional point indexed by edge id: edges above the support threshold are
/// drawn with stroke width base_stroke * x_e; the caption shows k_frac.
std::string render_svg_fractional(const Instance& inst, std::span<const double> x,
                                  double k_frac, const RenderStyle& style = {});

/// Points only.
std::string render_svg_points(const Instance& inst, const RenderStyle& style = {});

}  // namespace stab
