#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "klab/polynomials.hpp"
#include "klab/surface.hpp"

namespace klab {

using Polyline = std::vector<std::array<double, 2>>;

struct ContourLevel {
  double kappa;
  std::vector<Polyline> polylines;
};

struct Window {
  double x_lo, x_hi, z_lo, z_hi;
};

/// The section y = c drawn in the (x, z) plane together with level sets of p.
struct SectionFigure {
  double c;
  Polyline section;
  Window window;
  std::vector<ContourLevel> contours;
  std::vector<std::array<double, 2>> equilibria;
};

inline constexpr std::size_t kDefaultContourLevels = 13;

/// Rays are drawn 1.5 units past their junction; the window is the section's
/// bounding box padded by 10% on each side. Without explicit `levels` the
/// contours pass through `kDefaultContourLevels` points evenly spaced by arc
/// length along the drawn section. p must be affine in x.
SectionFigure section_figure(const SurfaceSpec& spec, const MultiPoly& p, double c,
                             std::optional<std::vector<double>> levels = std::nullopt);

/// SVG with x to the right and z up. `provenance` is embedded as a comment.
std::string cross_section_svg(const SectionFigure& fig, const std::string& title, const std::string& provenance);

/// Columns: level_id, kappa, polyline_id, x, z.
std::string contour_csv(const SectionFigure& fig);

}  // namespace klab
