#include "klab/figures.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <fmt/format.h>

#include "klab/errors.hpp"

namespace klab {

namespace {

constexpr double kRayDraw = 1.5;
constexpr std::size_t kArcPoints = 120;
constexpr std::size_t kContourSteps = 800;

Polyline trace_section(const CrossSection& section) {
  Polyline out;
  for (std::size_t i = 0; i < section.arcs().size(); ++i) {
    const Arc& arc = section.arcs()[i];
    double lo = arc.s_lo, hi = arc.s_hi;
    if (arc.kind == Arc::Kind::bottom_ray) lo = -kRayDraw;
    if (arc.kind == Arc::Kind::top_ray) hi = kRayDraw;
    for (std::size_t k = i == 0 ? 0 : 1; k <= kArcPoints; ++k) {
      out.push_back(section.point(i, lo + (hi - lo) * static_cast<double>(k) / kArcPoints));
    }
  }
  return out;
}

Window padded_bbox(const Polyline& line) {
  Window w{line.front()[0], line.front()[0], line.front()[1], line.front()[1]};
  for (const auto& [x, z] : line) {
    w.x_lo = std::min(w.x_lo, x);
    w.x_hi = std::max(w.x_hi, x);
    w.z_lo = std::min(w.z_lo, z);
    w.z_hi = std::max(w.z_hi, z);
  }
  const double px = std::max(0.1 * (w.x_hi - w.x_lo), 1e-3);
  const double pz = std::max(0.1 * (w.z_hi - w.z_lo), 1e-3);
  return {w.x_lo - px, w.x_hi + px, w.z_lo - pz, w.z_hi + pz};
}

std::vector<double> arclength_levels(const MultiPoly& p, const Polyline& line, double c, std::size_t count) {
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < line.size(); ++i) {
    cumulative.push_back(cumulative.back() +
                         std::hypot(line[i][0] - line[i - 1][0], line[i][1] - line[i - 1][1]));
  }
  std::vector<double> levels;
  for (std::size_t k = 0; k < count; ++k) {
    const double target = cumulative.back() * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
    const std::size_t i = std::max<std::size_t>(1, static_cast<std::size_t>(std::distance(cumulative.begin(), it)));
    const double seg = cumulative[i] - cumulative[i - 1];
    const double t = seg > 0.0 ? (target - cumulative[i - 1]) / seg : 0.0;
    const double x = line[i - 1][0] + t * (line[i][0] - line[i - 1][0]);
    const double z = line[i - 1][1] + t * (line[i][1] - line[i - 1][1]);
    const std::array<double, 3> pt{x, c, z};
    levels.push_back(p(pt));
  }
  return levels;
}

// p(x, c, z) = alpha(z) + beta(z) x, so each level set is the graph
// x = (kappa - alpha) / beta, split where it leaves the window or beta flips.
std::vector<Polyline> level_set(const MultiPoly& p, double c, double kappa, const Window& w) {
  std::vector<Polyline> pieces;
  Polyline current;
  double previous_beta = 0.0;
  for (std::size_t k = 0; k <= kContourSteps; ++k) {
    const double z = w.z_lo + (w.z_hi - w.z_lo) * static_cast<double>(k) / kContourSteps;
    const std::array<double, 3> at0{0.0, c, z};
    const std::array<double, 3> at1{1.0, c, z};
    const double alpha = p(at0);
    const double beta = p(at1) - alpha;
    const bool flipped = k > 0 && (beta < 0.0) != (previous_beta < 0.0);
    previous_beta = beta;
    const double x = beta != 0.0 ? (kappa - alpha) / beta : std::nan("");
    if (flipped || !(x >= w.x_lo && x <= w.x_hi)) {
      if (current.size() > 1) pieces.push_back(std::move(current));
      current.clear();
      if (!(x >= w.x_lo && x <= w.x_hi)) continue;
    }
    current.push_back({x, z});
  }
  if (current.size() > 1) pieces.push_back(std::move(current));
  return pieces;
}

}  // namespace

SectionFigure section_figure(const SurfaceSpec& spec, const MultiPoly& p, double c,
                             std::optional<std::vector<double>> levels) {
  if (p.nvars() != 3) throw std::invalid_argument("section_figure: p must be a polynomial on R^3");
  if (p.degree_in(coord::x) > 1) throw UnsupportedConfiguration("section_figure: contours need p affine in x");
  const CrossSection section = cross_section(spec, c);
  SectionFigure fig;
  fig.c = c;
  fig.section = trace_section(section);
  fig.window = padded_bbox(fig.section);
  const std::vector<double> kappas =
      levels ? *levels : arclength_levels(p, fig.section, c, kDefaultContourLevels);
  for (double kappa : kappas) fig.contours.push_back({kappa, level_set(p, c, kappa, fig.window)});
  if (c == 0.0) {
    for (const auto& e : equilibria(spec)) fig.equilibria.push_back({e[0], e[2]});
  }
  return fig;
}

std::string cross_section_svg(const SectionFigure& fig, const std::string& title, const std::string& provenance) {
  constexpr double width = 480.0;
  const Window& w = fig.window;
  const double scale = width / (w.x_hi - w.x_lo);
  const double height = (w.z_hi - w.z_lo) * scale;
  auto px = [&](double x) { return (x - w.x_lo) * scale; };
  auto pz = [&](double z) { return (w.z_hi - z) * scale; };
  auto path = [&](const Polyline& line) {
    std::string d;
    for (std::size_t i = 0; i < line.size(); ++i) {
      d += fmt::format("{}{:.3f},{:.3f}", i == 0 ? "M" : " L", px(line[i][0]), pz(line[i][1]));
    }
    return d;
  };

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += fmt::format("<!-- config {} -->\n", provenance);
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.3f}\" height=\"{:.3f}\" viewBox=\"0 0 {:.3f} {:.3f}\">\n",
      width, height, width, height);
  svg += fmt::format("<title>{}</title>\n", title);
  svg += fmt::format("<rect width=\"{:.3f}\" height=\"{:.3f}\" fill=\"white\"/>\n", width, height);
  svg += "<g fill=\"none\" stroke=\"#888888\" stroke-width=\"1\">\n";
  for (std::size_t i = 0; i < fig.contours.size(); ++i) {
    for (const auto& line : fig.contours[i].polylines) {
      svg += fmt::format("<path class=\"contour\" data-kappa=\"{:.6f}\" d=\"{}\"/>\n", fig.contours[i].kappa,
                         path(line));
    }
  }
  svg += "</g>\n";
  svg += fmt::format("<path class=\"section\" fill=\"none\" stroke=\"black\" stroke-width=\"3\" d=\"{}\"/>\n",
                     path(fig.section));
  for (const auto& [x, z] : fig.equilibria) {
    svg += fmt::format("<circle class=\"equilibrium\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"4\" fill=\"black\"/>\n", px(x),
                       pz(z));
  }
  svg += "</svg>\n";
  return svg;
}

std::string contour_csv(const SectionFigure& fig) {
  std::string out = "level_id,kappa,polyline_id,x,z\n";
  for (std::size_t i = 0; i < fig.contours.size(); ++i) {
    const auto& level = fig.contours[i];
    for (std::size_t j = 0; j < level.polylines.size(); ++j) {
      for (const auto& [x, z] : level.polylines[j]) {
        out += fmt::format("{},{:.9f},{},{:.9f},{:.9f}\n", i, level.kappa, j, x, z);
      }
    }
  }
  return out;
}

}  // namespace klab
