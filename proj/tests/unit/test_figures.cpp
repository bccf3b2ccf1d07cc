#include <doctest.h>

#include <array>
#include <cmath>

#include "klab/errors.hpp"
#include "klab/figures.hpp"

using namespace klab;

TEST_CASE("contour points satisfy p = kappa and stay in the window") {
  for (int l : {2, 4}) {
    const auto spec = build_surface(l, 0.5);
    const MultiPoly p = taming_p(l, l == 2 ? 1.0 : 4.0);
    const auto fig = section_figure(spec, p, 0.0);
    CHECK(fig.contours.size() == kDefaultContourLevels);
    CHECK(fig.equilibria.size() == static_cast<std::size_t>(l));
    std::size_t points = 0;
    for (const auto& level : fig.contours) {
      for (const auto& line : level.polylines) {
        for (const auto& [x, z] : line) {
          const std::array<double, 3> v{x, 0.0, z};
          CHECK(std::abs(p(v) - level.kappa) <= 1e-9 * (1 + std::abs(level.kappa)));
          CHECK(x >= fig.window.x_lo);
          CHECK(x <= fig.window.x_hi);
          ++points;
        }
      }
    }
    CHECK(points > 100);
    for (const auto& [x, z] : fig.section) {
      CHECK(x > fig.window.x_lo);
      CHECK(z < fig.window.z_hi);
    }
  }
}

TEST_CASE("contour levels increase along the section") {
  const auto fig = section_figure(build_surface(4, 0.5), taming_p(4, 4.0), 0.5);
  for (std::size_t i = 1; i < fig.contours.size(); ++i) CHECK(fig.contours[i].kappa > fig.contours[i - 1].kappa);
  CHECK(fig.equilibria.empty());
}

TEST_CASE("SVG output is deterministic and carries the provenance") {
  const auto spec = build_surface(2, 0.5);
  const auto a = cross_section_svg(section_figure(spec, taming_p(2, 1.0), 0.0), "t", "abc");
  const auto b = cross_section_svg(section_figure(spec, taming_p(2, 1.0), 0.0), "t", "abc");
  CHECK(a == b);
  CHECK(a.find("<!-- config abc -->") != std::string::npos);
  CHECK(a.find("class=\"section\"") != std::string::npos);
  CHECK(contour_csv(section_figure(spec, taming_p(2, 1.0), 0.0)).starts_with("level_id,kappa,polyline_id,x,z\n"));
}

TEST_CASE("explicit levels and non-affine polynomials") {
  const auto spec = build_surface(2, 0.5);
  const auto fig = section_figure(spec, taming_p(2, 1.0), 0.0, std::vector<double>{0.25, 0.75});
  CHECK(fig.contours.size() == 2);
  const MultiPoly x = MultiPoly::variable(3, coord::x);
  CHECK_THROWS_AS(section_figure(spec, x * x, 0.0), UnsupportedConfiguration);
}
