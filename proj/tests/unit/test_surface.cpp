#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "klab/surface.hpp"

using namespace klab;

namespace {

std::array<double, 3> sub(const StateVector& a, const StateVector& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double len(const std::array<double, 3>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

TEST_CASE("rise is a smooth flat step with an exact inverse") {
  CHECK(SnakeCurve::rise(0.0) == 0.0);
  CHECK(SnakeCurve::rise(1.0) == 1.0);
  CHECK(SnakeCurve::rise(0.5) == doctest::Approx(0.5));
  for (double s = 0.01; s < 1.0; s += 0.0137) {
    // The step flattens near s = 1, so the inverse is only as good as 1 ulp / F'(s).
    const double t = SnakeCurve::rise(s);
    CHECK(std::abs(SnakeCurve::rise_inverse(t) - s) <= 1e-15 / SnakeCurve::rise_rate(s) + 1e-14);
    CHECK(SnakeCurve::rise(SnakeCurve::rise_inverse(t)) == doctest::Approx(t).epsilon(1e-14));
    const double h = 1e-6;
    CHECK(SnakeCurve::rise_rate(s) ==
          doctest::Approx((SnakeCurve::rise(s + h) - SnakeCurve::rise(s - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(SnakeCurve::rise_rate(1e-3) < 1e-100);
}

TEST_CASE("snake turns sit at half-integer heights with |x| = a, alternating sides") {
  for (int l = 2; l <= 6; ++l) {
    const auto spec = build_surface(l, 0.5);
    for (int j = 1; j < l; ++j) {
      CHECK(std::abs(spec.snake.g(j - 0.5)) == doctest::Approx(0.5));
      CHECK(std::abs(spec.snake.g_prime(j - 0.5)) < 1e-12);
      if (j > 1) CHECK(spec.bulge(j) == -spec.bulge(j - 1));
    }
  }
}

TEST_CASE("equilibria: l points at (0, 0, k), all on the surface") {
  for (int l = 2; l <= 6; ++l) {
    const auto spec = build_surface(l, 0.5);
    const auto eq = equilibria(spec);
    REQUIRE(eq.size() == static_cast<std::size_t>(l));
    for (int k = 0; k < l; ++k) {
      CHECK(eq[k] == StateVector{0.0, 0.0, static_cast<double>(k)});
      CHECK(membership(spec, eq[k], 1e-9).has_value());
    }
  }
}

TEST_CASE("removed quadrants are not members") {
  const auto spec = build_surface(2, 0.5);
  const double b = spec.removed_bottom;
  CHECK(!membership(spec, StateVector{b * 1.0, 0.1, 0.0}, 1e-9).has_value());
  CHECK(membership(spec, StateVector{-b * 1.0, 0.1, 0.0}, 1e-9).has_value());
  CHECK(membership(spec, StateVector{0.3, 0.3, 0.0}, 1e-9).has_value());
  CHECK(!membership(spec, StateVector{5.0, 0.0, 0.5}, 1e-9).has_value());
  CHECK_THROWS_AS(build_surface(1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_surface(2, 1.5), std::invalid_argument);
}

TEST_CASE("cross-section points lie on the surface and are continuous") {
  for (int l : {2, 3, 4}) {
    const auto spec = build_surface(l, 0.5);
    for (double c : {0.0, 0.3, -1.2, 2.0}) {
      const auto cs = cross_section(spec, c);
      for (std::size_t i = 0; i < cs.arcs().size(); ++i) {
        const Arc& arc = cs.arcs()[i];
        const double lo = arc.kind == Arc::Kind::bottom_ray ? -3.0 : arc.s_lo;
        const double hi = arc.kind == Arc::Kind::top_ray ? 3.0 : arc.s_hi;
        for (int k = 0; k <= 50; ++k) {
          const auto p = cs.ambient(i, lo + (hi - lo) * k / 50.0);
          CHECK(p[1] == c);
          CHECK(membership(spec, p, 1e-9).has_value());
        }
        if (i + 1 < cs.arcs().size()) {
          const auto end = cs.ambient(i, arc.kind == Arc::Kind::bottom_ray ? 0.0 : arc.s_hi);
          const auto start = cs.ambient(i + 1, cs.arcs()[i + 1].s_lo == -INFINITY ? 0.0 : cs.arcs()[i + 1].s_lo);
          CHECK(len(sub(end, start)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("section velocity matches finite differences") {
  const auto spec = build_surface(3, 0.5);
  const auto cs = cross_section(spec, 0.7);
  const double h = 1e-6;
  for (std::size_t i = 0; i < cs.arcs().size(); ++i) {
    for (double s : {0.2, 0.5, 0.8}) {
      const double t = cs.arcs()[i].kind == Arc::Kind::bottom_ray ? -s : s;
      const auto v = cs.velocity(i, t);
      const auto a = cs.point(i, t + h), b = cs.point(i, t - h);
      CHECK(v[0] == doctest::Approx((a[0] - b[0]) / (2 * h)).epsilon(1e-5));
      CHECK(v[1] == doctest::Approx((a[1] - b[1]) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("normals are orthogonal to both surface directions, including near seams") {
  const auto spec = build_surface(2, 0.5);
  const double h = 1e-6;
  for (double c : {0.4, 1.0}) {
    const auto cs = cross_section(spec, c);
    const auto up = cross_section(spec, c + h);
    const auto down = cross_section(spec, c - h);
    for (double s : {0.02, 0.1, 0.3, 0.5, 0.9, 0.98}) {
      const auto n = cs.normal(1, s);
      CHECK(len(n) == doctest::Approx(1.0));
      const auto v = cs.velocity(1, s);
      CHECK(std::abs(n[0] * v[0] + n[2] * v[1]) < 1e-9 * (1 + std::hypot(v[0], v[1])));
      // Same bridge parameter s, neighbouring sections: the y-direction on the surface.
      const auto dy = sub(up.ambient(1, s), down.ambient(1, s));
      CHECK(std::abs(dot(n, dy)) / len(dy) < 1e-6);
    }
  }
}

TEST_CASE("mesh vertices are members and equilibria are tagged") {
  for (int l : {2, 4}) {
    const auto spec = build_surface(l, 0.5);
    const auto mesh = sample_surface(spec, 4.0);
    CHECK(mesh.equilibrium_vertices.size() == static_cast<std::size_t>(l));
    for (std::size_t k = 0; k < mesh.equilibrium_vertices.size(); ++k) {
      CHECK(mesh.vertices[mesh.equilibrium_vertices[k]].ambient == StateVector{0, 0, static_cast<double>(k)});
    }
    for (const auto& v : mesh.vertices) CHECK(membership(spec, v.ambient, 1e-8).has_value());
    for (const auto& f : mesh.faces) {
      CHECK(f.size() >= 3);
      for (std::size_t idx : f) CHECK(idx < mesh.vertices.size());
    }
  }
}

TEST_CASE("x stays above -sqrt(a^2 + y^2) on even-l sections") {
  for (int l : {2, 4}) {
    const auto spec = build_surface(l, 0.5);
    for (double c : {0.0, 0.5, 1.5}) {
      const auto cs = cross_section(spec, c);
      for (std::size_t i = 0; i < cs.arcs().size(); ++i) {
        for (double s = -5.0; s <= 5.0; s += 0.01) {
          const Arc& arc = cs.arcs()[i];
          if (s < arc.s_lo || s > arc.s_hi) continue;
          CHECK(cs.point(i, s)[0] >= -std::sqrt(0.25 + c * c) - 1e-12);
        }
      }
    }
  }
}
