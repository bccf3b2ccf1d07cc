#include "klab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace klab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_construction(int l, double a) {
  if (l < 2) throw std::invalid_argument("surface: l must be at least 2");
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("surface: amplitude must lie in (0, 1)");
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

}  // namespace

SnakeCurve::SnakeCurve(int l, double a) : l_(l), a_(a) { check_construction(l, a); }

int SnakeCurve::bulge(int j) const {
  if (j < 1 || j > l_ - 1) throw std::out_of_range("SnakeCurve::bulge: bridge index out of range");
  return (l_ - j) % 2 == 0 ? 1 : -1;
}

double SnakeCurve::width(double s) const { return a_ * std::sin(kPi * s); }

double SnakeCurve::width_rate(double s) const { return a_ * kPi * std::cos(kPi * s); }

double SnakeCurve::rise(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return logistic(1.0 / (1.0 - s) - 1.0 / s);
}

double SnakeCurve::rise_rate(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double e = 1.0 / s - 1.0 / (1.0 - s);
  return logistic(-e) * logistic(e) * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s)));
}

double SnakeCurve::rise_inverse(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // 1/s − 1/(1 − s) = L is the quadratic L s² − (L + 2) s + 1 = 0; this is its
  // root in (0, 1), written without cancellation.
  const double L = std::log((1.0 - t) / t);
  return 2.0 / ((L + 2.0) + std::sqrt(L * L + 4.0));
}

int SnakeCurve::bridge_at(double z) const {
  if (!(z >= 0.0 && z <= l_ - 1.0)) throw std::out_of_range("SnakeCurve: height outside [0, l - 1]");
  return std::min(static_cast<int>(std::floor(z)) + 1, l_ - 1);
}

double SnakeCurve::g(double z) const {
  const int j = bridge_at(z);
  return bulge(j) * width(rise_inverse(z - (j - 1)));
}

double SnakeCurve::g_prime(double z) const {
  const int j = bridge_at(z);
  const double s = rise_inverse(z - (j - 1));
  return bulge(j) * width_rate(s) / rise_rate(s);
}

SnakeCurve build_snake(int l, double a) { return SnakeCurve(l, a); }

std::string PieceId::to_string() const {
  return (kind == Kind::plane ? "plane(" : "bridge(") + std::to_string(index) + ")";
}

bool SurfaceSpec::plane_keeps(int k, double x, double y, double slack) const {
  if (k < 0 || k > l - 1) return false;
  if (k == 0) return removed_bottom * x <= std::abs(y) + slack;
  if (k == l - 1) return removed_top * x <= std::abs(y) + slack;
  return std::abs(x) <= std::abs(y) + slack;
}

SurfaceSpec build_surface(int l, double a) {
  SnakeCurve snake(l, a);
  std::vector<int> bulge_dir;
  for (int j = 1; j <= l - 1; ++j) bulge_dir.push_back(snake.bulge(j));
  const int bottom = bulge_dir.front();
  const int top = bulge_dir.back();
  return SurfaceSpec{l, a, snake, std::move(bulge_dir), bottom, top};
}

std::optional<PieceId> membership(const SurfaceSpec& spec, std::span<const double> p, double tol) {
  if (p.size() != 3) throw std::invalid_argument("membership: expected a point of R^3");
  if (!(tol > 0.0)) throw std::invalid_argument("membership: tolerance must be positive");
  const double x = p[0], y = p[1], z = p[2];
  const double scale = 1.0 + x * x + y * y;

  for (int k = 0; k < spec.l; ++k) {
    if (std::abs(z - k) <= tol && spec.plane_keeps(k, x, y, tol * (1.0 + std::abs(x) + std::abs(y)))) {
      return PieceId{PieceId::Kind::plane, k};
    }
  }

  const double w2 = x * x - y * y;
  for (int j = 1; j <= spec.l - 1; ++j) {
    if (z < j - 1 - tol || z > j + tol) continue;
    const int b = spec.bulge(j);

    if (z > j - 1 && z < j) {
      const double gz = spec.snake.g(z);
      const bool side_ok = gz == 0.0 ? std::abs(x) <= tol : b * x > 0.0;
      if (side_ok && std::abs(w2 - gz * gz) <= tol * scale) return PieceId{PieceId::Kind::bridge, j};
    }

    if (b * x >= -tol && w2 >= -tol * scale && w2 <= spec.a * spec.a * (1.0 + tol)) {
      const double r = std::sqrt(std::max(w2, 0.0));
      const double s = std::asin(std::min(r / spec.a, 1.0)) / kPi;
      const double z1 = j - 1 + SnakeCurve::rise(s);
      const double z2 = j - 1 + SnakeCurve::rise(1.0 - s);
      if (std::min(std::abs(z - z1), std::abs(z - z2)) <= tol) return PieceId{PieceId::Kind::bridge, j};
    }
  }
  return std::nullopt;
}

std::vector<StateVector> equilibria(const SurfaceSpec& spec) {
  std::vector<StateVector> out;
  for (int k = 0; k < spec.l; ++k) out.push_back({0.0, 0.0, static_cast<double>(k)});
  return out;
}

PieceId Arc::piece() const {
  return kind == Kind::bridge ? PieceId{PieceId::Kind::bridge, index} : PieceId{PieceId::Kind::plane, index};
}

CrossSection::CrossSection(const SurfaceSpec& spec, double c) : spec_(spec), c_(c) {
  if (!std::isfinite(c)) throw std::invalid_argument("cross_section: y value must be finite");
  const double inf = std::numeric_limits<double>::infinity();
  arcs_.push_back({Arc::Kind::bottom_ray, 0, -inf, 0.0});
  for (int j = 1; j <= spec.l - 1; ++j) {
    arcs_.push_back({Arc::Kind::bridge, j, 0.0, 1.0});
    if (j < spec.l - 1 && c != 0.0) arcs_.push_back({Arc::Kind::segment, j, 0.0, 1.0});
  }
  arcs_.push_back({Arc::Kind::top_ray, spec.l - 1, 0.0, inf});
}

std::array<double, 2> CrossSection::point(std::size_t i, double s) const {
  const Arc& arc = arcs_.at(i);
  const double ac = std::abs(c_);
  switch (arc.kind) {
    case Arc::Kind::bottom_ray:
      return {spec_.removed_bottom * (ac + s), 0.0};
    case Arc::Kind::top_ray:
      return {spec_.removed_top * (ac - s), static_cast<double>(spec_.l - 1)};
    case Arc::Kind::segment:
      return {spec_.bulge(arc.index) * ac * (1.0 - 2.0 * s), static_cast<double>(arc.index)};
    case Arc::Kind::bridge: {
      const double w = spec_.snake.width(s);
      const double x = c_ == 0.0 ? w : std::sqrt(w * w + c_ * c_);
      return {spec_.bulge(arc.index) * x, arc.index - 1 + SnakeCurve::rise(s)};
    }
  }
  return {0.0, 0.0};
}

std::array<double, 2> CrossSection::velocity(std::size_t i, double s) const {
  const Arc& arc = arcs_.at(i);
  switch (arc.kind) {
    case Arc::Kind::bottom_ray:
      return {static_cast<double>(spec_.removed_bottom), 0.0};
    case Arc::Kind::top_ray:
      return {-static_cast<double>(spec_.removed_top), 0.0};
    case Arc::Kind::segment:
      return {-2.0 * spec_.bulge(arc.index) * std::abs(c_), 0.0};
    case Arc::Kind::bridge: {
      const double w = spec_.snake.width(s);
      const double dw = spec_.snake.width_rate(s);
      const double dx = c_ == 0.0 ? dw : w * dw / std::sqrt(w * w + c_ * c_);
      return {spec_.bulge(arc.index) * dx, SnakeCurve::rise_rate(s)};
    }
  }
  return {0.0, 0.0};
}

StateVector CrossSection::ambient(std::size_t i, double s) const {
  const auto [x, z] = point(i, s);
  return {x, c_, z};
}

std::array<double, 3> CrossSection::normal(std::size_t i, double s) const {
  const Arc& arc = arcs_.at(i);
  if (arc.kind != Arc::Kind::bridge) return {0.0, 0.0, 1.0};
  // Bridge sheet (s, y) ↦ (b √(w(s)² + y²), y, j − 1 + F(s)); normal = ∂_s × ∂_y.
  const double w = spec_.snake.width(s);
  const double r = std::sqrt(w * w + c_ * c_);
  if (r == 0.0) return {0.0, 0.0, 1.0};
  const auto [dx_ds, dz_ds] = velocity(i, s);
  const double dx_dy = spec_.bulge(arc.index) * c_ / r;
  std::array<double, 3> n{-dz_ds, dz_ds * dx_dy, dx_ds};
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (len == 0.0) return {0.0, 0.0, 1.0};
  for (double& v : n) v /= len;
  return n;
}

CrossSection cross_section(const SurfaceSpec& spec, double c) { return CrossSection(spec, c); }

namespace {

struct Wedge {
  double from;
  double to;
};

std::vector<Wedge> kept_wedges(const SurfaceSpec& spec, int k) {
  const double q = kPi / 4.0;
  auto three_quadrants = [&](int removed_side) {
    const double centre = removed_side > 0 ? 0.0 : kPi;
    return std::vector<Wedge>{{centre + q, centre + 7.0 * q}};
  };
  if (k == 0) return three_quadrants(spec.removed_bottom);
  if (k == spec.l - 1) return three_quadrants(spec.removed_top);
  return {{q, 3.0 * q}, {5.0 * q, 7.0 * q}};
}

std::size_t steps(double length, double density, std::size_t floor) {
  return std::max(floor, static_cast<std::size_t>(std::ceil(length * density)));
}

}  // namespace

SurfaceMesh sample_surface(const SurfaceSpec& spec, double density, double radius) {
  if (!(density > 0.0)) throw std::invalid_argument("sample_surface: density must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("sample_surface: radius must be positive");
  SurfaceMesh mesh;
  const std::size_t rings = steps(radius, density, 2);

  for (int k = 0; k < spec.l; ++k) {
    const PieceId piece{PieceId::Kind::plane, k};
    const std::size_t origin = mesh.vertices.size();
    mesh.vertices.push_back({piece, {0.0, 0.0, static_cast<double>(k)}, {0.0, 0.0}});
    mesh.equilibrium_vertices.push_back(origin);

    for (const Wedge& wedge : kept_wedges(spec, k)) {
      const std::size_t spokes = steps((wedge.to - wedge.from) * radius, density, 2);
      const std::size_t first = mesh.vertices.size();
      auto at = [&](std::size_t ring, std::size_t spoke) {
        return ring == 0 ? origin : first + (ring - 1) * (spokes + 1) + spoke;
      };
      for (std::size_t i = 1; i <= rings; ++i) {
        const double r = radius * static_cast<double>(i) / static_cast<double>(rings);
        for (std::size_t j = 0; j <= spokes; ++j) {
          const double theta = wedge.from + (wedge.to - wedge.from) * static_cast<double>(j) / static_cast<double>(spokes);
          const double x = r * std::cos(theta);
          const double y = r * std::sin(theta);
          mesh.vertices.push_back({piece, {x, y, static_cast<double>(k)}, {x, y}});
        }
      }
      for (std::size_t j = 0; j < spokes; ++j) mesh.faces.push_back({origin, at(1, j), at(1, j + 1)});
      for (std::size_t i = 2; i <= rings; ++i) {
        for (std::size_t j = 0; j < spokes; ++j) {
          mesh.faces.push_back({at(i - 1, j), at(i, j), at(i, j + 1), at(i - 1, j + 1)});
        }
      }
    }
  }

  const double y_max = radius / std::numbers::sqrt2;
  const std::size_t ns = steps(1.0, density, 4);
  const std::size_t ny = steps(2.0 * y_max, density, 2);
  for (int j = 1; j <= spec.l - 1; ++j) {
    const PieceId piece{PieceId::Kind::bridge, j};
    const int b = spec.bulge(j);
    const std::size_t first = mesh.vertices.size();
    for (std::size_t i = 0; i <= ns; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(ns);
      const double w = spec.snake.width(s);
      const double z = j - 1 + SnakeCurve::rise(s);
      for (std::size_t m = 0; m <= ny; ++m) {
        const double y = -y_max + 2.0 * y_max * static_cast<double>(m) / static_cast<double>(ny);
        mesh.vertices.push_back({piece, {b * std::sqrt(w * w + y * y), y, z}, {s, y}});
      }
    }
    auto at = [&](std::size_t i, std::size_t m) { return first + i * (ny + 1) + m; };
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t m = 0; m < ny; ++m) mesh.faces.push_back({at(i, m), at(i + 1, m), at(i + 1, m + 1), at(i, m + 1)});
    }
  }
  return mesh;
}

SurfacePoint random_surface_point(const SurfaceSpec& spec, Rng& rng, double extent) {
  const auto pieces = static_cast<std::uint64_t>(2 * spec.l - 1);
  const auto pick = static_cast<int>(rng.below(pieces));
  if (pick < spec.l) {
    for (;;) {
      const double x = rng.uniform(-extent, extent);
      const double y = rng.uniform(-extent, extent);
      if (spec.plane_keeps(pick, x, y)) {
        return {{PieceId::Kind::plane, pick}, {x, y, static_cast<double>(pick)}, {x, y}};
      }
    }
  }
  const int j = pick - spec.l + 1;
  const double s = rng.unit();
  const double y = rng.uniform(-extent, extent);
  const double w = spec.snake.width(s);
  return {{PieceId::Kind::bridge, j},
          {spec.bulge(j) * std::sqrt(w * w + y * y), y, j - 1 + SnakeCurve::rise(s)},
          {s, y}};
}

}  // namespace klab
