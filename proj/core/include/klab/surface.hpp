#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "klab/linflow.hpp"
#include "klab/random.hpp"

namespace klab {

/// The snake curve γ in the plane y = 0, joining the equilibria (0, 0, k).
///
/// Bridge j (1 ≤ j ≤ l − 1) is the arc
///   s ↦ (bulge(j) · a · sin(πs),  j − 1 + F(s)),   s ∈ [0, 1],
/// where F(s) = 1 / (1 + exp(1/s − 1/(1 − s))) is the C^∞ step that is flat at
/// both ends. Each arc leaves and enters its equilibrium tangent to the plane
/// z = const, which is what lets the bridge sheets glue smoothly onto the
/// planes, and turns (|x| = a) at height j − 1/2.
class SnakeCurve {
 public:
  SnakeCurve(int l, double a);

  int l() const { return l_; }
  double amplitude() const { return a_; }
  /// (−1)^(l − j): the side bridge j bulges toward.
  int bulge(int j) const;

  /// Unsigned half-width a·sin(πs) of a bridge at parameter s.
  double width(double s) const;
  double width_rate(double s) const;
  /// F(s) and F′(s).
  static double rise(double s);
  static double rise_rate(double s);
  /// Inverse of F on [0, 1] (closed form).
  static double rise_inverse(double t);

  /// x-displacement of γ at height z ∈ [0, l − 1]; zero at integers.
  double g(double z) const;
  /// dg/dz. Infinite at the integers, where γ is horizontal.
  double g_prime(double z) const;

 private:
  int bridge_at(double z) const;

  int l_;
  double a_;
};

SnakeCurve build_snake(int l, double a);

struct PieceId {
  enum class Kind { plane, bridge };
  Kind kind;
  /// Plane height k, or bridge number j.
  int index;

  bool operator==(const PieceId&) const = default;
  std::string to_string() const;
};

/// Σ^l: planes A_0 … A_{l−1} joined by l − 1 bridges, each bridge the union of
/// the hyperbolic orbits through one arc of the snake.
///
/// A_0 and A_{l−1} lose the open quadrant on the side of their bridge; every
/// interior plane keeps only the two quadrants containing (0, ±1). Quadrants
/// are removed open, so the cone lines y = ±x stay on the planes.
struct SurfaceSpec {
  int l;
  double a;
  SnakeCurve snake;
  /// bulge_dir[j − 1] for bridge j.
  std::vector<int> bulge_dir;
  int removed_bottom;
  int removed_top;

  int bulge(int j) const { return bulge_dir[static_cast<std::size_t>(j - 1)]; }
  /// Whether (x, y) lies in a kept closed quadrant of plane k, up to `slack`.
  bool plane_keeps(int k, double x, double y, double slack = 0.0) const;
};

SurfaceSpec build_surface(int l, double a);

/// A point of Σ^l. `local` is (x, y) on a plane, (s, y) on a bridge.
struct SurfacePoint {
  PieceId piece;
  StateVector ambient;
  std::array<double, 2> local;
};

/// Which piece of Σ^l contains p, if any, at tolerance `tol`.
///
/// Planes: |z − k| ≤ tol and (x, y) in a kept quadrant. Bridges: the orbit
/// invariant x² − y² matches g(z)² to tol·(1 + x² + y²) on the bulge side, or
/// the bridge height over (x, y) matches z to tol. The second test covers the
/// seams, where the sheet is flatter than double precision can resolve in z.
std::optional<PieceId> membership(const SurfaceSpec& spec, std::span<const double> p, double tol);

/// Exactly the l equilibria (0, 0, k).
std::vector<StateVector> equilibria(const SurfaceSpec& spec);

/// One parametrized arc of a cross-section Σ^l ∩ {y = c}, traversed upward
/// with increasing parameter.
struct Arc {
  enum class Kind { bottom_ray, bridge, segment, top_ray };
  Kind kind;
  /// Plane height for rays and segments, bridge number for bridges.
  int index;
  double s_lo;
  double s_hi;

  PieceId piece() const;
  bool unbounded() const { return kind == Kind::bottom_ray || kind == Kind::top_ray; }
};

/// Σ^l ∩ {y = c} as an ordered chain of arcs: bottom ray, then alternating
/// bridges and interior segments (omitted when c = 0, where they collapse to
/// points), then the top ray. z is nondecreasing along the chain.
class CrossSection {
 public:
  CrossSection(const SurfaceSpec& spec, double c);

  double y_value() const { return c_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  /// (x, z) on arc i at parameter s.
  std::array<double, 2> point(std::size_t i, double s) const;
  /// d(x, z)/ds.
  std::array<double, 2> velocity(std::size_t i, double s) const;
  StateVector ambient(std::size_t i, double s) const;
  /// Unit normal of Σ^l at the arc point.
  std::array<double, 3> normal(std::size_t i, double s) const;

 private:
  SurfaceSpec spec_;
  double c_;
  std::vector<Arc> arcs_;
};

CrossSection cross_section(const SurfaceSpec& spec, double c);

struct SurfaceMesh {
  std::vector<SurfacePoint> vertices;
  /// Triangles and quads, vertex indices counter-clockwise in local coordinates.
  std::vector<std::vector<std::size_t>> faces;
  /// Vertex index of equilibrium (0, 0, k), for k = 0 … l − 1.
  std::vector<std::size_t> equilibrium_vertices;
};

/// Deterministic mesh of Σ^l: polar grids over the kept quadrants of each
/// plane out to `radius`, and (s, y) grids over each bridge with
/// |y| ≤ radius/√2 (so bridge edges meet the plane grids on the cone lines).
SurfaceMesh sample_surface(const SurfaceSpec& spec, double density, double radius = 2.0);

/// A random point of Σ^l: a uniformly chosen piece, then a uniform point of
/// that piece with |x|, |y| ≤ extent (planes) or |y| ≤ extent (bridges).
SurfacePoint random_surface_point(const SurfaceSpec& spec, Rng& rng, double extent);

}  // namespace klab
