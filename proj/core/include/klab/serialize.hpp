#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "klab/linflow.hpp"
#include "klab/polynomials.hpp"
#include "klab/surface.hpp"
#include "klab/symspace.hpp"

namespace klab {

/// {"nvars": n, "terms": [{"exp": [...], "coef": c}, ...]} in graded-lex order.
nlohmann::ordered_json to_json(const MultiPoly& p);
MultiPoly poly_from_json(const nlohmann::json& j);

/// {"dim": D, "rows": [[...], ...]}
nlohmann::ordered_json to_json(const SquareMatrix& m);
SquareMatrix matrix_from_json(const nlohmann::json& j);

/// Multi-indices of the basis, in basis order.
nlohmann::ordered_json to_json(const PolySpaceBasis& basis);

/// Vertices, quad/triangle faces and one group per surface piece.
/// Equilibrium vertices are tagged with `# equilibrium k vertex i` comments.
void write_obj(std::ostream& out, const SurfaceMesh& mesh);

/// Columns: piece, x, y, z, u, v.
void write_point_cloud_csv(std::ostream& out, const SurfaceMesh& mesh);

/// Columns: arc_id, s, x, z. Rays are sampled over `ray_length` units.
void write_cross_section_csv(std::ostream& out, const CrossSection& section, std::size_t samples_per_arc,
                             double ray_length = 2.0);

/// Columns: bridge, s, x, z.
void write_snake_csv(std::ostream& out, const SurfaceSpec& spec, std::size_t samples_per_bridge);

}  // namespace klab
