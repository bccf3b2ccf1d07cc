#include "klab/serialize.hpp"

#include <map>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace klab {

using nlohmann::ordered_json;

ordered_json to_json(const MultiPoly& p) {
  ordered_json terms = ordered_json::array();
  for (const auto& [index, coef] : p.terms()) {
    terms.push_back(ordered_json{{"exp", index.exponents()}, {"coef", coef}});
  }
  return ordered_json{{"nvars", p.nvars()}, {"terms", std::move(terms)}};
}

MultiPoly poly_from_json(const nlohmann::json& j) {
  MultiPoly p(j.at("nvars").get<std::size_t>());
  for (const auto& term : j.at("terms")) {
    MultiIndex index(term.at("exp").get<std::vector<int>>());
    if (index.size() != p.nvars()) throw std::invalid_argument("polynomial JSON: exponent length differs from nvars");
    p.add_term(index, term.at("coef").get<double>());
  }
  return p;
}

ordered_json to_json(const SquareMatrix& m) { return ordered_json{{"dim", m.dim()}, {"rows", m.rows()}}; }

SquareMatrix matrix_from_json(const nlohmann::json& j) {
  const nlohmann::json& rows = j.is_object() ? j.at("rows") : j;
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("matrix JSON: expected a non-empty array of rows");
  return SquareMatrix::from_rows(rows.get<std::vector<std::vector<double>>>());
}

ordered_json to_json(const PolySpaceBasis& basis) {
  ordered_json out = ordered_json::array();
  for (const auto& index : basis.indices()) out.push_back(index.exponents());
  return out;
}

void write_obj(std::ostream& out, const SurfaceMesh& mesh) {
  fmt::print(out, "# vertices {} faces {}\n", mesh.vertices.size(), mesh.faces.size());
  for (std::size_t k = 0; k < mesh.equilibrium_vertices.size(); ++k) {
    fmt::print(out, "# equilibrium {} vertex {}\n", k, mesh.equilibrium_vertices[k] + 1);
  }
  for (const auto& v : mesh.vertices) {
    fmt::print(out, "v {:.9f} {:.9f} {:.9f}\n", v.ambient[0], v.ambient[1], v.ambient[2]);
  }
  // Faces grouped by the piece of their first vertex, groups in order of appearance.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const std::string name = mesh.vertices[mesh.faces[f].front()].piece.to_string();
    if (!groups.contains(name)) order.push_back(name);
    groups[name].push_back(f);
  }
  for (const auto& name : order) {
    fmt::print(out, "g {}\n", name);
    for (std::size_t f : groups[name]) {
      out << 'f';
      for (std::size_t v : mesh.faces[f]) fmt::print(out, " {}", v + 1);
      out << '\n';
    }
  }
}

void write_point_cloud_csv(std::ostream& out, const SurfaceMesh& mesh) {
  out << "piece,x,y,z,u,v\n";
  for (const auto& v : mesh.vertices) {
    fmt::print(out, "{},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f}\n", v.piece.to_string(), v.ambient[0], v.ambient[1],
               v.ambient[2], v.local[0], v.local[1]);
  }
}

void write_cross_section_csv(std::ostream& out, const CrossSection& section, std::size_t samples_per_arc,
                             double ray_length) {
  if (samples_per_arc < 2) throw std::invalid_argument("cross-section CSV: need at least two samples per arc");
  out << "arc_id,s,x,z\n";
  for (std::size_t i = 0; i < section.arcs().size(); ++i) {
    const Arc& arc = section.arcs()[i];
    double lo = arc.s_lo, hi = arc.s_hi;
    if (arc.kind == Arc::Kind::bottom_ray) lo = -ray_length;
    if (arc.kind == Arc::Kind::top_ray) hi = ray_length;
    for (std::size_t k = 0; k < samples_per_arc; ++k) {
      const double s = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples_per_arc - 1);
      const auto pt = section.point(i, s);
      fmt::print(out, "{},{:.9f},{:.9f},{:.9f}\n", i, s, pt[0], pt[1]);
    }
  }
}

void write_snake_csv(std::ostream& out, const SurfaceSpec& spec, std::size_t samples_per_bridge) {
  if (samples_per_bridge < 2) throw std::invalid_argument("snake CSV: need at least two samples per bridge");
  out << "bridge,s,x,z\n";
  for (int j = 1; j < spec.l; ++j) {
    for (std::size_t k = 0; k < samples_per_bridge; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(samples_per_bridge - 1);
      fmt::print(out, "{},{:.9f},{:.9f},{:.9f}\n", j, s, spec.bulge(j) * spec.snake.width(s),
                 j - 1 + SnakeCurve::rise(s));
    }
  }
}

}  // namespace klab
