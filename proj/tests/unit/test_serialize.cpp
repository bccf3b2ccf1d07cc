#include <doctest.h>

#include <sstream>
#include <string>

#include "klab/serialize.hpp"

using namespace klab;

TEST_CASE("polynomial JSON round-trips in graded-lex order") {
  const MultiPoly p = taming_p(4, 4.0);
  const auto j = to_json(p);
  CHECK(j["nvars"] == 3);
  CHECK(j["terms"].front()["exp"] == std::vector<int>{1, 0, 0});
  CHECK(j["terms"].front()["coef"] == doctest::Approx(-1.875));
  CHECK(poly_from_json(nlohmann::json::parse(j.dump())) == p);
  CHECK_THROWS(poly_from_json(nlohmann::json::parse(R"({"nvars":2,"terms":[{"exp":[1],"coef":1}]})")));
}

TEST_CASE("matrix JSON") {
  const auto m = SquareMatrix::from_rows({{1, 2}, {3, 4}});
  const auto j = to_json(m);
  CHECK(j.dump() == R"({"dim":2,"rows":[[1.0,2.0],[3.0,4.0]]})");
  CHECK(matrix_from_json(nlohmann::json::parse(j.dump())) == m);
  CHECK(matrix_from_json(nlohmann::json::parse("[[1]]")) == SquareMatrix::from_rows({{1}}));
  CHECK_THROWS(matrix_from_json(nlohmann::json::parse("[[1,2]]")));
  CHECK(to_json(PolySpaceBasis(2, 1)).dump() == "[[0,0],[1,0],[0,1]]");
}

TEST_CASE("OBJ output lists vertices, grouped faces and equilibrium tags") {
  const auto spec = build_surface(2, 0.5);
  const auto mesh = sample_surface(spec, 3.0);
  std::ostringstream out;
  write_obj(out, mesh);
  std::istringstream in(out.str());
  std::string line;
  std::size_t v = 0, f = 0, g = 0, eq = 0;
  while (std::getline(in, line)) {
    if (line.starts_with("v ")) ++v;
    if (line.starts_with("f ")) ++f;
    if (line.starts_with("g ")) ++g;
    if (line.starts_with("# equilibrium")) ++eq;
  }
  CHECK(v == mesh.vertices.size());
  CHECK(f == mesh.faces.size());
  CHECK(g == 3);
  CHECK(eq == 2);
}

TEST_CASE("CSV headers and row counts") {
  const auto spec = build_surface(3, 0.5);
  std::ostringstream section, snake;
  write_cross_section_csv(section, cross_section(spec, 0.5), 11);
  write_snake_csv(snake, spec, 11);
  const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  CHECK(section.str().starts_with("arc_id,s,x,z\n"));
  CHECK(lines(section.str()) == 1 + 11 * static_cast<long>(cross_section(spec, 0.5).arcs().size()));
  CHECK(snake.str().starts_with("bridge,s,x,z\n"));
  CHECK(lines(snake.str()) == 1 + 22);
}
