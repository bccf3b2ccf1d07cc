#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "klab/errors.hpp"
#include "klab/verify.hpp"

using namespace klab;

namespace {

const MultiPoly X = MultiPoly::variable(3, coord::x);
const MultiPoly Y = MultiPoly::variable(3, coord::y);
const MultiPoly Z = MultiPoly::variable(3, coord::z);
const std::vector<double> kGrid{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0};

TamingPair default_pair(int l) {
  const Box2 box{-0.55, 0.55, 0.25, l - 1.25};
  return make_taming_pair(taming_q(), taming_p(l, compute_M(l, box, kDefaultMMargin)), 2 * l - 1);
}

// Brute-force sign-change count of p − κ along the section on a fine grid.
int brute_hits(const SurfaceSpec& spec, const MultiPoly& p, double c, double kappa) {
  const auto cs = cross_section(spec, c);
  int hits = 0;
  bool have_prev = false;
  double prev = 0.0;
  for (std::size_t i = 0; i < cs.arcs().size(); ++i) {
    const Arc& arc = cs.arcs()[i];
    const double lo = arc.kind == Arc::Kind::bottom_ray ? -1e4 : arc.s_lo;
    const double hi = arc.kind == Arc::Kind::top_ray ? 1e4 : arc.s_hi;
    const int n = arc.unbounded() ? 200000 : 20000;
    for (int k = 0; k <= n; ++k) {
      const double f = p(cs.ambient(i, lo + (hi - lo) * k / n)) - kappa;
      if (have_prev && (f < 0) != (prev < 0)) ++hits;
      prev = f;
      have_prev = true;
    }
  }
  return hits;
}

}  // namespace

TEST_CASE("taming passes for the example polynomials") {
  const auto spec2 = build_surface(2, 0.5);
  const auto r1 = verify_taming(spec2, make_taming_pair(taming_q(), example2_p(), 3), kGrid);
  CHECK(r1.pass);
  CHECK(verify_taming(spec2, default_pair(2), kGrid).pass);
  const auto r4 = verify_taming(build_surface(4, 0.5), make_taming_pair(taming_q(), taming_p(4, 4.0), 7), kGrid);
  CHECK(r4.pass);
  CHECK(r4.details.size() == kGrid.size());
  for (int l = 3; l <= 6; ++l) CHECK(verify_taming(build_surface(l, 0.5), default_pair(l), kGrid).pass);
}

TEST_CASE("taming fails for p = z and for too small M") {
  const auto spec = build_surface(2, 0.5);
  const auto r = verify_taming(spec, make_taming_pair(taming_q(), Z, 1), kGrid);
  CHECK(!r.pass);
  CHECK(r.worst_residual > 0.0);
  CHECK(!verify_taming(build_surface(4, 0.5), make_taming_pair(taming_q(), taming_p(4, 0.5), 7), kGrid).pass);
}

TEST_CASE("taming requires q = y") {
  const auto spec = build_surface(2, 0.5);
  CHECK_THROWS_AS(verify_taming(spec, make_taming_pair(X, example2_p(), 3), kGrid), UnsupportedConfiguration);
  CHECK_THROWS_AS(make_taming_pair(taming_q(), taming_p(4, 1.0), 3), std::invalid_argument);
}

TEST_CASE("transversality: specific fibers") {
  const auto spec = build_surface(2, 0.5);
  const auto tp = make_taming_pair(taming_q(), example2_p(), 3);
  const std::vector<Fiber> fibers{{0.0, 0.5}, {0.0, -10.0}};
  const auto r = verify_transversality(spec, tp, fibers, 1e-6);
  CHECK(r.pass);
  CHECK(r.details[0]["intersections"] == 1);
  CHECK(r.details[1]["intersections"] == 1);
  // p = −(x + 1)/2 on the bottom ray, so κ = −10 is hit at x = 19 on z = 0.
  const auto pre = chart_preimage(spec, tp, {0.0, -10.0});
  REQUIRE(pre.has_value());
  CHECK(pre->arc == 0);
  CHECK(pre->point[0] == doctest::Approx(19.0));
  CHECK(pre->point[2] == 0.0);
}

TEST_CASE("transversality counts agree with brute-force sampling") {
  for (int l : {2, 3, 4}) {
    const auto spec = build_surface(l, 0.5);
    const auto tp = default_pair(l);
    Rng rng(100 + l);
    const auto fibers = random_fibers(spec, tp, 200, rng);
    const auto r = verify_transversality(spec, tp, fibers, 1e-6);
    CHECK(r.pass);
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(r.details[i]["intersections"] == brute_hits(spec, tp.p, fibers[i].c, fibers[i].kappa));
    }
  }
}

TEST_CASE("transversality detects a fold") {
  // p = x² folds over the bottom ray: κ = 1 is met twice along y = 0.5.
  const auto spec = build_surface(2, 0.5);
  const std::vector<Fiber> fibers{{0.5, 4.0}};
  const auto r = verify_transversality(spec, make_taming_pair(taming_q(), X * X, 2), fibers, 1e-6);
  CHECK(!r.pass);
  CHECK(r.details[0]["intersections"] == brute_hits(spec, X * X, 0.5, 4.0));
}

TEST_CASE("graphlike: pass for the construction, fail for a constant projection") {
  const auto spec2 = build_surface(2, 0.5);
  CHECK(graphlike_check(spec2, default_pair(2), 2000, 1e-2).pass);
  CHECK(graphlike_check(build_surface(4, 0.5), make_taming_pair(taming_q(), taming_p(4, 4.0), 7), 1000, 1e-2).pass);
  const auto flat = graphlike_check(spec2, make_taming_pair(taming_q(), MultiPoly(3), 3), 500, 1e-2);
  CHECK(!flat.pass);
  CHECK_THROWS(graphlike_check(build_surface(5, 0.5), default_pair(5), 100, 1e-2));
}

TEST_CASE("Koopman eigenfunctions") {
  const auto spec = build_surface(3, 0.5);
  std::vector<double> t;
  for (int k = 0; k <= 40; ++k) t.push_back(-2.0 + 0.1 * k);
  Rng rng(1);
  CHECK(koopman_eigencheck(spec, X + Y, 1.0, 100, t, 1e-9, rng).pass);
  CHECK(koopman_eigencheck(spec, X - Y, -1.0, 100, t, 1e-9, rng).pass);
  CHECK(koopman_eigencheck(spec, Z, 0.0, 100, t, 1e-9, rng).pass);
  CHECK(!koopman_eigencheck(spec, X, 1.0, 20, t, 1e-9, rng).pass);
  CHECK(!koopman_eigencheck(spec, X, 0.0, 20, t, 1e-9, rng).pass);
}

TEST_CASE("invariant subspace fits diag(e^t, e^-t, 1)") {
  const auto spec = build_surface(2, 0.5);
  const std::vector<MultiPoly> fns{X + Y, X - Y, Z};
  const std::vector<double> t{-1.0, 0.3, 1.0};
  Rng rng(5);
  const auto fits = fit_koopman_matrices(spec, fns, t, rng);
  for (const auto& fit : fits.fits) {
    const double expected[3] = {std::exp(fit.t), std::exp(-fit.t), 1.0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(fit.coefficients[i][j] - (i == j ? expected[i] : 0.0)) <= 1e-8);
  }
  Rng rng2(5);
  CHECK(invariant_subspace_check(spec, fns, t, 1e-8, rng2).pass);
  const std::vector<MultiPoly> only_x{X};
  CHECK(!invariant_subspace_check(spec, only_x, std::vector<double>{1.0}, 1e-8, rng2).pass);
  const std::vector<MultiPoly> only_z{Z};
  const auto z_fit = fit_koopman_matrices(spec, only_z, std::vector<double>{0.7}, rng2);
  CHECK(z_fit.fits[0].coefficients[0][0] == doctest::Approx(1.0));
  const std::vector<MultiPoly> dependent{X, 2.0 * X};
  CHECK_THROWS_AS(fit_koopman_matrices(spec, dependent, t, rng2), std::invalid_argument);
}

TEST_CASE("conjugate field: hand-computed value and equilibria") {
  const auto spec = build_surface(2, 0.5);
  const auto tp = make_taming_pair(taming_q(), example2_p(), 3);
  const auto pre = chart_preimage(spec, tp, {0.0, 1.0});
  REQUIRE(pre.has_value());
  CHECK(pre->point[0] == doctest::Approx(1.0));
  CHECK(pre->point[2] == 1.0);
  const auto v = conjugate_field(spec, tp, {0.0, 1.0});
  REQUIRE(v.has_value());
  CHECK((*v)[0] == doctest::Approx(1.0));
  CHECK(std::abs((*v)[1]) < 1e-12);

  for (int l = 2; l <= 6; ++l) {
    const auto s = build_surface(l, 0.5);
    const auto pair = default_pair(l);
    for (const auto& e : equilibria(s)) {
      const auto field = conjugate_field(s, pair, {pair.q(e), pair.p(e)});
      REQUIRE(field.has_value());
      CHECK(std::hypot((*field)[0], (*field)[1]) <= 1e-10);
    }
  }
}

TEST_CASE("chart recovers random surface points and matches the flow derivative") {
  for (int l : {2, 4}) {
    const auto spec = build_surface(l, 0.5);
    const auto tp = default_pair(l);
    Rng rng(17);
    for (int k = 0; k < 100; ++k) {
      const StateVector xi = random_surface_point(spec, rng, 2.0).ambient;
      const std::array<double, 2> w{tp.q(xi), tp.p(xi)};
      const auto pre = chart_preimage(spec, tp, w);
      REQUIRE(pre.has_value());
      double dist = 0.0;
      for (int i = 0; i < 3; ++i) dist = std::max(dist, std::abs(pre->point[i] - xi[i]));
      CHECK(dist <= 1e-8 * (1.0 + norm2(xi)));

      const auto field = conjugate_field(spec, tp, w);
      REQUIRE(field.has_value());
      const double h = 1e-6;
      const auto up = closed_form_flow3(h, xi), down = closed_form_flow3(-h, xi);
      CHECK(std::abs((*field)[0] - (tp.q(up) - tp.q(down)) / (2 * h)) <= 1e-6 * (1 + std::abs((*field)[0])));
      CHECK(std::abs((*field)[1] - (tp.p(up) - tp.p(down)) / (2 * h)) <= 1e-6 * (1 + std::abs((*field)[1])));
    }
  }
}

TEST_CASE("obstruction: degree must reach turns + 1") {
  for (int turns = 1; turns <= 10; ++turns) {
    CHECK(min_degree(turns) == turns + 1);
    for (int m = 1; m <= 12; ++m) CHECK(obstruction_check(TurnCount::finite(turns), m).holds == (m >= turns + 1));
  }
  for (int m : {1, 5, 100}) {
    const auto r = obstruction_check(TurnCount::infinite(), m);
    CHECK(!r.holds);
    CHECK(!r.min_degree.has_value());
  }
  for (int l = 2; l <= 6; ++l) {
    CHECK(obstruction_check(TurnCount::finite(l - 1), 2 * l - 1).holds);
    CHECK(!obstruction_check(TurnCount::finite(l - 1), l - 1).holds);
  }
  CHECK(!obstruction_check(TurnCount::finite(3), 3).holds);
  CHECK(obstruction_check(TurnCount::finite(1), 3).holds);
  CHECK(obstruction_report(TurnCount::finite(5), 4).details[0]["explanation"].get<std::string>().starts_with(
      "degree < turns + 1"));
  CHECK_THROWS(TurnCount::finite(0));
}

TEST_CASE("turn count of the construction equals the sign changes of p_x along x = 0") {
  for (int l = 2; l <= 6; ++l) {
    const MultiPoly px = partial(taming_p(l, 1.0), coord::x);
    const MultiPoly on_axis = substitute(substitute(px, coord::x, 0.0), coord::y, 0.0);
    CHECK(count_sign_changes(on_axis, 0.0, l - 1.0) == l - 1);
  }
}

TEST_CASE("equivariance and invariance suites") {
  Rng rng(8);
  for (int m = 1; m <= 3; ++m) CHECK(verify_equivariance(hyperbolic_generator(0), m, 200, rng).pass);
  for (int l = 2; l <= 4; ++l) CHECK(verify_invariance(build_surface(l, 0.5), 500, rng).pass);
}

TEST_CASE("M bound and report layout") {
  CHECK(!verify_m_bound(4, 2.0, {-1, 1, 0, 3}).pass);
  CHECK(verify_m_bound(4, 4.0, {-1, 1, 0.25, 2.75}).pass);
  const auto j = verify_m_bound(2, 1.5, {-1, 1, 0, 1}).to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"suite", "pass", "samples", "worst_residual", "tolerance", "conventions",
                                         "details"});
  CHECK(!j["conventions"].empty());
}
