#include "klab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "klab/errors.hpp"
#include "klab/symspace.hpp"

namespace klab {

using nlohmann::ordered_json;

nlohmann::ordered_json VerificationReport::to_json() const {
  ordered_json out;
  out["suite"] = suite;
  out["pass"] = pass;
  out["samples"] = samples;
  out["worst_residual"] = worst_residual;
  out["tolerance"] = tolerance;
  out["conventions"] = conventions;
  out["details"] = details;
  return out;
}

std::vector<std::string> standard_conventions() {
  return {
      "quadrants are removed open; the cone lines y = +-x stay on the planes",
      "snake arcs rise flat from each equilibrium (horizontal tangency at the seams); turns at z = j - 1/2, |x| = a",
      "first taming polynomial is q = y",
      "constant terms are invisible through Delta^m; level sets shift by a constant",
      "taming asserts exactly-once (monotone and onto); transversality asserts at-most-once",
      "fiber hits within 1e-6 of an equilibrium are flagged, not excluded",
  };
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kArcSamples = 2000;
constexpr double kRayExtent = 8.0;
constexpr double kEquilibriumFlagRadius = 1e-6;

struct Gradient {
  explicit Gradient(const MultiPoly& p)
      : dx(partial(p, coord::x)), dy(partial(p, coord::y)), dz(partial(p, coord::z)) {}
  std::array<double, 3> operator()(std::span<const double> pt) const { return {dx(pt), dy(pt), dz(pt)}; }
  MultiPoly dx, dy, dz;
};

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::array<double, 3> normalized(std::array<double, 3> v) {
  const double len = std::sqrt(dot(v, v));
  for (double& c : v) c /= len;
  return v;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

void require_q_is_y(const TamingPair& tp) {
  if (!(tp.q == taming_q())) {
    throw UnsupportedConfiguration("cross-section suites require the first taming polynomial to be q = y");
  }
}

void finish(VerificationReport& report, bool predicates_hold) {
  report.pass = predicates_hold && report.worst_residual <= report.tolerance;
}

// Finite sampling interval of an arc; rays are cut at kRayExtent.
std::pair<double, double> sample_range(const Arc& arc) {
  switch (arc.kind) {
    case Arc::Kind::bottom_ray:
      return {-kRayExtent, 0.0};
    case Arc::Kind::top_ray:
      return {0.0, kRayExtent};
    default:
      return {arc.s_lo, arc.s_hi};
  }
}

// Root-search nodes: a dense grid near the junction, then a geometric tail
// for rays so far-out crossings are bracketed too.
std::vector<double> search_nodes(const Arc& arc) {
  constexpr int dense = 400;
  std::vector<double> nodes;
  if (!arc.unbounded()) {
    for (int k = 0; k <= dense; ++k) nodes.push_back(static_cast<double>(k) / dense);
    return nodes;
  }
  const double dir = arc.kind == Arc::Kind::bottom_ray ? -1.0 : 1.0;
  for (int k = 0; k <= dense; ++k) nodes.push_back(dir * kRayExtent * k / dense);
  for (int k = 1; k <= 45; ++k) nodes.push_back(dir * kRayExtent * std::ldexp(1.0, k));
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

// Sign of p far out along a ray, from the leading x-coefficient of p on the
// ray's line. 0 when p is constant there.
int ray_limit_sign(const MultiPoly& p, double c, double z, int x_direction) {
  const UniPoly along = to_univariate(substitute(substitute(p, coord::y, c), coord::z, z), coord::x);
  if (along.degree() < 1) return 0;
  const int lead = along.leading() > 0 ? 1 : -1;
  return (along.degree() % 2 == 0 || x_direction > 0) ? lead : -lead;
}

template <typename F>
double bisect_increasing(F&& f, double lo, double hi) {
  for (int it = 0; it < 4096; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  throw NumericalFailure("bisection did not converge within 4096 iterations");
}

template <typename F>
double bisect_sign_change(F&& f, double lo, double hi) {
  const bool lo_negative = f(lo) < 0.0;
  return bisect_increasing([&](double s) { return lo_negative ? f(s) : -f(s); }, lo, hi);
}

}  // namespace

TamingPair make_taming_pair(MultiPoly q, MultiPoly p, int m) {
  if (q.nvars() != 3 || p.nvars() != 3) throw std::invalid_argument("taming pair: polynomials must live on R^3");
  if (m < 1 || q.degree() > m || p.degree() > m) {
    throw std::invalid_argument("taming pair: polynomial degree exceeds m");
  }
  return TamingPair{std::move(q), std::move(p), m};
}

VerificationReport verify_taming(const SurfaceSpec& spec, const TamingPair& tp, std::span<const double> y_grid,
                                 double margin) {
  require_q_is_y(tp);
  VerificationReport report{"taming", false, 0, 0.0, 0.0, standard_conventions(), {}};
  const Gradient grad(tp.p);
  double worst = kInf;
  bool all_onto = true;

  for (double c : y_grid) {
    const CrossSection section = cross_section(spec, c);
    double min_rate = kInf;
    double min_slope = kInf;
    for (std::size_t i = 0; i < section.arcs().size(); ++i) {
      const auto [lo, hi] = sample_range(section.arcs()[i]);
      const double step = (hi - lo) / kArcSamples;
      double previous = tp.p(section.ambient(i, lo));
      for (std::size_t k = 0; k < kArcSamples; ++k) {
        const double s0 = lo + step * static_cast<double>(k);
        const double mid = s0 + 0.5 * step;
        const auto [dx, dz] = section.velocity(i, mid);
        const double speed = std::hypot(dx, dz);
        if (speed > 0.0) {
          const auto g = grad(section.ambient(i, mid));
          min_rate = std::min(min_rate, (g[0] * dx + g[2] * dz) / speed);
        }
        const double next = tp.p(section.ambient(i, k + 1 == kArcSamples ? hi : s0 + step));
        if (!std::isfinite(next)) {
          throw NumericalFailure("verify_taming: p is not finite along the section y = " + std::to_string(c));
        }
        min_slope = std::min(min_slope, (next - previous) / step);
        previous = next;
        ++report.samples;
      }
    }
    const bool onto_bottom = ray_limit_sign(tp.p, c, 0.0, -spec.removed_bottom) < 0;
    const bool onto_top = ray_limit_sign(tp.p, c, spec.l - 1.0, -spec.removed_top) > 0;
    all_onto = all_onto && onto_bottom && onto_top;
    worst = std::min({worst, min_rate, min_slope});

    ordered_json case_record;
    case_record["y"] = c;
    case_record["min_derivative"] = min_rate;
    case_record["min_forward_slope"] = min_slope;
    case_record["tends_to_minus_infinity_on_bottom_ray"] = onto_bottom;
    case_record["tends_to_plus_infinity_on_top_ray"] = onto_top;
    case_record["pass"] = onto_bottom && onto_top && min_rate >= margin && min_slope >= margin;
    report.details.push_back(std::move(case_record));
  }

  report.worst_residual = y_grid.empty() ? 0.0 : std::max(0.0, margin - worst);
  report.tolerance = 0.0;
  finish(report, all_onto && !y_grid.empty());
  return report;
}

VerificationReport verify_transversality(const SurfaceSpec& spec, const TamingPair& tp, std::span<const Fiber> fibers,
                                         double tol) {
  require_q_is_y(tp);
  VerificationReport report{"transversality", false, fibers.size(), 0.0, 0.0, standard_conventions(), {}};
  const Gradient grad_p(tp.p);
  const Gradient grad_q(tp.q);
  const auto eq = equilibria(spec);
  double min_det = kInf;
  bool counts_ok = true;

  for (const Fiber& fiber : fibers) {
    const CrossSection section = cross_section(spec, fiber.c);
    std::vector<std::pair<std::size_t, double>> hits;
    std::vector<StateVector> hit_points;
    auto record = [&](std::size_t arc, double s) {
      StateVector pt = section.ambient(arc, s);
      for (const auto& other : hit_points) {
        if (distance(pt, other) <= 1e-9 * (1.0 + norm2(pt))) return;
      }
      hits.emplace_back(arc, s);
      hit_points.push_back(std::move(pt));
    };

    for (std::size_t i = 0; i < section.arcs().size(); ++i) {
      auto f = [&](double s) { return tp.p(section.ambient(i, s)) - fiber.kappa; };
      const auto nodes = search_nodes(section.arcs()[i]);
      double f_prev = f(nodes.front());
      if (f_prev == 0.0) record(i, nodes.front());
      for (std::size_t k = 1; k < nodes.size(); ++k) {
        const double f_next = f(nodes[k]);
        if (f_next == 0.0) {
          record(i, nodes[k]);
        } else if (f_prev != 0.0 && (f_prev < 0.0) != (f_next < 0.0)) {
          record(i, bisect_sign_change(f, nodes[k - 1], nodes[k]));
        }
        f_prev = f_next;
      }
    }

    ordered_json case_record;
    case_record["c"] = fiber.c;
    case_record["kappa"] = fiber.kappa;
    case_record["intersections"] = hits.size();
    counts_ok = counts_ok && hits.size() <= 1;
    ordered_json dets = ordered_json::array();
    bool near_equilibrium = false;
    for (std::size_t h = 0; h < hits.size(); ++h) {
      const auto& [arc, s] = hits[h];
      const auto n = section.normal(arc, s);
      const auto u = normalized({-n[2], 0.0, n[0]});
      const auto v = normalized(cross(n, u));
      const auto gq = grad_q(hit_points[h]);
      const auto gp = grad_p(hit_points[h]);
      const double det = dot(gq, u) * dot(gp, v) - dot(gq, v) * dot(gp, u);
      min_det = std::min(min_det, std::abs(det));
      dets.push_back(det);
      for (const auto& e : eq) near_equilibrium = near_equilibrium || distance(hit_points[h], e) <= kEquilibriumFlagRadius;
    }
    case_record["determinants"] = std::move(dets);
    case_record["near_equilibrium"] = near_equilibrium;
    report.details.push_back(std::move(case_record));
  }

  report.worst_residual = min_det == kInf ? 0.0 : std::max(0.0, tol - min_det);
  finish(report, counts_ok);
  return report;
}

std::vector<Fiber> random_fibers(const SurfaceSpec& spec, const TamingPair& tp, std::size_t count, Rng& rng) {
  std::vector<Fiber> fibers;
  fibers.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double c = rng.uniform(-2.0, 2.0);
    if (i % 2 == 0) {
      const CrossSection section = cross_section(spec, c);
      const std::size_t arc = rng.below(section.arcs().size());
      const auto [lo, hi] = sample_range(section.arcs()[arc]);
      fibers.push_back({c, tp.p(section.ambient(arc, rng.uniform(lo, hi)))});
    } else {
      fibers.push_back({c, rng.uniform(-20.0, 20.0)});
    }
  }
  return fibers;
}

VerificationReport graphlike_check(const SurfaceSpec& spec, const TamingPair& tp, std::size_t n_samples,
                                   double separation, double collision) {
  if (tp.degree > 8) throw std::invalid_argument("graphlike_check: m must be at most 8");
  if (n_samples < 2) throw std::invalid_argument("graphlike_check: needs at least two samples");
  VerificationReport report{"graphlike", false, n_samples, 0.0, 0.0, standard_conventions(), {}};

  const BasisRef basis = make_basis(3, tp.degree);
  const Covector eta_q = functional_from_polynomial(tp.q, basis);
  const Covector eta_p = functional_from_polynomial(tp.p, basis);

  constexpr int levels = 21;
  constexpr double ray_length = 3.0;
  std::vector<StateVector> ambient;
  std::vector<std::array<double, 2>> projected;
  for (int level = 0; level < levels; ++level) {
    const double c = (level - levels / 2) / 5.0;
    const CrossSection section = cross_section(spec, c);
    const std::size_t count = n_samples / levels + (static_cast<std::size_t>(level) < n_samples % levels ? 1 : 0);
    std::vector<double> lengths;
    for (const Arc& arc : section.arcs()) lengths.push_back(arc.unbounded() ? ray_length : 1.0);
    double total = 0.0;
    for (double len : lengths) total += len;
    for (std::size_t k = 0; k < count; ++k) {
      double u = total * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
      std::size_t arc = 0;
      while (arc + 1 < lengths.size() && u > lengths[arc]) u -= lengths[arc++];
      const Arc& a = section.arcs()[arc];
      const double s = a.kind == Arc::Kind::bottom_ray ? u - ray_length : u;
      StateVector pt = section.ambient(arc, s);
      const PolySpaceElement image = delta_embed(basis, pt);
      projected.push_back({pairing(eta_q, image), pairing(eta_p, image)});
      ambient.push_back(std::move(pt));
    }
  }

  double min_projected = kInf;
  std::size_t pairs = 0;
  std::size_t collisions = 0;
  for (std::size_t i = 0; i < ambient.size(); ++i) {
    for (std::size_t j = i + 1; j < ambient.size(); ++j) {
      if (distance(ambient[i], ambient[j]) < separation) continue;
      ++pairs;
      const double d = std::hypot(projected[i][0] - projected[j][0], projected[i][1] - projected[j][1]);
      min_projected = std::min(min_projected, d);
      if (d < collision) ++collisions;
    }
  }

  ordered_json summary;
  summary["embedding_dimension"] = basis->dim();
  summary["sections"] = levels;
  summary["separated_pairs"] = pairs;
  summary["min_projected_distance"] = min_projected == kInf ? 0.0 : min_projected;
  summary["separation"] = separation;
  summary["collision_threshold"] = collision;
  summary["collisions"] = collisions;
  report.details.push_back(std::move(summary));
  report.worst_residual = min_projected == kInf ? 0.0 : std::max(0.0, collision - min_projected);
  finish(report, collisions == 0);
  return report;
}

VerificationReport koopman_eigencheck(const SurfaceSpec& spec, const MultiPoly& psi, double lambda,
                                      std::size_t n_traj, std::span<const double> t_grid, double tol, Rng& rng) {
  if (psi.nvars() != 3) throw std::invalid_argument("koopman_eigencheck: psi must be a function on R^3");
  VerificationReport report{"koopman", false, 0, 0.0, tol, standard_conventions(), {}};
  double worst = 0.0;
  for (std::size_t k = 0; k < n_traj; ++k) {
    const StateVector x0 = random_surface_point(spec, rng, 2.0).ambient;
    const double psi0 = psi(x0);
    double traj_worst = 0.0;
    for (double t : t_grid) {
      const double predicted = std::exp(lambda * t) * psi0;
      const double observed = psi(closed_form_flow3(t, x0));
      const double err = std::abs(observed - predicted) / (1.0 + std::abs(psi0) * std::exp(std::abs(lambda * t)));
      traj_worst = std::max(traj_worst, err);
      ++report.samples;
    }
    worst = std::max(worst, traj_worst);
    ordered_json case_record;
    case_record["x0"] = x0;
    case_record["max_residual"] = traj_worst;
    report.details.push_back(std::move(case_record));
  }
  report.worst_residual = worst;
  finish(report, true);
  return report;
}

namespace {

using Matrix = std::vector<std::vector<double>>;

// Cyclic Jacobi sweep for the eigenvalues of a small symmetric matrix.
std::vector<double> symmetric_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  return eig;
}

// Solves G x = b for symmetric positive definite G.
std::vector<double> cholesky_solve(const Matrix& g, std::vector<double> b) {
  const std::size_t n = g.size();
  Matrix l(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = g[i][j];
      for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      l[i][j] = i == j ? std::sqrt(sum) : sum / l[j][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l[i][k] * b[k];
    b[i] /= l[i][i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= l[k][i] * b[k];
    b[i] /= l[i][i];
  }
  return b;
}

}  // namespace

KoopmanFits fit_koopman_matrices(const SurfaceSpec& spec, std::span<const MultiPoly> basis_fns,
                                 std::span<const double> t_grid, Rng& rng) {
  const std::size_t k = basis_fns.size();
  if (k == 0) throw std::invalid_argument("fit_koopman_matrices: empty basis");
  const std::size_t n = std::max<std::size_t>(50, 10 * k * k);

  std::vector<StateVector> points;
  Matrix values(n, std::vector<double>(k));
  for (std::size_t s = 0; s < n; ++s) {
    points.push_back(random_surface_point(spec, rng, 2.0).ambient);
    for (std::size_t j = 0; j < k; ++j) values[s][j] = basis_fns[j](points.back());
  }

  Matrix gram(k, std::vector<double>(k, 0.0));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) gram[i][j] += values[s][i] * values[s][j];

  const auto eig = symmetric_eigenvalues(gram);
  const double eig_max = *std::max_element(eig.begin(), eig.end());
  const double eig_min = *std::min_element(eig.begin(), eig.end());
  const double condition = eig_min > 0.0 ? eig_max / eig_min : kInf;
  if (!(condition <= kGramConditionLimit)) {
    throw std::invalid_argument("fit_koopman_matrices: degenerate Gram matrix (basis functions are dependent on the surface)");
  }

  KoopmanFits out{{}, condition, n};
  for (double t : t_grid) {
    Matrix flowed(n, std::vector<double>(k));
    for (std::size_t s = 0; s < n; ++s) {
      const StateVector moved = closed_form_flow3(t, points[s]);
      for (std::size_t i = 0; i < k; ++i) flowed[s][i] = basis_fns[i](moved);
    }
    KoopmanFit fit{t, Matrix(k), 0.0};
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> rhs(k, 0.0);
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t j = 0; j < k; ++j) rhs[j] += values[s][j] * flowed[s][i];
      fit.coefficients[i] = cholesky_solve(gram, std::move(rhs));
    }
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t i = 0; i < k; ++i) {
        double predicted = 0.0;
        for (std::size_t j = 0; j < k; ++j) predicted += fit.coefficients[i][j] * values[s][j];
        fit.residual = std::max(fit.residual, std::abs(flowed[s][i] - predicted) / (1.0 + std::abs(flowed[s][i])));
      }
    }
    out.fits.push_back(std::move(fit));
  }
  return out;
}

VerificationReport invariant_subspace_check(const SurfaceSpec& spec, std::span<const MultiPoly> basis_fns,
                                            std::span<const double> t_grid, double tol, Rng& rng) {
  const KoopmanFits fits = fit_koopman_matrices(spec, basis_fns, t_grid, rng);
  VerificationReport report{"subspace", false, fits.samples * t_grid.size(), 0.0, tol, standard_conventions(), {}};
  for (const auto& fit : fits.fits) {
    ordered_json case_record;
    case_record["t"] = fit.t;
    case_record["coefficients"] = fit.coefficients;
    case_record["residual"] = fit.residual;
    case_record["gram_condition"] = fits.gram_condition;
    report.details.push_back(std::move(case_record));
    report.worst_residual = std::max(report.worst_residual, fit.residual);
  }
  finish(report, true);
  return report;
}

std::array<double, 3> hyperbolic_field(std::span<const double> p) { return {p[1], p[0], 0.0}; }

std::optional<ChartPreimage> chart_preimage(const SurfaceSpec& spec, const TamingPair& tp, std::array<double, 2> w) {
  require_q_is_y(tp);
  const CrossSection section = cross_section(spec, w[0]);
  const std::size_t n_arcs = section.arcs().size();
  auto solve = [&](std::size_t arc, double lo, double hi) {
    auto f = [&](double s) { return tp.p(section.ambient(arc, s)) - w[1]; };
    const double s = bisect_increasing(f, lo, hi);
    return ChartPreimage{section.ambient(arc, s), arc, s};
  };
  // Walks outward along a ray until p crosses w₁; nullopt if it never does.
  auto bracket_ray = [&](std::size_t arc, double dir) -> std::optional<double> {
    double s = dir;
    for (int k = 0; k < 1100; ++k, s *= 2.0) {
      const double f = tp.p(section.ambient(arc, s)) - w[1];
      if (!std::isfinite(f)) return std::nullopt;
      if (dir < 0.0 ? f <= 0.0 : f >= 0.0) return s;
    }
    return std::nullopt;
  };

  if (tp.p(section.ambient(0, 0.0)) >= w[1]) {
    const auto far = bracket_ray(0, -1.0);
    if (!far) return std::nullopt;
    return solve(0, *far, 0.0);
  }
  for (std::size_t i = 1; i + 1 < n_arcs; ++i) {
    const Arc& arc = section.arcs()[i];
    if (tp.p(section.ambient(i, arc.s_hi)) >= w[1]) return solve(i, arc.s_lo, arc.s_hi);
  }
  const auto far = bracket_ray(n_arcs - 1, 1.0);
  if (!far) return std::nullopt;
  return solve(n_arcs - 1, 0.0, *far);
}

std::optional<std::array<double, 2>> conjugate_field(const SurfaceSpec& spec, const TamingPair& tp,
                                                     std::array<double, 2> w) {
  const auto pre = chart_preimage(spec, tp, w);
  if (!pre) return std::nullopt;
  const auto field = hyperbolic_field(pre->point);
  const auto gq = Gradient(tp.q)(pre->point);
  const auto gp = Gradient(tp.p)(pre->point);
  return std::array<double, 2>{dot(gq, field), dot(gp, field)};
}

TurnCount TurnCount::finite(int turns) {
  if (turns < 1) throw std::invalid_argument("TurnCount: turns must be positive");
  TurnCount out;
  out.turns_ = turns;
  return out;
}

int min_degree(int turns) {
  if (turns < 1) throw std::invalid_argument("min_degree: turns must be positive");
  return turns + 1;
}

ObstructionResult obstruction_check(TurnCount turns, int degree) {
  if (degree < 1) throw std::invalid_argument("obstruction_check: degree must be positive");
  if (turns.is_infinite()) {
    return {false, std::nullopt,
            "infinitely many turns force p_x(0, z) to change sign infinitely often, impossible for a polynomial"};
  }
  const int needed = min_degree(turns.value());
  if (degree >= needed) {
    return {true, needed,
            "degree " + std::to_string(degree) + " >= turns + 1 = " + std::to_string(needed) +
                ": p_x(0, z) can change sign at every turn"};
  }
  return {false, needed,
          "degree < turns + 1: p_x(0, z) has z-degree at most " + std::to_string(degree - 1) + " and cannot change sign " +
              std::to_string(turns.value()) + " times"};
}

VerificationReport obstruction_report(TurnCount turns, int degree) {
  const ObstructionResult result = obstruction_check(turns, degree);
  VerificationReport report{"obstruction", result.holds, 1, 0.0, 0.0, standard_conventions(), {}};
  ordered_json case_record;
  case_record["turns"] = turns.is_infinite() ? ordered_json("infinite") : ordered_json(turns.value());
  case_record["degree"] = degree;
  case_record["min_degree"] = result.min_degree ? ordered_json(*result.min_degree) : ordered_json(nullptr);
  case_record["holds"] = result.holds;
  case_record["explanation"] = result.explanation;
  report.details.push_back(std::move(case_record));
  return report;
}

VerificationReport verify_equivariance(const SquareMatrix& a, int m, std::size_t n_samples, Rng& rng, double tol) {
  VerificationReport report{"equivariance", false, n_samples, 0.0, tol, standard_conventions(), {}};
  const BasisRef basis = make_basis(a.dim(), m);
  const SquareMatrix generator = lift_generator(a, m);
  for (std::size_t k = 0; k < n_samples; ++k) {
    StateVector x(a.dim());
    for (double& v : x) v = rng.uniform(-3.0, 3.0);
    if (const double r = norm2(x); r > 3.0) {
      const double shrink = 3.0 * rng.unit() / r;
      for (double& v : x) v *= shrink;
    }
    const double t = rng.uniform(-2.0, 2.0);
    const auto image = delta_embed(basis, x);
    const auto lifted = matrix_exp(generator, t).apply(image.coords);
    const auto direct = delta_embed(basis, flow_point(a, t, x)).coords;
    double err = 0.0;
    for (std::size_t i = 0; i < lifted.size(); ++i) err = std::max(err, std::abs(lifted[i] - direct[i]));
    report.worst_residual = std::max(report.worst_residual, err / (1.0 + norm_inf(image.coords)));
  }
  ordered_json summary;
  summary["m"] = m;
  summary["lifted_dimension"] = basis->dim();
  report.details.push_back(std::move(summary));
  finish(report, true);
  return report;
}

VerificationReport verify_invariance(const SurfaceSpec& spec, std::size_t n_samples, Rng& rng, double member_tol,
                                     double conservation_tol) {
  VerificationReport report{"invariance", false, n_samples, 0.0, conservation_tol, standard_conventions(), {}};
  std::size_t left_surface = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const SurfacePoint start = random_surface_point(spec, rng, 3.0);
    const StateVector& p = start.ambient;
    const double t = rng.uniform(-2.0, 2.0);
    const StateVector moved = closed_form_flow3(t, p);
    const double tol = member_tol * (1.0 + norm2(p) * norm2(p));
    if (!membership(spec, moved, tol)) {
      ++left_surface;
      ordered_json miss;
      miss["start"] = p;
      miss["piece"] = start.piece.to_string();
      miss["t"] = t;
      report.details.push_back(std::move(miss));
    }
    const double drift = std::abs(conserved_quantity(moved) - conserved_quantity(p));
    report.worst_residual = std::max(report.worst_residual, drift / (1.0 + p[0] * p[0] + p[1] * p[1]));
  }
  ordered_json summary;
  summary["membership_tolerance"] = member_tol;
  summary["left_surface"] = left_surface;
  report.details.insert(report.details.begin(), std::move(summary));
  finish(report, left_surface == 0);
  return report;
}

VerificationReport verify_m_bound(int l, double M, const Box2& box) {
  const double bound = compute_M(l, box, 0.0);
  VerificationReport report{"m_bound", M > bound, 1, std::max(0.0, bound - M), 0.0, standard_conventions(), {}};
  ordered_json case_record;
  case_record["l"] = l;
  case_record["M"] = M;
  case_record["box"] = {box.x_lo, box.x_hi, box.z_lo, box.z_hi};
  case_record["bound"] = bound;
  case_record["strictly_larger"] = M > bound;
  report.details.push_back(std::move(case_record));
  return report;
}

}  // namespace klab
