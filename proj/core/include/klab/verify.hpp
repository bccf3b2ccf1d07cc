#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "klab/linflow.hpp"
#include "klab/polynomials.hpp"
#include "klab/random.hpp"
#include "klab/surface.hpp"

namespace klab {

/// Outcome of one verification suite.
///
/// Lower-bound checks (derivative margins, determinants, separations) report
/// their shortfall below the required bound as `worst_residual` against a
/// tolerance of 0; upper-bound checks report the measured error directly.
struct VerificationReport {
  std::string suite;
  bool pass = false;
  std::size_t samples = 0;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> conventions;
  std::vector<nlohmann::ordered_json> details;

  /// Keys in the fixed order suite, pass, samples, worst_residual,
  /// tolerance, conventions, details.
  nlohmann::ordered_json to_json() const;
};

/// Modelling conventions every report records.
std::vector<std::string> standard_conventions();

/// The polynomials (q, p) whose joint fibers are checked against Σ^l.
struct TamingPair {
  MultiPoly q;
  MultiPoly p;
  int degree;
};

/// Checks deg q, deg p ≤ m and that both live on R³.
TamingPair make_taming_pair(MultiPoly q, MultiPoly p, int m);

/// Default strict-positivity margin for taming derivatives.
inline constexpr double kDefaultTamingMargin = 1e-8;

/// Exactly-once taming along every cross-section y = c, c in `y_grid`.
///
/// Along each section p must increase strictly: its derivative per unit arc
/// length at 2000 interior points per arc (rays sampled over 8 units), and
/// the forward-difference slopes between those points, are at least
/// `margin`; p restricted to the bottom and top rays must tend to −∞ and +∞.
/// Monotone and onto means every fiber {y = c, p = κ} meets Σ^l exactly once.
/// Throws UnsupportedConfiguration unless q = y.
VerificationReport verify_taming(const SurfaceSpec& spec, const TamingPair& tp, std::span<const double> y_grid,
                                 double margin = kDefaultTamingMargin);

struct Fiber {
  double c;
  double kappa;
};

/// At-most-once and transverse intersections of the fibers {y = c, p = κ}
/// with Σ^l. Intersections are located by bisection on sign changes of p − κ
/// along the cross-section; at each one the 2×2 matrix of dq, dp on an
/// orthonormal tangent basis of Σ^l must have |det| ≥ tol. Hits within 1e-6
/// of an equilibrium are flagged in the details.
VerificationReport verify_transversality(const SurfaceSpec& spec, const TamingPair& tp, std::span<const Fiber> fibers,
                                         double tol);

/// Fibers with c uniform in [−2, 2]; half take κ = p at a random section
/// point, half κ uniform in [−20, 20].
std::vector<Fiber> random_fibers(const SurfaceSpec& spec, const TamingPair& tp, std::size_t count, Rng& rng);

/// Injectivity at scale of the projection of Δ^m(Σ^l) through the covectors
/// of q and p: every pair of samples at ambient distance ≥ `separation` must
/// project at distance ≥ `collision`. Samples are spread along 21 sections
/// y ∈ [−2, 2] (including y = 0). Requires m ≤ 8.
VerificationReport graphlike_check(const SurfaceSpec& spec, const TamingPair& tp, std::size_t n_samples,
                                   double separation, double collision = 1e-6);

/// |ψ(Ψ^t x₀) − e^{λt} ψ(x₀)| ≤ tol (1 + |ψ(x₀)| e^{|λt|}) for random x₀ on Σ^l
/// and every t in t_grid, with Ψ the closed-form hyperbolic flow.
VerificationReport koopman_eigencheck(const SurfaceSpec& spec, const MultiPoly& psi, double lambda,
                                      std::size_t n_traj, std::span<const double> t_grid, double tol, Rng& rng);

/// Least-squares Koopman matrix on span{ψ_j} for one time t: row i holds the
/// coefficients of ψ_i ∘ Ψ^t in that basis.
struct KoopmanFit {
  double t;
  std::vector<std::vector<double>> coefficients;
  /// max over samples and rows of |ψ_i(Ψ^t x) − Σ_j c_ij ψ_j(x)| / (1 + |ψ_i(Ψ^t x)|).
  double residual;
};

struct KoopmanFits {
  std::vector<KoopmanFit> fits;
  double gram_condition;
  std::size_t samples;
};

inline constexpr double kGramConditionLimit = 1e8;

/// Normal-equation fits over max(50, 10 k²) random points of Σ^l. Throws
/// std::invalid_argument when the Gram matrix of the basis functions on the
/// samples has condition number above kGramConditionLimit.
KoopmanFits fit_koopman_matrices(const SurfaceSpec& spec, std::span<const MultiPoly> basis_fns,
                                 std::span<const double> t_grid, Rng& rng);

/// Passes when every fit residual is ≤ tol.
VerificationReport invariant_subspace_check(const SurfaceSpec& spec, std::span<const MultiPoly> basis_fns,
                                            std::span<const double> t_grid, double tol, Rng& rng);

/// The ambient field (y, x, 0) of the hyperbolic system at p.
std::array<double, 3> hyperbolic_field(std::span<const double> p);

struct ChartPreimage {
  StateVector point;
  std::size_t arc;
  double s;
};

/// The unique ξ ∈ Σ^l with (q, p)(ξ) = w, found by bisection along the
/// section y = w₀. nullopt when w₁ is outside the section's p-range. Throws
/// NumericalFailure if bisection exceeds its iteration cap, and
/// UnsupportedConfiguration unless q = y.
std::optional<ChartPreimage> chart_preimage(const SurfaceSpec& spec, const TamingPair& tp, std::array<double, 2> w);

/// Pushforward of the ambient field through the (q, p) chart at w:
/// (dq(F(ξ)), dp(F(ξ))) for the preimage ξ of w.
std::optional<std::array<double, 2>> conjugate_field(const SurfaceSpec& spec, const TamingPair& tp,
                                                     std::array<double, 2> w);

/// A snake turn count, possibly infinite.
class TurnCount {
 public:
  static TurnCount finite(int turns);
  static TurnCount infinite() { return TurnCount(); }
  bool is_infinite() const { return !turns_.has_value(); }
  int value() const { return *turns_; }

 private:
  TurnCount() = default;
  std::optional<int> turns_;
};

/// Smallest degree a polynomial p(x, z) needs to tame a snake with `turns`
/// turns: p_x(0, z) changes sign once per turn, so its z-degree, at most
/// deg p − 1, must reach `turns`.
int min_degree(int turns);

struct ObstructionResult {
  bool holds;
  /// nullopt for infinitely many turns.
  std::optional<int> min_degree;
  std::string explanation;
};

/// The root-count condition deg p ≥ turns + 1. Never holds for infinitely
/// many turns.
ObstructionResult obstruction_check(TurnCount turns, int degree);

VerificationReport obstruction_report(TurnCount turns, int degree);

/// ‖exp(A^(m) t) Δ^m(x) − Δ^m(exp(At) x)‖∞ ≤ tol (1 + ‖Δ^m(x)‖∞) for random
/// t ∈ [−2, 2] and ‖x‖ ≤ 3.
VerificationReport verify_equivariance(const SquareMatrix& a, int m, std::size_t n_samples, Rng& rng,
                                       double tol = 1e-8);

/// Random points of Σ^l flowed for t ∈ [−2, 2] stay members at tolerance
/// member_tol (1 + ‖p‖²), and x² − y² changes by at most
/// conservation_tol (1 + x² + y²).
VerificationReport verify_invariance(const SurfaceSpec& spec, std::size_t n_samples, Rng& rng,
                                     double member_tol = 1e-6, double conservation_tol = 1e-10);

/// Whether M exceeds the bound max_R |x Π′(z)| over the given box.
VerificationReport verify_m_bound(int l, double M, const Box2& box);

}  // namespace klab
