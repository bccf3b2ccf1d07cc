#pragma once

#include <utility>
#include <vector>

namespace klab {

/// Dense univariate polynomial, coefficients in ascending degree.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<double> ascending);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  double operator()(double x) const;
  UniPoly derivative() const;

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// Remainder of numerator / divisor; coefficients below `rel_drop` times the
/// largest input coefficient are treated as cancellation noise and dropped.
UniPoly remainder(const UniPoly& numerator, const UniPoly& divisor, double rel_drop = 1e-12);

/// Sturm chain p, p′, −rem(p, p′), … (stops at the last non-zero remainder).
std::vector<UniPoly> sturm_chain(const UniPoly& p);

/// Sign variations of the chain evaluated at x (zeros skipped).
int sign_variations(const std::vector<UniPoly>& chain, double x);

/// Disjoint intervals (a, b], each containing exactly one distinct real root
/// of p, covering all roots in (lo, hi). Interval endpoints are never roots.
std::vector<std::pair<double, double>> isolate_roots(const UniPoly& p, double lo, double hi);

/// Refines a sign-changing bracket by bisection until it cannot shrink further.
double bisect_root(const UniPoly& p, double a, double b);

/// Distinct real roots of p in the open interval (lo, hi), ascending.
std::vector<double> real_roots(const UniPoly& p, double lo, double hi);

}  // namespace klab
