#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "klab/univariate.hpp"

namespace klab {

/// Exponent vector of a monomial.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(std::size_t nvars) { return MultiIndex(std::vector<int>(nvars, 0)); }
  static MultiIndex unit(std::size_t nvars, std::size_t var);

  std::size_t size() const { return exps_.size(); }
  int operator[](std::size_t i) const { return exps_[i]; }
  int degree() const { return degree_; }
  const std::vector<int>& exponents() const { return exps_; }

  MultiIndex operator+(const MultiIndex& other) const;
  /// Lowers exponent `var` by one; requires it to be positive.
  MultiIndex lowered(std::size_t var) const;
  MultiIndex raised(std::size_t var) const;

  double monomial(std::span<const double> point) const;

  bool operator==(const MultiIndex& other) const { return exps_ == other.exps_; }

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

/// Graded-lexicographic order: total degree ascending, then exponent vectors
/// in descending lexicographic order, so for (x, y) the degree-2 block reads
/// x², xy, y².
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// Sparse multivariate polynomial with real coefficients. Zero coefficients
/// are never stored.
class MultiPoly {
 public:
  using TermMap = std::map<MultiIndex, double, GradedLexLess>;

  explicit MultiPoly(std::size_t nvars);

  static MultiPoly constant(std::size_t nvars, double value);
  static MultiPoly variable(std::size_t nvars, std::size_t var);
  static MultiPoly monomial(const MultiIndex& index, double coef);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  /// Highest exponent of one variable; -1 for the zero polynomial.
  int degree_in(std::size_t var) const;
  double coefficient(const MultiIndex& index) const;

  /// Adds `coef` to the coefficient of `index`, dropping the term if it cancels.
  void add_term(const MultiIndex& index, double coef);

  double operator()(std::span<const double> point) const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(double factor);

  friend MultiPoly operator+(MultiPoly lhs, const MultiPoly& rhs) { return lhs += rhs; }
  friend MultiPoly operator-(MultiPoly lhs, const MultiPoly& rhs) { return lhs -= rhs; }
  friend MultiPoly operator*(MultiPoly lhs, double factor) { return lhs *= factor; }
  friend MultiPoly operator*(double factor, MultiPoly rhs) { return rhs *= factor; }
  friend MultiPoly operator*(const MultiPoly& lhs, const MultiPoly& rhs);
  MultiPoly operator-() const { return *this * -1.0; }

  MultiPoly pow(unsigned exponent) const;

  bool operator==(const MultiPoly& other) const;

 private:
  std::size_t nvars_;
  TermMap terms_;
};

/// ∂p/∂x_var. Throws std::out_of_range for a bad variable index.
MultiPoly partial(const MultiPoly& p, std::size_t var);

/// Substitutes x_var = value, keeping the number of variables.
MultiPoly substitute(const MultiPoly& p, std::size_t var, double value);

/// The single variable a polynomial depends on; nullopt for constants.
/// Throws std::invalid_argument when more than one variable appears.
std::optional<std::size_t> sole_variable(const MultiPoly& p);

/// Dense coefficients of p in x_var. Throws std::invalid_argument when any
/// other variable appears.
UniPoly to_univariate(const MultiPoly& p, std::size_t var);

/// Coordinate names for polynomials on R³.
namespace coord {
inline constexpr std::size_t x = 0;
inline constexpr std::size_t y = 1;
inline constexpr std::size_t z = 2;
}  // namespace coord

/// q(x, y, z) = y.
MultiPoly taming_q();

/// Π(z) = (z − 1/2)(z − 3/2)⋯(z − l + 3/2), the l − 1 factors whose roots sit
/// at the turns of the snake. Polynomial in (x, y, z) depending on z only.
MultiPoly turn_product(int l);

/// p(x, y, z) = (1 + y²)^(l−1) M z + x Π(z), expanded. Total degree 2l − 1.
MultiPoly taming_p(int l, double M);

/// The two-equilibrium variant p = (z − 1/2)(x + 1 + y²).
MultiPoly example2_p();

/// Closed axis-aligned rectangle in the (x, z) plane.
struct Box2 {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double z_lo = 0.0;
  double z_hi = 0.0;

  /// Throws std::invalid_argument unless lo < hi on both axes and all finite.
  void validate() const;
};

inline constexpr double kDefaultMMargin = 0.05;

/// (1 + margin) · max over the box of |x Π′(z)|.
///
/// |x Π′(z)| is linear in |x|, so x only needs the box's x-extremes; the
/// z-maximum of |Π′| is taken over the endpoints and the interior roots of
/// Π″ (Sturm-isolated, then bisected). Requires |x| ≤ 1 on the box and
/// margin ≥ 0.
double compute_M(int l, const Box2& box, double margin);

/// Number of sign alternations of a univariate polynomial on the open
/// interval (lo, hi): Sturm isolation of every distinct root, then a sign
/// comparison across each isolating interval. Roots of even multiplicity do
/// not count. Throws std::invalid_argument for multivariate input.
int count_sign_changes(const MultiPoly& p, double lo, double hi);

}  // namespace klab
