#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "klab/linflow.hpp"
#include "klab/polynomials.hpp"

namespace klab {

/// C(n + m, n), the dimension of the space of polynomials of degree ≤ m on an
/// n-dimensional space. Throws std::overflow_error when it does not fit.
std::size_t basis_dim(std::size_t n, int m);

/// Monomial basis of P^m(V*): every multi-index of length n and total degree
/// ≤ m, in graded-lex order, starting with the constant index.
class PolySpaceBasis {
 public:
  PolySpaceBasis(std::size_t n, int m);

  std::size_t n() const { return n_; }
  int m() const { return m_; }
  std::size_t dim() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  std::optional<std::size_t> position(const MultiIndex& index) const;

  bool operator==(const PolySpaceBasis& other) const { return n_ == other.n_ && m_ == other.m_; }

 private:
  std::size_t n_;
  int m_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t, GradedLexLess> lookup_;
};

using BasisRef = std::shared_ptr<const PolySpaceBasis>;

inline BasisRef make_basis(std::size_t n, int m) { return std::make_shared<const PolySpaceBasis>(n, m); }

/// A point of P^m(V*) in monomial coordinates.
struct PolySpaceElement {
  BasisRef basis;
  std::vector<double> coords;
};

/// A linear functional on P^m(V*) in the dual monomial coordinates.
struct Covector {
  BasisRef basis;
  std::vector<double> coords;
};

/// Δ^m(v): coordinate v^α at every |α| ≥ 1 and 0 at the constant index.
PolySpaceElement delta_embed(const BasisRef& basis, std::span<const double> v);

/// Jacobian of v ↦ Δ^m(v), one row per basis index (row α is ∇ v^α).
std::vector<std::vector<double>> delta_jacobian(const PolySpaceBasis& basis, std::span<const double> v);

/// Coordinate dot product. Throws std::invalid_argument on basis mismatch.
double pairing(const Covector& eta, const PolySpaceElement& w);

/// Coefficients of p copied into dual coordinates, so that
/// pairing(result, delta_embed(v)) = p(v) − p(0). The constant coefficient
/// is stored in the constant slot, where Δ^m never sees it.
Covector functional_from_polynomial(const MultiPoly& p, const BasisRef& basis);

/// The generator A^(m) on P^m(V*) with d/dt Δ^m(x(t)) = A^(m) Δ^m(x(t))
/// along every trajectory of ẋ = A x. Row α collects
/// Σ_i α_i A_ik x^(α − e_i + e_k); the constant row is zero and the matrix is
/// block diagonal across degrees.
SquareMatrix lift_generator(const SquareMatrix& a, int m);

/// exp(A^(m) t).
SquareMatrix lifted_flow(const SquareMatrix& a, int m, double t);

}  // namespace klab
