#include "klab/symspace.hpp"

#include <limits>
#include <stdexcept>

namespace klab {

std::size_t basis_dim(std::size_t n, int m) {
  if (n == 0 || m < 1) throw std::invalid_argument("basis_dim: requires n >= 1 and m >= 1");
  // C(n+m, m) built as a running product; each partial product is itself a
  // binomial coefficient, so the division is exact.
  std::size_t result = 1;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(m); ++k) {
    const std::size_t factor = n + k;
    if (result > std::numeric_limits<std::size_t>::max() / factor) {
      throw std::overflow_error("basis_dim: dimension does not fit in size_t");
    }
    result = result * factor / k;
  }
  return result;
}

namespace {

// All exponent vectors of length n and total degree exactly d, descending lex.
void enumerate_degree(std::size_t n, int d, std::vector<int>& current, std::size_t pos,
                      std::vector<MultiIndex>& out) {
  if (pos + 1 == n) {
    current[pos] = d;
    out.emplace_back(current);
    return;
  }
  for (int e = d; e >= 0; --e) {
    current[pos] = e;
    enumerate_degree(n, d - e, current, pos + 1, out);
  }
}

void require_same_basis(const BasisRef& a, const BasisRef& b) {
  if (!a || !b || !(*a == *b)) throw std::invalid_argument("pairing: covector and element use different bases");
}

}  // namespace

PolySpaceBasis::PolySpaceBasis(std::size_t n, int m) : n_(n), m_(m) {
  indices_.reserve(basis_dim(n, m));
  std::vector<int> current(n, 0);
  for (int d = 0; d <= m; ++d) enumerate_degree(n, d, current, 0, indices_);
  for (std::size_t i = 0; i < indices_.size(); ++i) lookup_.emplace(indices_[i], i);
}

std::optional<std::size_t> PolySpaceBasis::position(const MultiIndex& index) const {
  auto it = lookup_.find(index);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

PolySpaceElement delta_embed(const BasisRef& basis, std::span<const double> v) {
  if (!basis) throw std::invalid_argument("delta_embed: null basis");
  if (v.size() != basis->n()) throw std::invalid_argument("delta_embed: dimension mismatch");
  PolySpaceElement out{basis, std::vector<double>(basis->dim(), 0.0)};
  const auto& idx = basis->indices();
  for (std::size_t i = 1; i < idx.size(); ++i) out.coords[i] = idx[i].monomial(v);
  return out;
}

std::vector<std::vector<double>> delta_jacobian(const PolySpaceBasis& basis, std::span<const double> v) {
  if (v.size() != basis.n()) throw std::invalid_argument("delta_jacobian: dimension mismatch");
  const auto& idx = basis.indices();
  std::vector<std::vector<double>> jac(idx.size(), std::vector<double>(basis.n(), 0.0));
  for (std::size_t row = 1; row < idx.size(); ++row) {
    for (std::size_t k = 0; k < basis.n(); ++k) {
      if (idx[row][k] == 0) continue;
      jac[row][k] = idx[row][k] * idx[row].lowered(k).monomial(v);
    }
  }
  return jac;
}

double pairing(const Covector& eta, const PolySpaceElement& w) {
  require_same_basis(eta.basis, w.basis);
  double sum = 0.0;
  for (std::size_t i = 0; i < eta.coords.size(); ++i) sum += eta.coords[i] * w.coords[i];
  return sum;
}

Covector functional_from_polynomial(const MultiPoly& p, const BasisRef& basis) {
  if (!basis) throw std::invalid_argument("functional_from_polynomial: null basis");
  if (p.nvars() != basis->n()) throw std::invalid_argument("functional_from_polynomial: variable count mismatch");
  if (p.degree() > basis->m()) {
    throw std::invalid_argument("functional_from_polynomial: polynomial degree exceeds the basis degree");
  }
  Covector out{basis, std::vector<double>(basis->dim(), 0.0)};
  for (const auto& [idx, c] : p.terms()) out.coords[*basis->position(idx)] = c;
  return out;
}

SquareMatrix lift_generator(const SquareMatrix& a, int m) {
  const PolySpaceBasis basis(a.dim(), m);
  const std::size_t n = a.dim();
  SquareMatrix lifted(basis.dim());
  const auto& idx = basis.indices();
  for (std::size_t row = 1; row < idx.size(); ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      const int alpha_i = idx[row][i];
      if (alpha_i == 0) continue;
      const MultiIndex base = idx[row].lowered(i);
      for (std::size_t k = 0; k < n; ++k) {
        if (a(i, k) == 0.0) continue;
        lifted(row, *basis.position(base.raised(k))) += alpha_i * a(i, k);
      }
    }
  }
  return lifted;
}

SquareMatrix lifted_flow(const SquareMatrix& a, int m, double t) { return matrix_exp(lift_generator(a, m), t); }

}  // namespace klab
