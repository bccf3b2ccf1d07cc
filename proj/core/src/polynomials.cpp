#include "klab/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace klab {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    degree_ += e;
  }
}

MultiIndex MultiIndex::unit(std::size_t nvars, std::size_t var) {
  if (var >= nvars) throw std::out_of_range("MultiIndex::unit: variable index out of range");
  std::vector<int> e(nvars, 0);
  e[var] = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.size() != size()) throw std::invalid_argument("MultiIndex: length mismatch");
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::lowered(std::size_t var) const {
  if (var >= size() || exps_[var] == 0) throw std::invalid_argument("MultiIndex::lowered: exponent is zero");
  std::vector<int> e(exps_);
  --e[var];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::raised(std::size_t var) const {
  if (var >= size()) throw std::out_of_range("MultiIndex::raised: variable index out of range");
  std::vector<int> e(exps_);
  ++e[var];
  return MultiIndex(std::move(e));
}

double MultiIndex::monomial(std::span<const double> point) const {
  double value = 1.0;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    for (int k = 0; k < exps_[i]; ++k) value *= point[i];
  }
  return value;
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return std::lexicographical_compare(b.exponents().begin(), b.exponents().end(), a.exponents().begin(),
                                      a.exponents().end());
}

MultiPoly::MultiPoly(std::size_t nvars) : nvars_(nvars) {
  if (nvars == 0) throw std::invalid_argument("MultiPoly: needs at least one variable");
}

MultiPoly MultiPoly::constant(std::size_t nvars, double value) {
  MultiPoly p(nvars);
  p.add_term(MultiIndex::zero(nvars), value);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t var) {
  MultiPoly p(nvars);
  p.add_term(MultiIndex::unit(nvars, var), 1.0);
  return p;
}

MultiPoly MultiPoly::monomial(const MultiIndex& index, double coef) {
  MultiPoly p(index.size());
  p.add_term(index, coef);
  return p;
}

int MultiPoly::degree() const {
  // Graded order: the last key has the largest total degree.
  return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
}

int MultiPoly::degree_in(std::size_t var) const {
  if (var >= nvars_) throw std::out_of_range("MultiPoly::degree_in: variable index out of range");
  int best = -1;
  for (const auto& [idx, c] : terms_) best = std::max(best, idx[var]);
  return best;
}

double MultiPoly::coefficient(const MultiIndex& index) const {
  auto it = terms_.find(index);
  return it == terms_.end() ? 0.0 : it->second;
}

void MultiPoly::add_term(const MultiIndex& index, double coef) {
  if (index.size() != nvars_) throw std::invalid_argument("MultiPoly::add_term: multi-index length mismatch");
  if (!std::isfinite(coef)) throw std::invalid_argument("MultiPoly::add_term: non-finite coefficient");
  if (coef == 0.0) return;
  auto [it, inserted] = terms_.emplace(index, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double MultiPoly::operator()(std::span<const double> point) const {
  if (point.size() != nvars_) {
    throw std::invalid_argument("MultiPoly: point has " + std::to_string(point.size()) + " coordinates, expected " +
                                std::to_string(nvars_));
  }
  double sum = 0.0;
  for (const auto& [idx, c] : terms_) sum += c * idx.monomial(point);
  return sum;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.nvars_ != nvars_) throw std::invalid_argument("MultiPoly: variable count mismatch");
  for (const auto& [idx, c] : other.terms_) add_term(idx, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  if (other.nvars_ != nvars_) throw std::invalid_argument("MultiPoly: variable count mismatch");
  for (const auto& [idx, c] : other.terms_) add_term(idx, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(double factor) {
  if (!std::isfinite(factor)) throw std::invalid_argument("MultiPoly: non-finite scale factor");
  if (factor == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, c] : terms_) c *= factor;
  return *this;
}

MultiPoly operator*(const MultiPoly& lhs, const MultiPoly& rhs) {
  if (lhs.nvars_ != rhs.nvars_) throw std::invalid_argument("MultiPoly: variable count mismatch");
  MultiPoly out(lhs.nvars_);
  for (const auto& [ia, ca] : lhs.terms_) {
    for (const auto& [ib, cb] : rhs.terms_) out.add_term(ia + ib, ca * cb);
  }
  return out;
}

MultiPoly MultiPoly::pow(unsigned exponent) const {
  MultiPoly result = constant(nvars_, 1.0);
  for (unsigned i = 0; i < exponent; ++i) result = result * *this;
  return result;
}

bool MultiPoly::operator==(const MultiPoly& other) const {
  if (nvars_ != other.nvars_ || terms_.size() != other.terms_.size()) return false;
  return std::equal(terms_.begin(), terms_.end(), other.terms_.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first && a.second == b.second; });
}

MultiPoly partial(const MultiPoly& p, std::size_t var) {
  if (var >= p.nvars()) throw std::out_of_range("partial: variable index out of range");
  MultiPoly out(p.nvars());
  for (const auto& [idx, c] : p.terms()) {
    if (idx[var] == 0) continue;
    out.add_term(idx.lowered(var), c * idx[var]);
  }
  return out;
}

MultiPoly substitute(const MultiPoly& p, std::size_t var, double value) {
  if (var >= p.nvars()) throw std::out_of_range("substitute: variable index out of range");
  MultiPoly out(p.nvars());
  for (const auto& [idx, c] : p.terms()) {
    std::vector<int> e = idx.exponents();
    const double factor = std::pow(value, e[var]);
    e[var] = 0;
    out.add_term(MultiIndex(std::move(e)), c * factor);
  }
  return out;
}

std::optional<std::size_t> sole_variable(const MultiPoly& p) {
  std::optional<std::size_t> found;
  for (const auto& [idx, c] : p.terms()) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] == 0) continue;
      if (found && *found != i) throw std::invalid_argument("polynomial is not univariate");
      found = i;
    }
  }
  return found;
}

UniPoly to_univariate(const MultiPoly& p, std::size_t var) {
  if (var >= p.nvars()) throw std::out_of_range("to_univariate: variable index out of range");
  std::vector<double> coeffs(static_cast<std::size_t>(std::max(p.degree_in(var), 0)) + 1, 0.0);
  for (const auto& [idx, c] : p.terms()) {
    if (idx.degree() != idx[var]) throw std::invalid_argument("to_univariate: polynomial depends on other variables");
    coeffs[static_cast<std::size_t>(idx[var])] += c;
  }
  return UniPoly(std::move(coeffs));
}

MultiPoly taming_q() { return MultiPoly::variable(3, coord::y); }

MultiPoly turn_product(int l) {
  if (l < 2) throw std::invalid_argument("turn_product: l must be at least 2");
  const MultiPoly z = MultiPoly::variable(3, coord::z);
  MultiPoly out = MultiPoly::constant(3, 1.0);
  for (int j = 1; j <= l - 1; ++j) out = out * (z - MultiPoly::constant(3, (2.0 * j - 1.0) / 2.0));
  return out;
}

MultiPoly taming_p(int l, double M) {
  if (l < 2) throw std::invalid_argument("taming_p: l must be at least 2");
  if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("taming_p: M must be a positive finite number");
  const MultiPoly x = MultiPoly::variable(3, coord::x);
  const MultiPoly y = MultiPoly::variable(3, coord::y);
  const MultiPoly z = MultiPoly::variable(3, coord::z);
  const MultiPoly lift = (MultiPoly::constant(3, 1.0) + y * y).pow(static_cast<unsigned>(l - 1));
  return lift * z * M + x * turn_product(l);
}

MultiPoly example2_p() {
  const MultiPoly x = MultiPoly::variable(3, coord::x);
  const MultiPoly y = MultiPoly::variable(3, coord::y);
  const MultiPoly z = MultiPoly::variable(3, coord::z);
  const MultiPoly one = MultiPoly::constant(3, 1.0);
  return (z - one * 0.5) * (x + one + y * y);
}

void Box2::validate() const {
  for (double v : {x_lo, x_hi, z_lo, z_hi}) {
    if (!std::isfinite(v)) throw std::invalid_argument("Box2: non-finite bound");
  }
  if (!(x_lo < x_hi) || !(z_lo < z_hi)) throw std::invalid_argument("Box2: requires x_lo < x_hi and z_lo < z_hi");
}

double compute_M(int l, const Box2& box, double margin) {
  box.validate();
  if (std::max(std::abs(box.x_lo), std::abs(box.x_hi)) > 1.0) {
    throw std::invalid_argument("compute_M: the box must satisfy |x| <= 1");
  }
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw std::invalid_argument("compute_M: margin must be >= 0");

  const UniPoly slope = to_univariate(turn_product(l), coord::z).derivative();
  const UniPoly curvature = slope.derivative();

  double best = std::max(std::abs(slope(box.z_lo)), std::abs(slope(box.z_hi)));
  for (const auto& [a, b] : isolate_roots(curvature, box.z_lo, box.z_hi)) {
    best = std::max(best, std::abs(slope(bisect_root(curvature, a, b))));
  }
  const double x_extent = std::max(std::abs(box.x_lo), std::abs(box.x_hi));
  return (1.0 + margin) * x_extent * best;
}

int count_sign_changes(const MultiPoly& p, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("count_sign_changes: requires lo < hi");
  const auto var = sole_variable(p);
  if (!var) return 0;
  const UniPoly u = to_univariate(p, *var);
  int changes = 0;
  for (const auto& [a, b] : isolate_roots(u, lo, hi)) {
    if ((u(a) > 0.0) != (u(b) > 0.0)) ++changes;
  }
  return changes;
}

}  // namespace klab
