#include "klab/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace klab {

namespace {

double max_abs(const std::vector<double>& c) {
  double best = 0.0;
  for (double v : c) best = std::max(best, std::abs(v));
  return best;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Moves a point off an exact root, toward `inward`, so Sturm counts stay
// well defined. Roots sitting exactly on an interval end are excluded.
double clear_of_roots(const UniPoly& p, double x, double inward) {
  const double step = (inward - x) * 1e-9;
  for (int k = 1; p(x) == 0.0 && k < 64; ++k) x += step * k;
  return x;
}

}  // namespace

UniPoly::UniPoly(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("UniPoly: non-finite coefficient");
  }
  trim();
}

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double UniPoly::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return UniPoly();
  std::vector<double> out(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = static_cast<double>(i) * coeffs_[i];
  return UniPoly(std::move(out));
}

UniPoly remainder(const UniPoly& numerator, const UniPoly& divisor, double rel_drop) {
  if (divisor.is_zero()) throw std::invalid_argument("remainder: division by the zero polynomial");
  std::vector<double> rem = numerator.coefficients();
  const auto& d = divisor.coefficients();
  const double scale = std::max(max_abs(rem), 1e-300);
  const int dd = divisor.degree();
  for (int k = static_cast<int>(rem.size()) - 1; k >= dd; --k) {
    const double factor = rem[static_cast<std::size_t>(k)] / d.back();
    for (int i = 0; i <= dd; ++i) rem[static_cast<std::size_t>(k - dd + i)] -= factor * d[static_cast<std::size_t>(i)];
    rem[static_cast<std::size_t>(k)] = 0.0;
  }
  for (double& c : rem) {
    if (std::abs(c) <= rel_drop * scale) c = 0.0;
  }
  return UniPoly(std::move(rem));
}

std::vector<UniPoly> sturm_chain(const UniPoly& p) {
  std::vector<UniPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(p);
  UniPoly dp = p.derivative();
  if (dp.is_zero()) return chain;
  chain.push_back(dp);
  while (chain.back().degree() > 0) {
    UniPoly r = remainder(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    std::vector<double> neg = r.coefficients();
    // Normalizing keeps the chain's magnitudes comparable; signs are what matter.
    const double scale = max_abs(neg);
    for (double& c : neg) c = -c / scale;
    chain.emplace_back(std::move(neg));
  }
  return chain;
}

int sign_variations(const std::vector<UniPoly>& chain, double x) {
  int count = 0;
  int last = 0;
  for (const auto& q : chain) {
    const int s = sign_of(q(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

std::vector<std::pair<double, double>> isolate_roots(const UniPoly& p, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  if (p.degree() < 1 || !(lo < hi)) return out;
  const auto chain = sturm_chain(p);
  const double width_floor = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
  const double mid0 = 0.5 * (lo + hi);
  lo = clear_of_roots(p, lo, mid0);
  hi = clear_of_roots(p, hi, mid0);

  struct Pending {
    double a, b;
    int va, vb;
  };
  std::vector<Pending> stack{{lo, hi, sign_variations(chain, lo), sign_variations(chain, hi)}};
  while (!stack.empty()) {
    const Pending cur = stack.back();
    stack.pop_back();
    const int count = cur.va - cur.vb;
    if (count <= 0) continue;
    if (count == 1 || cur.b - cur.a < width_floor) {
      out.emplace_back(cur.a, cur.b);
      continue;
    }
    const double mid = clear_of_roots(p, 0.5 * (cur.a + cur.b), cur.b);
    const int vm = sign_variations(chain, mid);
    // Right half pushed first so intervals come out ascending.
    stack.push_back({mid, cur.b, vm, cur.vb});
    stack.push_back({cur.a, mid, cur.va, vm});
  }
  return out;
}

double bisect_root(const UniPoly& p, double a, double b) {
  double fa = p(a);
  if (fa == 0.0) return a;
  if (p(b) == 0.0) return b;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> real_roots(const UniPoly& p, double lo, double hi) {
  std::vector<double> roots;
  for (const auto& [a, b] : isolate_roots(p, lo, hi)) {
    if (sign_of(p(a)) != sign_of(p(b))) {
      roots.push_back(bisect_root(p, a, b));
    } else {
      // Even-multiplicity root: locate the extremum of |p| by refining the
      // derivative's sign change inside the isolating interval.
      const UniPoly dp = p.derivative();
      roots.push_back(sign_of(dp(a)) != sign_of(dp(b)) ? bisect_root(dp, a, b) : 0.5 * (a + b));
    }
  }
  return roots;
}

}  // namespace klab
