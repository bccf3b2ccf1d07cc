#include "klab/linflow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace klab {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

SquareMatrix::SquareMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("SquareMatrix: dimension must be at least 1");
}

SquareMatrix::SquareMatrix(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), entries_(std::move(row_major)) {
  if (dim == 0) throw std::invalid_argument("SquareMatrix: dimension must be at least 1");
  if (entries_.size() != dim * dim) throw std::invalid_argument("SquareMatrix: expected dim*dim entries");
  require_finite(entries_, "SquareMatrix");
}

SquareMatrix SquareMatrix::identity(std::size_t dim) {
  SquareMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) out(i, i) = 1.0;
  return out;
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t dim = rows.size();
  std::vector<double> flat;
  flat.reserve(dim * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw std::invalid_argument("SquareMatrix: rows must form a square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return SquareMatrix(dim, std::move(flat));
}

std::vector<std::vector<double>> SquareMatrix::rows() const {
  std::vector<std::vector<double>> out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    out[r].assign(entries_.begin() + static_cast<std::ptrdiff_t>(r * dim_),
                  entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim_));
  }
  return out;
}

double SquareMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) sum += std::abs((*this)(r, c));
    best = std::max(best, sum);
  }
  return best;
}

bool SquareMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](double v) { return std::isfinite(v); });
}

StateVector SquareMatrix::apply(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("SquareMatrix::apply: dimension mismatch");
  StateVector out(dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) sum += (*this)(r, c) * x[c];
    out[r] = sum;
  }
  return out;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("SquareMatrix: dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("SquareMatrix: dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

SquareMatrix& SquareMatrix::operator*=(double factor) {
  for (double& v : entries_) v *= factor;
  return *this;
}

SquareMatrix operator*(const SquareMatrix& lhs, const SquareMatrix& rhs) {
  if (lhs.dim_ != rhs.dim_) throw std::invalid_argument("SquareMatrix: dimension mismatch");
  const std::size_t n = lhs.dim_;
  SquareMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

SquareMatrix hyperbolic_generator(std::size_t extra_dims) {
  SquareMatrix a(3 + extra_dims);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  for (std::size_t i = 3; i < 3 + extra_dims; ++i) a(i, i) = 1.0;
  return a;
}

SquareMatrix matrix_exp(const SquareMatrix& a, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("matrix_exp: t must be finite");
  SquareMatrix scaled = a * t;
  const double norm = scaled.norm_inf();
  if (norm > kMatrixExpMaxNorm) {
    throw std::range_error("matrix_exp: |At| = " + std::to_string(norm) + " exceeds supported range " +
                           std::to_string(kMatrixExpMaxNorm));
  }

  int squarings = 0;
  double reduced = norm;
  while (reduced > 0.5) {
    reduced *= 0.5;
    ++squarings;
  }
  scaled *= std::ldexp(1.0, -squarings);

  const std::size_t n = a.dim();
  SquareMatrix result = SquareMatrix::identity(n);
  SquareMatrix term = SquareMatrix::identity(n);
  // ‖X‖ ≤ 1/2, so the k-th term is bounded by 2^-k / k!; 30 terms is far past round-off.
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled;
    term *= 1.0 / k;
    result += term;
    if (term.norm_inf() <= 1e-18 * result.norm_inf()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;

  if (!result.all_finite()) throw std::range_error("matrix_exp: result overflowed");
  return result;
}

StateVector flow_point(const SquareMatrix& a, double t, std::span<const double> x) {
  if (x.size() != a.dim()) throw std::invalid_argument("flow_point: dimension mismatch");
  return matrix_exp(a, t).apply(x);
}

StateVector closed_form_flow3(double t, std::span<const double> p) {
  if (p.size() != 3) throw std::invalid_argument("closed_form_flow3: expected a point of R^3");
  const double ch = std::cosh(t);
  const double sh = std::sinh(t);
  return {p[0] * ch + p[1] * sh, p[0] * sh + p[1] * ch, p[2]};
}

double conserved_quantity(std::span<const double> p) {
  if (p.size() != 3) throw std::invalid_argument("conserved_quantity: expected a point of R^3");
  return p[0] * p[0] - p[1] * p[1];
}

double norm_inf(std::span<const double> v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

double norm2(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace klab
