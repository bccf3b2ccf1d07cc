#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace klab {

/// Point of a phase space, in ambient coordinates.
using StateVector = std::vector<double>;

/// Dense real n×n matrix generating a linear flow, stored row-major.
class SquareMatrix {
 public:
  /// Zero matrix of the given dimension (dim ≥ 1).
  explicit SquareMatrix(std::size_t dim);
  /// Row-major entries; rejects size mismatch and non-finite values.
  SquareMatrix(std::size_t dim, std::vector<double> row_major);

  static SquareMatrix identity(std::size_t dim);
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  double& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  std::span<const double> data() const { return entries_; }
  std::vector<std::vector<double>> rows() const;

  /// Maximum absolute row sum.
  double norm_inf() const;
  bool all_finite() const;

  StateVector apply(std::span<const double> x) const;

  SquareMatrix& operator+=(const SquareMatrix& other);
  SquareMatrix& operator-=(const SquareMatrix& other);
  SquareMatrix& operator*=(double factor);

  friend SquareMatrix operator+(SquareMatrix lhs, const SquareMatrix& rhs) { return lhs += rhs; }
  friend SquareMatrix operator-(SquareMatrix lhs, const SquareMatrix& rhs) { return lhs -= rhs; }
  friend SquareMatrix operator*(SquareMatrix lhs, double factor) { return lhs *= factor; }
  friend SquareMatrix operator*(double factor, SquareMatrix rhs) { return rhs *= factor; }
  friend SquareMatrix operator*(const SquareMatrix& lhs, const SquareMatrix& rhs);

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

/// The generator of ẋ = y, ẏ = x, ż = 0, extended by ẇ = w on
/// `extra_dims` additional coordinates.
SquareMatrix hyperbolic_generator(std::size_t extra_dims);

/// Norm bound ‖At‖∞ below which matrix_exp is accurate to 1e-12 relative.
inline constexpr double kMatrixExpAccurateNorm = 50.0;
/// Norm bound ‖At‖∞ above which matrix_exp refuses (std::range_error);
/// e^700 is close to the largest finite double.
inline constexpr double kMatrixExpMaxNorm = 700.0;

/// exp(A t) by scaling and squaring: the argument is halved until its
/// ∞-norm is at most 1/2, summed as a Taylor series to full double
/// precision (at most 30 terms), then squared back.
///
/// Throws std::invalid_argument for non-finite t and std::range_error
/// when ‖At‖∞ exceeds kMatrixExpMaxNorm or the result overflows.
SquareMatrix matrix_exp(const SquareMatrix& a, double t);

/// exp(A t) x. Throws std::invalid_argument on dimension mismatch.
StateVector flow_point(const SquareMatrix& a, double t, std::span<const double> x);

/// Closed-form flow of the 3×3 hyperbolic system:
/// (x cosh t + y sinh t, x sinh t + y cosh t, z).
StateVector closed_form_flow3(double t, std::span<const double> p);

/// x² − y², constant along orbits of the hyperbolic system.
double conserved_quantity(std::span<const double> p);

double norm_inf(std::span<const double> v);
double norm2(std::span<const double> v);

}  // namespace klab
