#pragma once

#include <cstdint>
#include <random>

namespace klab {

/// Seeded sampler used by every randomized suite.
///
/// Doubles are built directly from the raw 64-bit engine output instead of
/// std::uniform_real_distribution, whose algorithm is implementation defined;
/// this keeps sampled suites reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace klab
