#pragma once

// Deterministic random streams. Every independent work item (a sample, a
// multistart run, a property-test instance) gets its own generator derived
// from (seed, index), so results do not depend on scheduling or thread count.

#include <cstdint>
#include <random>

#include "cutloci/matfun.hpp"

namespace cutloci {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent stream for work item `index` under `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed) ^ index);
  }

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  int integer(int lo, int hi_inclusive) {
    return std::uniform_int_distribution<int>(lo, hi_inclusive)(engine_);
  }

  Vec gaussian(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Mat gaussian(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

  CMat complex_gaussian(Eigen::Index rows, Eigen::Index cols) {
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double re = normal();
        m(i, j) = Complex(re, normal());
      }
    return m;
  }

  /// Uniform point on the unit sphere in R^n.
  Vec unit_vector(Eigen::Index n) {
    for (;;) {
      Vec v = gaussian(n);
      const double norm = v.norm();
      if (norm > 1e-12) return v / norm;
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the sign of
/// diag(R) folded into Q).
Mat random_orthogonal(Rng& rng, int n);
/// Haar-distributed unitary matrix.
CMat random_unitary(Rng& rng, int n);

}  // namespace cutloci
