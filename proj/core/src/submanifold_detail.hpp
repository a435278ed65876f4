#pragma once

// Helpers shared by the closed-form and multistart distance oracles.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cutloci/submanifolds.hpp"

namespace cutloci::detail {

using CVec = Eigen::VectorXcd;

/// Interleaved (re, im) coordinates to a complex vector and back.
inline CVec to_complex(const Vec& x) {
  CVec z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = Complex(x(2 * j), x(2 * j + 1));
  return z;
}

inline Vec from_complex(const CVec& z) {
  Vec x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x(2 * j) = z(j).real();
    x(2 * j + 1) = z(j).imag();
  }
  return x;
}

/// Geodesic distance between unit vectors, accurate at 0 and pi.
inline double sphere_angle(const Vec& a, const Vec& b) {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

struct Candidate {
  double distance;
  ManifoldPoint point;
};

/// Keeps the candidates within `tie` of the best one, merges those closer than
/// `cluster` in ambient coordinates, and marks the set saturated once `cap`
/// distinct representatives have been seen.
MinimizerSet collect_minimizers(std::vector<Candidate> candidates, const OracleOptions& options);

/// F(z) = sum z_j^d and the conjugate gradient direction conj(d z^(d-1)).
Complex fermat_value(const CVec& z, int d);
CVec fermat_normal(const CVec& z, int d);

/// Pulls a point of S^(2n+1) onto the Fermat lift by Gauss-Newton on F and a
/// final normalization (F is homogeneous, so normalizing keeps F = 0).
Vec fermat_retract(const Vec& x, int d);

/// Primitive 2d-th roots of unity xi_k = exp(i pi (2k+1)/d), the slopes of the
/// components z_2 = xi_k z_1 of the n = 1 Fermat lift.
Complex fermat_root(int k, int d);

}  // namespace cutloci::detail
