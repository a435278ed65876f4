#pragma once

// Model Riemannian manifolds with closed-form geodesics.
//
// Coordinates are stored as flat real vectors:
//   sphere:n     unit vector in R^(n+1)
//   torus:n      vector in [0,1)^n
//   euclidean:n  vector in R^n
//   matspace:n / glplus:n   n x n matrix, row-major
//   upq:p,q      (p+q) x (p+q) complex matrix, row-major, entries as (re, im)

#include <string>
#include <string_view>

#include "cutloci/matfun.hpp"

namespace cutloci {

enum class ManifoldKind { euclidean, sphere, flat_torus, matrix_space, glplus_left_inv, upq };

struct ManifoldId {
  ManifoldKind kind = ManifoldKind::euclidean;
  int n = 1;  // dimension parameter; for upq, p + q
  int p = 0;
  int q = 0;

  static ManifoldId euclidean(int n);
  static ManifoldId sphere(int n);
  static ManifoldId flat_torus(int n);
  static ManifoldId matrix_space(int n);
  static ManifoldId glplus(int n);
  static ManifoldId upq(int p, int q);

  /// Parses "euclidean:n", "sphere:n", "torus:n", "matspace:n", "glplus:n", "upq:p,q".
  static ManifoldId parse(std::string_view text);
  std::string to_string() const;

  /// Length of the flat coordinate vector.
  int coord_size() const;
  /// Side length of the matrix for matrix kinds, 0 otherwise.
  int matrix_size() const;
  bool is_matrix_kind() const;

  friend bool operator==(const ManifoldId&, const ManifoldId&) = default;
};

struct ManifoldPoint {
  ManifoldId manifold;
  Vec coords;

  Mat matrix() const;
  CMat complex_matrix() const;

  static ManifoldPoint from_matrix(const ManifoldId& m, const Mat& a);
  static ManifoldPoint from_complex_matrix(const ManifoldId& m, const CMat& a);
};

struct TangentVector {
  ManifoldPoint base;
  Vec vec;

  Mat matrix() const;
  CMat complex_matrix() const;

  static TangentVector from_matrix(const ManifoldPoint& base, const Mat& a);
  static TangentVector from_complex_matrix(const ManifoldPoint& base, const CMat& a);
};

Vec flatten(const Mat& a);
Vec flatten(const CMat& a);
Mat unflatten(const Vec& v, int rows, int cols);
CMat unflatten_complex(const Vec& v, int rows, int cols);

/// I_{p,q} = diag(I_p, -I_q).
Mat signature_matrix(int p, int q);

/// Largest violation of the point invariants (unit norm, torus range, det > 0,
/// U(p,q) membership); 0 for a perfectly valid point.
double point_defect(const ManifoldPoint& p);
/// Throws InvalidPoint if the coordinate length or the invariants are off.
void validate_point(const ManifoldPoint& p);

/// Geodesic t -> exp_p(t v). GL+ and U(p,q) accept only the closed-form
/// families through the maximal compact subgroup.
ManifoldPoint exp_map(const TangentVector& v, double t);

double riem_distance(const ManifoldPoint& a, const ManifoldPoint& b);

/// Riemannian inner product of two tangent vectors at the same base.
double inner(const TangentVector& u, const TangentVector& v);
double norm(const TangentVector& v);

/// Diameter of the ambient, +inf when unbounded.
double diameter(const ManifoldId& m);

}  // namespace cutloci
