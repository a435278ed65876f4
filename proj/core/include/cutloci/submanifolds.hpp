#pragma once

// Submanifold descriptors with distance oracles d(N, .) and enumerators of the
// distance minimizers Eq(q, N).

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cutloci/manifolds.hpp"
#include "cutloci/random.hpp"

namespace cutloci {

/// Two minimizers tie when their distances differ by less than this.
inline constexpr double kTieTol = 1e-7;
/// Minimizers closer than this (ambient coordinates) are merged.
inline constexpr double kClusterTol = 1e-4;
/// Continua of minimizers are represented by at most this many members.
inline constexpr int kSaturationCap = 32;
/// Largest membership defect accepted for a point "on N".
inline constexpr double kMembershipTol = 1e-8;

/// Finite set of points, given in ambient coordinates.
struct FinitePoints {
  std::vector<Vec> points;
};
/// First k+1 coordinates of S^n: the great k-sphere {x_{k+1} = ... = x_n = 0}.
struct EquatorSphere {
  int k = 0;
};
/// (x/a)^2 + (y/b)^2 = 1 in R^2, a > b > 0.
struct Ellipse {
  double a = 2.0;
  double b = 1.0;
};
/// O(n) inside M(n, R) with the Frobenius metric.
struct OrthogonalGroup {};
/// SO(n) inside GL+(n, R) with the left-invariant metric.
struct SpecialOrthogonal {};
/// U(p) x U(q) inside U(p, q).
struct UpUqSubgroup {};
/// The two circles {x3 = x4 = 0} and {x1 = x2 = 0} in S^3.
struct HopfLink {};
/// Unit-sphere preimage of the Fermat hypersurface z_0^d + ... + z_n^d = 0 in
/// S^(2n+1) subset C^(n+1); coordinates interleave (re, im).
struct FermatLift {
  int d = 2;
};

using SubmanifoldKind = std::variant<FinitePoints, EquatorSphere, Ellipse, OrthogonalGroup,
                                     SpecialOrthogonal, UpUqSubgroup, HopfLink, FermatLift>;

struct Submanifold {
  ManifoldId ambient;
  SubmanifoldKind kind;

  /// Validates the (ambient, kind) pair; throws UnsupportedAmbient or ParseError.
  Submanifold(ManifoldId ambient, SubmanifoldKind kind);

  /// Parses "points:file.json", "equator:k", "ellipse:a,b", "orthogonal:n",
  /// "specialorthogonal:n", "upuq:p,q", "hopflink", "fermat:d".
  static Submanifold parse(const ManifoldId& ambient, std::string_view text);
  std::string to_string() const;

  /// Complex dimension parameter n of a Fermat lift in S^(2n+1).
  int fermat_n() const;
  /// True when dist_to is a closed form (false means multistart).
  bool closed_form() const;
};

struct MinimizerSet {
  double distance = 0.0;
  std::vector<ManifoldPoint> minimizers;
  /// The minimizers form a continuum and `minimizers` is only a sample.
  bool saturated = false;
  std::string family_tag;

  std::size_t multiplicity() const { return minimizers.size(); }
  bool separating() const { return saturated || minimizers.size() >= 2; }
};

struct OracleOptions {
  double tie = kTieTol;
  double cluster = kClusterTol;
  int cap = kSaturationCap;
  std::uint64_t seed = 0x243f6a8885a308d3ULL;
  /// Multistart start count; 0 picks the per-kind default.
  int starts = 0;
};

/// Distance from q to N together with the minimizer structure.
MinimizerSet dist_to(const Submanifold& n, const ManifoldPoint& q, const OracleOptions& options = {});

/// Numerical distance by projected-gradient multistart over N. Available for
/// every kind except the two matrix-group subgroups with left-invariant
/// metrics.
MinimizerSet multistart_dist(const Submanifold& n, const ManifoldPoint& q,
                             const OracleOptions& options = {});

/// Distance between two ambient points as used for minimizer bookkeeping.
double ambient_distance(const ManifoldPoint& a, const ManifoldPoint& b);

double membership_defect(const Submanifold& n, const ManifoldPoint& p);

/// A random point on N (deterministic given the generator state).
ManifoldPoint sample_point(const Submanifold& n, Rng& rng);

/// `count` unit normal vectors at p, deterministic given seed. Unit length is
/// measured in the ambient metric (left-invariant metric for group kinds).
std::vector<TangentVector> unit_normal_sample(const Submanifold& n, const ManifoldPoint& p,
                                              std::uint64_t seed, int count);

}  // namespace cutloci
