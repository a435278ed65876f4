#pragma once

// Isometric group actions on spheres, orbit-minimized quotient distances, the
// comparison of upstairs and downstairs cut loci, and the cut-locus checks on
// Fermat lifts.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cutloci/cutengine.hpp"
#include "cutloci/report.hpp"

namespace cutloci {

enum class ActionKind { finite, circle };

/// A free isometric action on a sphere. Finite actions list every element as an
/// orthogonal matrix on the ambient coordinates; circle actions act on the
/// complex coordinates of S^(2n+1) by z_j -> e^{i w_j theta} z_j.
struct GroupAction {
  ActionKind kind = ActionKind::finite;
  ManifoldId ambient;
  std::string name;
  std::vector<Mat> elements;
  std::vector<int> weights;

  /// "antipodal", "hopf", "lens:p:q1,...,qk", "zd-diag:d" or "trivial".
  static GroupAction parse(const ManifoldId& ambient, std::string_view text);
  static GroupAction trivial(const ManifoldId& ambient);

  ManifoldPoint apply(std::size_t element, const ManifoldPoint& p) const;
  ManifoldPoint apply_circle(double theta, const ManifoldPoint& p) const;
  /// Element count, or 0 for a circle action.
  std::size_t order() const;

  /// Max |g^T g - I| over the listed elements (circle: over a theta grid).
  double isometry_defect() const;
  /// Max over products g h of the distance to the closest listed element.
  double closure_defect() const;
};

struct QuotientPoint {
  ManifoldPoint representative;
  std::shared_ptr<const GroupAction> action;
};

/// min over g of d(a, g b); circle actions use a 720-point grid with
/// golden-section refinement to 1e-10 in theta.
double quotient_dist(const GroupAction& action, const ManifoldPoint& a, const ManifoldPoint& b);
double quotient_dist(const QuotientPoint& a, const QuotientPoint& b);

struct EquivarianceReport {
  std::size_t samples = 0;
  std::size_t unresolved = 0;
  /// Largest invariance defect of N found while sampling.
  double invariance_defect = 0.0;
  /// Directed Hausdorff distances in the quotient metric.
  double up_to_down = 0.0;
  double down_to_up = 0.0;
  /// Largest |rho_up - rho_down| over matched samples.
  double rho_gap = 0.0;
  double min_rho_down = 0.0;
  double max_rho_down = 0.0;
  double max_discrepancy() const { return std::max(up_to_down, down_to_up); }
};

/// Compares the cut points of N (projected to the quotient) with the cut points
/// of N/G obtained by bisecting against the quotient distance while shooting
/// upstairs. Both clouds come from the same (foot, direction) samples.
EquivarianceReport equivariance_check(const Submanifold& n, const GroupAction& action, int samples,
                                      std::uint64_t seed);

/// Distances from q to the components z_2 = xi_k z_1 of the n = 1 Fermat lift
/// of degree d, indexed by k.
std::vector<double> fermat_component_distances(const ManifoldPoint& q, int d);

struct FermatExploration {
  std::vector<Vec> separating_points;
  std::size_t samples = 0;
  /// Distances from the separating points to the conjectured set.
  double mean_distance = 0.0;
  double max_distance = 0.0;
};

struct FermatReport {
  int n = 1;
  int d = 2;
  /// "verification" or "exploratory"; exploratory reports carry no checks.
  std::string mode;
  std::vector<Check> checks;
  FermatExploration exploration;
};

/// Verification for (n = 1, 2 <= d <= 8) and (d = 2, 1 <= n <= 3); other
/// small cases with n + 1 <= 4 and d <= 8 run in exploratory mode.
FermatReport fermat_verify(int d, int n, int grid, std::uint64_t seed);

/// Angular distance from q to Z_d^{*(n+1)} x_{Z_d} S^1 = {e^{i theta} (t_j w_j)}.
double distance_to_fermat_conjecture(const ManifoldPoint& q, int d);

}  // namespace cutloci
