#pragma once

// Normal-geodesic shooting, cut times, separating-set detection, cut-locus
// sampling and the gradient flow of the squared distance to N.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cutloci/submanifolds.hpp"

namespace cutloci {

/// Default search horizon for ambients without a diameter bound.
inline constexpr double kDefaultFlatTMax = 10.0;

enum class CutClass { separating, focal_or_unresolved };
std::string_view to_string(CutClass c) noexcept;

struct CutSample {
  std::size_t foot_index = 0;
  std::size_t dir_index = 0;
  ManifoldPoint foot;
  TangentVector direction;
  double rho = 0.0;
  ManifoldPoint cut_point;
  std::size_t multiplicity = 0;
  bool saturated = false;
  std::string family_tag;
  CutClass classification = CutClass::focal_or_unresolved;
};

/// A (foot, direction) pair without a usable cut sample, with the reason.
struct UnresolvedSample {
  std::size_t foot_index = 0;
  std::size_t dir_index = 0;
  ManifoldPoint foot;
  TangentVector direction;
  std::string reason;
};

struct CutCloud {
  std::vector<CutSample> samples;
  std::vector<UnresolvedSample> unresolved;
};

struct CutTimeOptions {
  /// Search horizon; NaN selects default_t_max(ambient).
  double t_max = std::numeric_limits<double>::quiet_NaN();
  /// Bisection tolerance; 0 selects 1e-9 (closed-form oracle) or 1e-6 (multistart).
  double tol_rho = 0.0;
  /// Minimality slack t - d(N, shoot(t)) <= slack; 0 selects 1e-12 (closed
  /// form) or the tie tolerance (multistart).
  double slack = 0.0;
  int max_iterations = 80;
  OracleOptions oracle;
};

struct CutTimeResult {
  /// Cut time, or +inf when the geodesic stays minimal up to t_max.
  double rho = std::numeric_limits<double>::infinity();
  bool in_range = false;
  /// The iteration cap stopped the bisection before reaching tol_rho.
  bool cap_hit = false;
  int iterations = 0;
  double tol_rho = 0.0;
};

double default_t_max(const ManifoldId& ambient);
double default_tol_rho(const Submanifold& n);

/// exp_map(foot, v, t) for a normal direction at a foot point.
ManifoldPoint shoot(const Submanifold& n, const TangentVector& v, double t);

CutTimeResult cut_time(const Submanifold& n, const TangentVector& v, const CutTimeOptions& options = {});

/// Distance to a target set, as used by the cut-time bisection.
using DistanceOracle = std::function<double(const ManifoldPoint&)>;

struct BisectionSettings {
  double t_max = 0.0;
  double tol_rho = 1e-9;
  double slack = 1e-12;
  int max_iterations = 80;
  /// Diameter of the space the distance is measured in; a geodesic minimal up
  /// to t_max >= diameter is cut exactly at the diameter.
  double diameter = std::numeric_limits<double>::infinity();
};

/// Bisection on t - distance(exp_map(v, t)) <= slack over [0, t_max].
CutTimeResult cut_time_with(const DistanceOracle& distance, const TangentVector& v, const BisectionSettings& settings);

/// dist_to with the verdict separating() = multiplicity >= 2 or saturated.
MinimizerSet separating_test(const Submanifold& n, const ManifoldPoint& q, const OracleOptions& options = {});

struct SampleConfig {
  int feet = 16;
  int dirs_per_foot = 16;
  std::uint64_t seed = 42;
  CutTimeOptions cut;
};

/// Cut samples for feet x directions pairs, computed in parallel and stored in
/// (foot index, direction index) order. Deterministic given the seed.
CutCloud sample_cut_locus(const Submanifold& n, const SampleConfig& config);

/// The unique minimal geodesic from N to q: foot, unit initial direction and
/// length. Throws OnSubmanifold near N and OnCutLocus at separating points.
struct NormalGeodesic {
  ManifoldPoint foot;
  TangentVector direction;
  double distance = 0.0;
};
NormalGeodesic normal_geodesic(const Submanifold& n, const ManifoldPoint& q,
                               const OracleOptions& options = {});

struct FlowState {
  ManifoldPoint position;
  double time = 0.0;
  double distance_to_N = 0.0;
};

/// Negative gradient flow of d(N, .)^2: eta(t) = gamma(d(q) e^{-2t}).
FlowState morse_bott_flow(const Submanifold& n, const ManifoldPoint& q, double t);
/// gamma((1 - s) d(q)), reaching N at s = 1.
ManifoldPoint retract_to_N(const Submanifold& n, const ManifoldPoint& q, double s);
/// gamma(s rho + (1 - s) d(q)), reaching the cut point at s = 1.
ManifoldPoint push_to_cut(const Submanifold& n, const ManifoldPoint& q, double s,
                          const CutTimeOptions& options = {});

/// |grad f (central differences, h) - 2 d(q) gamma'(d(q))| for f = d(N, .)^2,
/// measured in the ambient metric at q.
double gradient_check(const Submanifold& n, const ManifoldPoint& q, double h = 1e-5);

struct OneSidedProbe {
  double left_slope = 0.0;
  double right_slope = 0.0;
  /// left_slope - right_slope.
  double gap = 0.0;
  /// Second-difference quotients (f(+-2h) - 2 f(+-h) + f(0)) / (2 h^2).
  std::vector<double> steps;
  std::vector<double> left_quadratic;
  std::vector<double> right_quadratic;
};

/// One-sided derivatives of d(N, .)^2 along the geodesic through q with unit
/// velocity `incoming` (left = arriving side), by Richardson extrapolation.
OneSidedProbe onesided_derivative_probe(const Submanifold& n, const ManifoldPoint& q, const Vec& incoming);

}  // namespace cutloci
