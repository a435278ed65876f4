#include "cutloci/equivariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include "cutloci/error.hpp"
#include "cutloci/parallel.hpp"
#include "parse_util.hpp"
#include "submanifold_detail.hpp"

namespace cutloci {
namespace {

using detail::CVec;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCircleGrid = 720;
constexpr double kGoldenTol = 1e-10;
constexpr double kInvarianceTol = 1e-8;
constexpr double kClosedSlack = 1e-12;
constexpr double kCircleSlack = 1e-10;
constexpr double kQuotientTol = 1e-9;

/// Block-diagonal rotation acting on interleaved complex coordinates.
Mat phase_matrix(const std::vector<double>& angles) {
  const Eigen::Index k = static_cast<Eigen::Index>(angles.size());
  Mat g = Mat::Zero(2 * k, 2 * k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double c = std::cos(angles[j]), s = std::sin(angles[j]);
    g(2 * j, 2 * j) = c;
    g(2 * j, 2 * j + 1) = -s;
    g(2 * j + 1, 2 * j) = s;
    g(2 * j + 1, 2 * j + 1) = c;
  }
  return g;
}

int complex_dim(const ManifoldId& m, std::string_view what) {
  if (m.kind != ManifoldKind::sphere || (m.n + 1) % 2 != 0) {
    throw Error(ErrorCode::UnsupportedAmbient,
                std::string(what) + " acts on odd-dimensional spheres, not " + m.to_string());
  }
  return (m.n + 1) / 2;
}

GroupAction lens_action(const ManifoldId& ambient, int p, std::vector<int> q, std::string name) {
  if (p < 1) throw Error(ErrorCode::ParseError, "lens order must be >= 1");
  for (int w : q)
    if (std::gcd(w, p) != 1) throw Error(ErrorCode::ParseError, "lens weights must be coprime to the order");
  GroupAction g;
  g.kind = ActionKind::finite;
  g.ambient = ambient;
  g.name = std::move(name);
  for (int m = 0; m < p; ++m) {
    std::vector<double> angles;
    for (int w : q) angles.push_back(kTwoPi * m * w / p);
    g.elements.push_back(phase_matrix(angles));
  }
  return g;
}

/// Minimizes theta -> f(theta) over one period: grid scan, then golden section
/// on the bracket around the best grid point.
double minimize_periodic(const std::function<double(double)>& f) {
  const double step = kTwoPi / kCircleGrid;
  int best = 0;
  double best_value = f(0.0);
  for (int i = 1; i < kCircleGrid; ++i) {
    const double v = f(i * step);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = (best - 1) * step, b = (best + 1) * step;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > kGoldenTol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return std::min({best_value, fc, fd, f(0.5 * (a + b))});
}

/// Orbit representatives of N/G when the quotient of N is a finite set.
std::optional<std::vector<ManifoldPoint>> quotient_representatives(const Submanifold& sub,
                                                                   const GroupAction& action) {
  std::vector<ManifoldPoint> reps;
  if (const auto* fp = std::get_if<FinitePoints>(&sub.kind)) {
    for (const Vec& p : fp->points) reps.push_back(ManifoldPoint{sub.ambient, p});
    return reps;
  }
  if (action.kind != ActionKind::circle) return std::nullopt;
  const auto unit = [&](Eigen::Index at) {
    Vec x = Vec::Zero(sub.ambient.n + 1);
    x(at) = 1.0;
    return ManifoldPoint{sub.ambient, x};
  };
  // A circle of one complex coordinate is a single orbit when that weight is +-1.
  if (const auto* eq = std::get_if<EquatorSphere>(&sub.kind); eq && eq->k == 1 && std::abs(action.weights[0]) == 1) {
    reps.push_back(unit(0));
    return reps;
  }
  if (std::holds_alternative<HopfLink>(sub.kind) && std::abs(action.weights[0]) == 1 &&
      std::abs(action.weights[1]) == 1) {
    reps.push_back(unit(0));
    reps.push_back(unit(2));
    return reps;
  }
  return std::nullopt;
}

double invariance_defect(const Submanifold& sub, const GroupAction& action, std::uint64_t seed) {
  double worst = 0.0;
  const int probes = std::holds_alternative<FinitePoints>(sub.kind) ? 1 : 32;
  for (int i = 0; i < probes; ++i) {
    Rng rng = Rng::stream(seed ^ 0x1a7a11ce, static_cast<std::uint64_t>(i));
    std::vector<ManifoldPoint> points;
    if (const auto* fp = std::get_if<FinitePoints>(&sub.kind)) {
      for (const Vec& p : fp->points) points.push_back(ManifoldPoint{sub.ambient, p});
    } else {
      points.push_back(sample_point(sub, rng));
    }
    for (const ManifoldPoint& p : points) {
      if (action.kind == ActionKind::finite) {
        for (std::size_t g = 0; g < action.elements.size(); ++g)
          worst = std::max(worst, membership_defect(sub, action.apply(g, p)));
      } else {
        for (int k = 0; k < 8; ++k)
          worst = std::max(worst, membership_defect(sub, action.apply_circle(rng.uniform(0.0, kTwoPi), p)));
      }
    }
  }
  return worst;
}

/// max_i min_j d(a_i, b_j), scanning the matched partner first and stopping a
/// row as soon as it cannot raise the running maximum.
double directed_hausdorff(const GroupAction& action, const std::vector<ManifoldPoint>& a,
                          const std::vector<ManifoldPoint>& b) {
  double h = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = std::numeric_limits<double>::infinity();
    const auto visit = [&](std::size_t j) {
      row = std::min(row, quotient_dist(action, a[i], b[j]));
      return row <= h;
    };
    if (i < b.size() && visit(i)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (j == i) continue;
      if (visit(j)) break;
    }
    h = std::max(h, row);
  }
  return h;
}

double sphere_cos_to_angle(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

}  // namespace

GroupAction GroupAction::parse(const ManifoldId& ambient, std::string_view text) {
  if (ambient.kind != ManifoldKind::sphere) {
    throw Error(ErrorCode::UnsupportedAmbient, "group actions are defined on spheres, not " + ambient.to_string());
  }
  const auto [head, rest] = detail::split_once(text, ':');
  if (head == "trivial" && rest.empty()) return trivial(ambient);
  if (head == "antipodal" && rest.empty()) {
    GroupAction g;
    g.kind = ActionKind::finite;
    g.ambient = ambient;
    g.name = "antipodal";
    g.elements = {Mat::Identity(ambient.n + 1, ambient.n + 1), -Mat::Identity(ambient.n + 1, ambient.n + 1)};
    return g;
  }
  if (head == "hopf" && rest.empty()) {
    GroupAction g;
    g.kind = ActionKind::circle;
    g.ambient = ambient;
    g.name = "hopf";
    g.weights.assign(static_cast<std::size_t>(complex_dim(ambient, "hopf")), 1);
    return g;
  }
  if (head == "zd-diag") {
    const int d = detail::parse_int(rest);
    const int k = complex_dim(ambient, "zd-diag");
    return lens_action(ambient, d, std::vector<int>(static_cast<std::size_t>(k), 1), std::string(text));
  }
  if (head == "lens") {
    const auto [order, weights] = detail::split_once(rest, ':');
    const int p = detail::parse_int(order);
    std::vector<int> q = detail::parse_int_list(weights);
    if (static_cast<int>(q.size()) != complex_dim(ambient, "lens")) {
      throw Error(ErrorCode::ParseError, "lens action needs one weight per complex coordinate");
    }
    return lens_action(ambient, p, std::move(q), std::string(text));
  }
  throw Error(ErrorCode::ParseError, "unknown group action '" + std::string(text) + "'");
}

GroupAction GroupAction::trivial(const ManifoldId& ambient) {
  GroupAction g;
  g.kind = ActionKind::finite;
  g.ambient = ambient;
  g.name = "trivial";
  g.elements = {Mat::Identity(ambient.n + 1, ambient.n + 1)};
  return g;
}

ManifoldPoint GroupAction::apply(std::size_t element, const ManifoldPoint& p) const {
  if (kind != ActionKind::finite || element >= elements.size()) {
    throw Error(ErrorCode::ActionMismatch, "no element " + std::to_string(element) + " in action " + name);
  }
  return ManifoldPoint{p.manifold, elements[element] * p.coords};
}

ManifoldPoint GroupAction::apply_circle(double theta, const ManifoldPoint& p) const {
  if (kind != ActionKind::circle) throw Error(ErrorCode::ActionMismatch, name + " is not a circle action");
  std::vector<double> angles;
  for (int w : weights) angles.push_back(w * theta);
  return ManifoldPoint{p.manifold, phase_matrix(angles) * p.coords};
}

std::size_t GroupAction::order() const { return kind == ActionKind::finite ? elements.size() : 0; }

double GroupAction::isometry_defect() const {
  double worst = 0.0;
  const auto check = [&](const Mat& g) {
    worst = std::max(worst, (g.transpose() * g - Mat::Identity(g.rows(), g.cols())).norm());
  };
  if (kind == ActionKind::finite) {
    for (const Mat& g : elements) check(g);
  } else {
    for (int i = 0; i < 64; ++i) {
      std::vector<double> angles;
      for (int w : weights) angles.push_back(w * kTwoPi * i / 64.0);
      check(phase_matrix(angles));
    }
  }
  return worst;
}

double GroupAction::closure_defect() const {
  if (kind != ActionKind::finite) return 0.0;
  double worst = 0.0;
  for (const Mat& g : elements)
    for (const Mat& h : elements) {
      const Mat gh = g * h;
      double best = std::numeric_limits<double>::infinity();
      for (const Mat& e : elements) best = std::min(best, (gh - e).norm());
      worst = std::max(worst, best);
    }
  return worst;
}

double quotient_dist(const GroupAction& action, const ManifoldPoint& a, const ManifoldPoint& b) {
  if (!(a.manifold == action.ambient) || !(b.manifold == action.ambient)) {
    throw Error(ErrorCode::ActionMismatch, "points do not live on " + action.ambient.to_string());
  }
  if (action.kind == ActionKind::finite) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < action.elements.size(); ++g)
      best = std::min(best, riem_distance(a, action.apply(g, b)));
    return best;
  }
  return minimize_periodic([&](double theta) { return riem_distance(a, action.apply_circle(theta, b)); });
}

double quotient_dist(const QuotientPoint& a, const QuotientPoint& b) {
  if (!a.action || !b.action) throw Error(ErrorCode::ActionMismatch, "quotient point without an action");
  if (a.action != b.action &&
      !(a.action->name == b.action->name && a.action->ambient == b.action->ambient)) {
    throw Error(ErrorCode::ActionMismatch, "points belong to different quotients: " + a.action->name + " vs " +
                                               b.action->name);
  }
  return quotient_dist(*a.action, a.representative, b.representative);
}

EquivarianceReport equivariance_check(const Submanifold& sub, const GroupAction& action, int samples,
                                      std::uint64_t seed) {
  if (!(sub.ambient == action.ambient)) {
    throw Error(ErrorCode::ActionMismatch, "N lives in " + sub.ambient.to_string() + ", the action on " +
                                               action.ambient.to_string());
  }
  if (samples < 1) throw Error(ErrorCode::ParseError, "sample count must be >= 1");
  EquivarianceReport report;
  report.invariance_defect = invariance_defect(sub, action, seed);
  if (report.invariance_defect > kInvarianceTol) {
    throw Error(ErrorCode::NotInvariant, sub.to_string() + " is not invariant under " + action.name +
                                             " (defect " + std::to_string(report.invariance_defect) + ")");
  }

  const auto reps = quotient_representatives(sub, action);
  const DistanceOracle down = [&](const ManifoldPoint& x) {
    if (!reps) return dist_to(sub, x).distance;
    double best = std::numeric_limits<double>::infinity();
    for (const ManifoldPoint& r : *reps) best = std::min(best, quotient_dist(action, x, r));
    return best;
  };
  BisectionSettings settings;
  settings.t_max = default_t_max(sub.ambient);
  settings.tol_rho = kQuotientTol;
  settings.slack = action.kind == ActionKind::circle ? kCircleSlack : kClosedSlack;
  // The quotient diameter is below the horizon, so the horizon never counts
  // as a cut point downstairs.
  settings.diameter = std::numeric_limits<double>::infinity();

  struct Slot {
    bool ok = false;
    double rho_up = 0.0, rho_down = 0.0;
    ManifoldPoint up, down;
  };
  const auto* finite = std::get_if<FinitePoints>(&sub.kind);
  std::vector<Slot> slots(static_cast<std::size_t>(samples));
  parallel_for(slots.size(), [&](std::size_t i) {
    Slot& slot = slots[i];
    try {
      Rng rng = Rng::stream(seed, i);
      const ManifoldPoint foot = finite ? ManifoldPoint{sub.ambient, finite->points[i % finite->points.size()]}
                                        : sample_point(sub, rng);
      const TangentVector v = unit_normal_sample(sub, foot, splitmix64(seed ^ splitmix64(i + 0x51ed27)), 1)[0];
      const CutTimeResult up = cut_time(sub, v);
      const CutTimeResult dn = cut_time_with(down, v, settings);
      if (!up.in_range || !dn.in_range) return;
      slot.rho_up = up.rho;
      slot.rho_down = dn.rho;
      slot.up = exp_map(v, up.rho);
      slot.down = exp_map(v, dn.rho);
      slot.ok = true;
    } catch (const Error&) {
      slot.ok = false;
    }
  });

  std::vector<ManifoldPoint> up, down_cloud;
  report.min_rho_down = std::numeric_limits<double>::infinity();
  report.max_rho_down = -std::numeric_limits<double>::infinity();
  for (const Slot& s : slots) {
    if (!s.ok) {
      ++report.unresolved;
      continue;
    }
    up.push_back(s.up);
    down_cloud.push_back(s.down);
    report.rho_gap = std::max(report.rho_gap, std::abs(s.rho_up - s.rho_down));
    report.min_rho_down = std::min(report.min_rho_down, s.rho_down);
    report.max_rho_down = std::max(report.max_rho_down, s.rho_down);
  }
  report.samples = up.size();
  if (up.empty()) throw Error(ErrorCode::OracleFailure, "no sample produced a cut point");
  report.up_to_down = directed_hausdorff(action, up, down_cloud);
  report.down_to_up = directed_hausdorff(action, down_cloud, up);
  return report;
}

std::vector<double> fermat_component_distances(const ManifoldPoint& q, int d) {
  if (q.manifold.kind != ManifoldKind::sphere || q.manifold.n != 3) {
    throw Error(ErrorCode::UnsupportedAmbient, "component distances need the n = 1 lift in sphere:3");
  }
  const CVec z = detail::to_complex(q.coords);
  std::vector<double> out;
  for (int k = 0; k < d; ++k) {
    // cos d_k = |conj(z_1) + conj(z_2) xi_k| / sqrt 2.
    const double c = std::abs(std::conj(z(0)) + std::conj(z(1)) * detail::fermat_root(k, d)) / std::sqrt(2.0);
    out.push_back(std::atan2(std::sqrt(std::max(0.0, 1.0 - c * c)), c));
  }
  return out;
}

double distance_to_fermat_conjecture(const ManifoldPoint& q, int d) {
  const CVec z = detail::to_complex(q.coords);
  std::vector<Complex> roots;
  for (int m = 0; m < d; ++m) roots.push_back(std::polar(1.0, kTwoPi * m / d));
  // For fixed theta the best point is t_j w_j with w_j the root closest to
  // e^{-i theta} z_j and t proportional to the positive projections.
  const auto negative_cos = [&](double theta) {
    const Complex rot = std::polar(1.0, -theta);
    double sum2 = 0.0, best_single = -1.0;
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      double m = -std::numeric_limits<double>::infinity();
      for (const Complex& w : roots) m = std::max(m, (std::conj(w) * rot * z(j)).real());
      if (m > 0.0) sum2 += m * m;
      best_single = std::max(best_single, m);
    }
    return -(sum2 > 0.0 ? std::sqrt(sum2) : best_single);
  };
  return sphere_cos_to_angle(-minimize_periodic(negative_cos));
}

FermatReport fermat_verify(int d, int n, int grid, std::uint64_t seed) {
  if (d < 2 || d > 8 || n < 1 || n > 3) {
    throw Error(ErrorCode::UnsupportedRegime, "Fermat checks cover 2 <= d <= 8 and 1 <= n <= 3, got d = " +
                                                  std::to_string(d) + ", n = " + std::to_string(n));
  }
  if (grid < 1) throw Error(ErrorCode::ParseError, "grid must be >= 1");
  FermatReport report;
  report.n = n;
  report.d = d;
  const ManifoldId ambient = ManifoldId::sphere(2 * n + 1);
  const Submanifold lift(ambient, FermatLift{d});
  const std::string tag = "n=" + std::to_string(n) + ",d=" + std::to_string(d);
  const auto point = [&](const CVec& z) { return ManifoldPoint{ambient, detail::from_complex(z)}; };

  if (n == 1) {
    report.mode = "verification";
    // Conjectured cut set: (cos phi, sin phi w^m) e^{i theta}, w = e^{2 pi i/d}.
    double tie = 0.0, invariance = 0.0;
    std::size_t not_separating = 0, points = 0;
    Rng rng = Rng::stream(seed, 1);
    for (int i = 1; i <= grid; ++i) {
      const double phi = 0.5 * std::numbers::pi * i / (grid + 1);
      for (int m = 0; m < d; ++m) {
        CVec z(2);
        z << std::cos(phi), std::sin(phi) * std::polar(1.0, kTwoPi * m / d);
        z *= std::polar(1.0, rng.uniform(0.0, kTwoPi));
        const ManifoldPoint q = point(z);
        std::vector<double> dk = fermat_component_distances(q, d);
        std::sort(dk.begin(), dk.end());
        tie = std::max(tie, dk[1] - dk[0]);
        if (!dist_to(lift, q).separating()) ++not_separating;
        ++points;
        // The component distances are invariant under z -> w z and z -> e^{i a} z.
        const std::vector<double> base = fermat_component_distances(q, d);
        for (const CVec& moved : {CVec(z * std::polar(1.0, kTwoPi / d)), CVec(z * std::polar(1.0, 0.7))}) {
          const std::vector<double> other = fermat_component_distances(point(moved), d);
          for (std::size_t k = 0; k < base.size(); ++k) invariance = std::max(invariance, std::abs(base[k] - other[k]));
        }
      }
    }
    if (d == 2) {
      // The multistart oracle must also find both minimizers on the set.
      OracleOptions options;
      options.tie = 1e-6;
      options.seed = splitmix64(seed);
      std::size_t missed = 0;
      Rng srng = Rng::stream(seed, 3);
      for (int i = 0; i < grid; ++i) {
        const Vec v = srng.unit_vector(2);
        const CVec z = v.cast<Complex>() * std::polar(1.0, srng.uniform(0.0, kTwoPi));
        if (!multistart_dist(lift, point(z), options).separating()) ++missed;
      }
      report.checks.push_back(
          check_at_most("fermat." + tag + ".multistart_non_separating_on_set", static_cast<double>(missed), 0.0));
    }
    report.checks.push_back(check_at_most("fermat." + tag + ".tie_residual", tie, 1e-9));
    report.checks.push_back(check_at_most("fermat." + tag + ".non_separating_on_set",
                                          static_cast<double>(not_separating), 0.0));
    report.checks.push_back(check_at_most("fermat." + tag + ".action_invariance", invariance, 1e-12));

    // Off-set probes: phase offset between a quarter and three quarters of 2 pi/d.
    double min_gap = std::numeric_limits<double>::infinity();
    std::size_t not_unique = 0;
    std::vector<CVec> probes;
    if (d == 2) {
      CVec z(2);
      z << std::cos(0.3), std::sin(0.3) * std::polar(1.0, 0.2);
      probes.push_back(z);
    }
    for (int i = 0; i < std::max(grid * d, 8); ++i) {
      const double phi = rng.uniform(0.2, 0.5 * std::numbers::pi - 0.2);
      const double offset = rng.uniform(0.25, 0.75) * kTwoPi / d;
      const int m = rng.integer(0, d - 1);
      CVec z(2);
      z << std::cos(phi), std::sin(phi) * std::polar(1.0, kTwoPi * m / d + offset);
      probes.push_back(z * std::polar(1.0, rng.uniform(0.0, kTwoPi)));
    }
    for (const CVec& z : probes) {
      const ManifoldPoint q = point(z.normalized());
      std::vector<double> dk = fermat_component_distances(q, d);
      std::sort(dk.begin(), dk.end());
      min_gap = std::min(min_gap, dk[1] - dk[0]);
      const MinimizerSet ms = dist_to(lift, q);
      if (ms.multiplicity() != 1 || ms.saturated) ++not_unique;
    }
    report.checks.push_back(check_at_least("fermat." + tag + ".offset_gap", min_gap, 1e-3));
    report.checks.push_back(check_at_most("fermat." + tag + ".offset_non_unique", static_cast<double>(not_unique), 0.0));

    if (d == 2) {
      // 1/2 (cos s + sin t, sin s + cos t, sin s - cos t, -cos s + sin t).
      double worst = 0.0;
      std::size_t missed = 0;
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
          const double s = kTwoPi * i / grid + 0.1, t = kTwoPi * j / grid + 0.05;
          Vec x(4);
          x << std::cos(s) + std::sin(t), std::sin(s) + std::cos(t), std::sin(s) - std::cos(t),
              -std::cos(s) + std::sin(t);
          const ManifoldPoint q{ambient, x / 2.0};
          std::vector<double> dk = fermat_component_distances(q, d);
          std::sort(dk.begin(), dk.end());
          worst = std::max(worst, dk[1] - dk[0]);
          if (!dist_to(lift, q).separating()) ++missed;
        }
      report.checks.push_back(check_at_most("fermat." + tag + ".explicit_parametrization_tie", worst, 1e-8));
      report.checks.push_back(
          check_at_most("fermat." + tag + ".explicit_parametrization_missed", static_cast<double>(missed), 0.0));
    }
    return report;
  }

  if (d == 2) {
    report.mode = "verification";
    // Conjectured cut set: v e^{i theta} with v a real unit vector. The
    // multistart oracle must find at least two minimizers.
    OracleOptions options;
    options.tie = 1e-6;
    options.starts = 200;
    options.seed = splitmix64(seed);
    std::vector<CVec> set_points, probes;
    Rng rng = Rng::stream(seed, 2);
    for (int i = 0; i < grid; ++i) {
      const Vec v = rng.unit_vector(n + 1);
      set_points.push_back(v.cast<Complex>() * std::polar(1.0, rng.uniform(0.0, kTwoPi)));
      CVec w(n + 1);
      for (int j = 0; j <= n; ++j) w(j) = Complex(rng.normal(), rng.normal());
      probes.push_back(w.normalized());
    }
    std::vector<char> separating(set_points.size()), unique(probes.size());
    std::vector<double> sigma2(probes.size()), oracle_gap(probes.size());
    parallel_for(set_points.size() + probes.size(), [&](std::size_t idx) {
      if (idx < set_points.size()) {
        separating[idx] = multistart_dist(lift, point(set_points[idx]), options).separating();
        return;
      }
      const std::size_t p = idx - set_points.size();
      const CVec& z = probes[p];
      Mat m(n + 1, 2);
      m.col(0) = z.real();
      m.col(1) = z.imag();
      const Vec s = matfun::svd(m).singular_values;
      sigma2[p] = s(1);
      const MinimizerSet ms = multistart_dist(lift, point(z), options);
      unique[p] = ms.multiplicity() == 1 && !ms.saturated;
      // Independent value: cos d = (sigma_1 + sigma_2) / sqrt 2.
      oracle_gap[p] = std::abs(ms.distance - sphere_cos_to_angle((s(0) + s(1)) / std::sqrt(2.0)));
    });
    const auto count_false = [](const std::vector<char>& v) {
      return static_cast<double>(std::count(v.begin(), v.end(), 0));
    };
    report.checks.push_back(check_at_most("fermat." + tag + ".non_separating_on_set", count_false(separating), 0.0));
    report.checks.push_back(check_at_least("fermat." + tag + ".offset_sigma2",
                                           *std::min_element(sigma2.begin(), sigma2.end()), 1e-3));
    report.checks.push_back(check_at_most("fermat." + tag + ".offset_non_unique", count_false(unique), 0.0));
    report.checks.push_back(check_at_most("fermat." + tag + ".offset_distance_vs_svd",
                                          *std::max_element(oracle_gap.begin(), oracle_gap.end()), 1e-6));
    return report;
  }

  report.mode = "exploratory";
  SampleConfig config;
  config.feet = grid;
  config.dirs_per_foot = 2;
  config.seed = seed;
  const CutCloud cloud = sample_cut_locus(lift, config);
  FermatExploration& ex = report.exploration;
  ex.samples = cloud.samples.size();
  for (const CutSample& s : cloud.samples) {
    if (s.classification != CutClass::separating) continue;
    ex.separating_points.push_back(s.cut_point.coords);
    const double dist = distance_to_fermat_conjecture(s.cut_point, d);
    ex.mean_distance += dist;
    ex.max_distance = std::max(ex.max_distance, dist);
  }
  if (!ex.separating_points.empty()) ex.mean_distance /= static_cast<double>(ex.separating_points.size());
  return report;
}

}  // namespace cutloci
