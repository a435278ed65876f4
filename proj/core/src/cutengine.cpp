#include "cutloci/cutengine.hpp"

#include <cmath>
#include <numbers>

#include "cutloci/error.hpp"
#include "cutloci/parallel.hpp"

namespace cutloci {
namespace {

constexpr double kClosedFormTol = 1e-9;
constexpr double kMultistartTol = 1e-6;
constexpr double kClosedFormSlack = 1e-12;
constexpr double kOnSubmanifoldTol = 1e-10;

Vec wrap_torus(Vec x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) -= std::floor(x(i));
    if (x(i) >= 1.0) x(i) = 0.0;
  }
  return x;
}

double squared_distance(const Submanifold& sub, const ManifoldPoint& p, const OracleOptions& options) {
  const double d = dist_to(sub, p, options).distance;
  return d * d;
}

/// Orthonormal basis of the tangent space at q in the ambient metric, written
/// as (curve at q through +-h along basis vector i) plus the vector itself.
struct Frame {
  std::vector<Vec> basis;  // tangent vectors in ambient coordinates
};

Frame tangent_frame(const ManifoldPoint& q) {
  const ManifoldId& m = q.manifold;
  Frame frame;
  const Eigen::Index dim = q.coords.size();
  switch (m.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::flat_torus:
    case ManifoldKind::matrix_space:
      for (Eigen::Index i = 0; i < dim; ++i) frame.basis.push_back(Vec::Unit(dim, i));
      break;
    case ManifoldKind::sphere: {
      Mat block(dim, dim + 1);
      block.col(0) = q.coords;
      block.rightCols(dim) = Mat::Identity(dim, dim);
      Eigen::HouseholderQR<Mat> qr(block);
      const Mat basis = qr.householderQ();
      for (Eigen::Index i = 1; i < dim; ++i) frame.basis.push_back(basis.col(i));
      break;
    }
    case ManifoldKind::glplus_left_inv: {
      // Left-invariant frame A E_ij, stored as the Lie-algebra element E_ij.
      const int n = m.n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Mat e = Mat::Zero(n, n);
          e(i, j) = 1.0;
          frame.basis.push_back(flatten(e));
        }
      break;
    }
    case ManifoldKind::upq: {
      // Orthonormal basis of u(p,q) for Re tr(X^* Y), stored as Lie-algebra
      // elements.
      const int p = m.p, n = m.n;
      const double r = 1.0 / std::sqrt(2.0);
      const Complex i1(0.0, 1.0);
      auto add = [&](const CMat& x) { frame.basis.push_back(flatten(x)); };
      for (int blk = 0; blk < 2; ++blk) {
        const int off = blk == 0 ? 0 : p;
        const int len = blk == 0 ? p : m.q;
        for (int j = 0; j < len; ++j) {
          CMat x = CMat::Zero(n, n);
          x(off + j, off + j) = i1;
          add(x);
          for (int k = j + 1; k < len; ++k) {
            CMat s = CMat::Zero(n, n);
            s(off + j, off + k) = r;
            s(off + k, off + j) = -r;
            add(s);
            CMat h = CMat::Zero(n, n);
            h(off + j, off + k) = i1 * r;
            h(off + k, off + j) = i1 * r;
            add(h);
          }
        }
      }
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < m.q; ++k) {
          CMat re = CMat::Zero(n, n);
          re(j, p + k) = r;
          re(p + k, j) = r;
          add(re);
          CMat im = CMat::Zero(n, n);
          im(j, p + k) = i1 * r;
          im(p + k, j) = -i1 * r;
          add(im);
        }
      break;
    }
  }
  return frame;
}

/// Point reached from q after time s along the frame direction e.
ManifoldPoint move_along(const ManifoldPoint& q, const Vec& e, double s) {
  const ManifoldId& m = q.manifold;
  switch (m.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::matrix_space: return ManifoldPoint{m, q.coords + s * e};
    case ManifoldKind::flat_torus: return ManifoldPoint{m, wrap_torus(q.coords + s * e)};
    case ManifoldKind::sphere: {
      Vec x = q.coords * std::cos(s) + e * std::sin(s);
      return ManifoldPoint{m, x / x.norm()};
    }
    case ManifoldKind::glplus_left_inv: {
      const Mat x = unflatten(e, m.n, m.n);
      return ManifoldPoint::from_matrix(m, q.matrix() * matfun::mat_exp<double>(s * x));
    }
    case ManifoldKind::upq: {
      const CMat x = unflatten_complex(e, m.n, m.n);
      return ManifoldPoint::from_complex_matrix(m, q.complex_matrix() * matfun::mat_exp<Complex>(Complex(s) * x));
    }
  }
  return q;
}

}  // namespace

std::string_view to_string(CutClass c) noexcept {
  return c == CutClass::separating ? "separating" : "focal_or_unresolved";
}

double default_t_max(const ManifoldId& ambient) {
  switch (ambient.kind) {
    case ManifoldKind::sphere: return std::numbers::pi;
    case ManifoldKind::flat_torus: return std::sqrt(static_cast<double>(ambient.n));
    default: return kDefaultFlatTMax;
  }
}

double default_tol_rho(const Submanifold& sub) {
  return sub.closed_form() ? kClosedFormTol : kMultistartTol;
}

ManifoldPoint shoot(const Submanifold& sub, const TangentVector& v, double t) {
  if (!(v.base.manifold == sub.ambient)) {
    throw Error(ErrorCode::BaseMismatch, "direction is not tangent to " + sub.ambient.to_string());
  }
  return exp_map(v, t);
}

CutTimeResult cut_time_with(const DistanceOracle& distance, const TangentVector& v, const BisectionSettings& settings) {
  CutTimeResult result;
  result.tol_rho = settings.tol_rho;

  auto minimal = [&](double t) {
    try {
      return t - distance(exp_map(v, t)) <= settings.slack;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UnsupportedGeodesic || e.code() == ErrorCode::BaseMismatch) throw;
      throw Error(ErrorCode::OracleFailure, "distance oracle failed at t = " + std::to_string(t) + ": " + e.what());
    }
  };

  if (minimal(settings.t_max)) {
    // Minimal all the way to the horizon. When the horizon is the diameter the
    // cut point sits exactly there (a point in S^n is cut at pi).
    if (settings.t_max >= settings.diameter) {
      result.rho = settings.diameter;
      result.in_range = true;
    }
    return result;
  }
  double lo = 0.0, hi = settings.t_max;
  int it = 0;
  while (hi - lo > settings.tol_rho && it < settings.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    if (minimal(mid)) lo = mid; else hi = mid;
    ++it;
  }
  result.rho = lo;
  result.in_range = true;
  result.iterations = it;
  result.cap_hit = hi - lo > settings.tol_rho;
  return result;
}

CutTimeResult cut_time(const Submanifold& sub, const TangentVector& v, const CutTimeOptions& options) {
  if (!(v.base.manifold == sub.ambient)) {
    throw Error(ErrorCode::BaseMismatch, "direction is not tangent to " + sub.ambient.to_string());
  }
  BisectionSettings settings;
  settings.t_max = std::isnan(options.t_max) ? default_t_max(sub.ambient) : options.t_max;
  settings.tol_rho = options.tol_rho > 0.0 ? options.tol_rho : default_tol_rho(sub);
  settings.slack = options.slack > 0.0 ? options.slack
                   : sub.closed_form()  ? kClosedFormSlack
                                        : options.oracle.tie;
  settings.max_iterations = options.max_iterations;
  settings.diameter = diameter(sub.ambient);
  return cut_time_with([&](const ManifoldPoint& p) { return dist_to(sub, p, options.oracle).distance; }, v,
                       settings);
}

MinimizerSet separating_test(const Submanifold& sub, const ManifoldPoint& q, const OracleOptions& options) {
  return dist_to(sub, q, options);
}

CutCloud sample_cut_locus(const Submanifold& sub, const SampleConfig& config) {
  if (config.feet < 1 || config.dirs_per_foot < 1) {
    throw Error(ErrorCode::ParseError, "sample counts must be >= 1");
  }
  const std::size_t feet = static_cast<std::size_t>(config.feet);
  const std::size_t dirs = static_cast<std::size_t>(config.dirs_per_foot);

  std::vector<ManifoldPoint> foot_points;
  std::vector<std::vector<TangentVector>> directions;
  foot_points.reserve(feet);
  directions.reserve(feet);
  const auto* finite = std::get_if<FinitePoints>(&sub.kind);
  for (std::size_t f = 0; f < feet; ++f) {
    Rng rng = Rng::stream(config.seed, f);
    ManifoldPoint foot = finite ? ManifoldPoint{sub.ambient, finite->points[f % finite->points.size()]}
                                : sample_point(sub, rng);
    const std::uint64_t dir_seed = splitmix64(config.seed ^ splitmix64(f + 0x51ed27));
    directions.push_back(unit_normal_sample(sub, foot, dir_seed, config.dirs_per_foot));
    foot_points.push_back(std::move(foot));
  }

  // Multiplicity is judged at the minimal side of the bisection bracket, where
  // the competing geodesic is shorter by at most ~2 tol_rho.
  OracleOptions mult_options = config.cut.oracle;
  const double tol = config.cut.tol_rho > 0.0 ? config.cut.tol_rho : default_tol_rho(sub);
  mult_options.tie = std::max(mult_options.tie, 4.0 * tol);

  struct Slot {
    bool ok = false;
    CutSample sample;
    UnresolvedSample failure;
  };
  std::vector<Slot> slots(feet * dirs);
  parallel_for(slots.size(), [&](std::size_t idx) {
    const std::size_t f = idx / dirs;
    const std::size_t d = idx % dirs;
    const TangentVector& v = directions[f][d];
    Slot& slot = slots[idx];
    try {
      const CutTimeResult ct = cut_time(sub, v, config.cut);
      if (!ct.in_range) {
        slot.failure = UnresolvedSample{f, d, foot_points[f], v, "no cut point within t_max"};
        return;
      }
      CutSample s;
      s.foot_index = f;
      s.dir_index = d;
      s.foot = foot_points[f];
      s.direction = v;
      s.rho = ct.rho;
      s.cut_point = shoot(sub, v, ct.rho);
      const MinimizerSet ms = separating_test(sub, s.cut_point, mult_options);
      s.multiplicity = ms.multiplicity();
      s.saturated = ms.saturated;
      s.family_tag = ms.family_tag;
      s.classification = ms.separating() ? CutClass::separating : CutClass::focal_or_unresolved;
      slot.ok = true;
      slot.sample = std::move(s);
    } catch (const Error& e) {
      slot.failure = UnresolvedSample{f, d, foot_points[f], v, e.what()};
    }
  });

  CutCloud cloud;
  for (auto& slot : slots) {
    if (slot.ok) cloud.samples.push_back(std::move(slot.sample));
    else cloud.unresolved.push_back(std::move(slot.failure));
  }
  return cloud;
}

NormalGeodesic normal_geodesic(const Submanifold& sub, const ManifoldPoint& q, const OracleOptions& options) {
  const MinimizerSet ms = dist_to(sub, q, options);
  if (ms.distance < kOnSubmanifoldTol) {
    throw Error(ErrorCode::OnSubmanifold, "point lies on N; no normal direction is defined");
  }
  if (ms.separating()) {
    throw Error(ErrorCode::OnCutLocus, "point has " + std::to_string(ms.multiplicity()) +
                                           (ms.saturated ? "+ (continuum)" : "") + " minimizers");
  }
  const ManifoldPoint& m = ms.minimizers.front();
  const ManifoldId& amb = sub.ambient;
  NormalGeodesic g;
  g.distance = ms.distance;
  switch (amb.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::matrix_space: {
      const Vec w = q.coords - m.coords;
      g.distance = w.norm();
      g.foot = m;
      g.direction = TangentVector{m, w / g.distance};
      break;
    }
    case ManifoldKind::flat_torus: {
      // The minimizer is a lift of the foot; the segment runs from the lift.
      const Vec w = q.coords - m.coords;
      g.distance = w.norm();
      g.foot = ManifoldPoint{amb, wrap_torus(m.coords)};
      g.direction = TangentVector{g.foot, w / g.distance};
      break;
    }
    case ManifoldKind::sphere: {
      Vec w = q.coords - q.coords.dot(m.coords) * m.coords;
      g.foot = m;
      g.direction = TangentVector{m, w / w.norm()};
      break;
    }
    case ManifoldKind::glplus_left_inv: {
      const Mat qm = m.matrix();
      const Mat s = qm.transpose() * q.matrix();
      const Mat log_s = matfun::principal_log<double>((s + s.transpose()) / 2.0, matfun::LogMethod::eigen);
      g.distance = log_s.norm();
      g.foot = m;
      g.direction = TangentVector::from_matrix(m, qm * log_s / g.distance);
      break;
    }
    case ManifoldKind::upq: {
      const CMat u = m.complex_matrix();
      const CMat h = u.adjoint() * q.complex_matrix();
      const CMat y = matfun::principal_log<Complex>((h + h.adjoint()) / 2.0, matfun::LogMethod::eigen);
      g.distance = y.norm();
      g.foot = m;
      g.direction = TangentVector::from_complex_matrix(m, u * y / Complex(g.distance));
      break;
    }
  }
  return g;
}

FlowState morse_bott_flow(const Submanifold& sub, const ManifoldPoint& q, double t) {
  const NormalGeodesic g = normal_geodesic(sub, q);
  const double s = g.distance * std::exp(-2.0 * t);
  return FlowState{shoot(sub, g.direction, s), t, s};
}

ManifoldPoint retract_to_N(const Submanifold& sub, const ManifoldPoint& q, double s) {
  const NormalGeodesic g = normal_geodesic(sub, q);
  return shoot(sub, g.direction, (1.0 - s) * g.distance);
}

ManifoldPoint push_to_cut(const Submanifold& sub, const ManifoldPoint& q, double s,
                          const CutTimeOptions& options) {
  const NormalGeodesic g = normal_geodesic(sub, q, options.oracle);
  const CutTimeResult ct = cut_time(sub, g.direction, options);
  if (!ct.in_range) {
    throw Error(ErrorCode::NoCutInRange, "the normal geodesic through q stays minimal up to t_max");
  }
  return shoot(sub, g.direction, s * ct.rho + (1.0 - s) * g.distance);
}

double gradient_check(const Submanifold& sub, const ManifoldPoint& q, double h) {
  const NormalGeodesic g = normal_geodesic(sub, q);
  const Frame frame = tangent_frame(q);
  const ManifoldId& m = q.manifold;
  const OracleOptions oracle;

  Vec numeric = Vec::Zero(q.coords.size());
  for (const Vec& e : frame.basis) {
    const double fp = squared_distance(sub, move_along(q, e, h), oracle);
    const double fm = squared_distance(sub, move_along(q, e, -h), oracle);
    numeric += (fp - fm) / (2.0 * h) * e;
  }

  // Velocity of the unit-speed normal geodesic on arrival at q, expressed in
  // the same coordinates as `numeric` (Lie-algebra coordinates for groups).
  Vec velocity;
  switch (m.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::matrix_space:
    case ManifoldKind::flat_torus: velocity = g.direction.vec; break;
    case ManifoldKind::sphere:
      velocity = -g.foot.coords * std::sin(g.distance) + g.direction.vec * std::cos(g.distance);
      break;
    case ManifoldKind::glplus_left_inv:
      velocity = flatten(Mat(g.foot.matrix().transpose() * g.direction.matrix()));
      break;
    case ManifoldKind::upq:
      velocity = flatten(CMat(g.foot.complex_matrix().adjoint() * g.direction.complex_matrix()));
      break;
  }
  return (numeric - 2.0 * g.distance * velocity).norm();
}

OneSidedProbe onesided_derivative_probe(const Submanifold& sub, const ManifoldPoint& q, const Vec& incoming) {
  const ManifoldId& m = q.manifold;
  if (m.is_matrix_kind() && m.kind != ManifoldKind::matrix_space) {
    throw Error(ErrorCode::UnsupportedAmbient, "one-sided probe needs a flat or spherical ambient");
  }
  Vec u = incoming;
  if (m.kind == ManifoldKind::sphere) u -= u.dot(q.coords) * q.coords;
  u /= u.norm();
  const OracleOptions oracle;
  auto f = [&](double s) { return squared_distance(sub, move_along(q, u, s), oracle); };
  const double f0 = f(0.0);

  // Richardson extrapolation for one-sided quotients with step ratio 10:
  // D(h) = f' + c h + O(h^2), so (10 D(h/10) - D(h)) / 9 = f' + O(h^2).
  const std::vector<double> hs = {1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> left, right;
  for (double h : hs) {
    left.push_back((f0 - f(-h)) / h);
    right.push_back((f(h) - f0) / h);
  }
  auto extrapolate = [](const std::vector<double>& d, std::size_t i) {
    return (10.0 * d[i + 1] - d[i]) / 9.0;
  };
  OneSidedProbe probe;
  probe.left_slope = extrapolate(left, 1);
  probe.right_slope = extrapolate(right, 1);
  probe.gap = probe.left_slope - probe.right_slope;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    probe.steps.push_back(h);
    probe.right_quadratic.push_back((f(2.0 * h) - 2.0 * f(h) + f0) / (2.0 * h * h));
    probe.left_quadratic.push_back((f(-2.0 * h) - 2.0 * f(-h) + f0) / (2.0 * h * h));
  }
  return probe;
}

}  // namespace cutloci
