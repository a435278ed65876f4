// Numerical distance to a submanifold: projected gradient descent with
// Barzilai-Borwein steps and Armijo backtracking, restarted from many random
// points on N. Used as an independent oracle for the closed forms and as the
// distance function on Fermat lifts with n >= 2.

#include <cmath>
#include <functional>
#include <numbers>

#include "cutloci/error.hpp"
#include "cutloci/submanifolds.hpp"
#include "submanifold_detail.hpp"

namespace cutloci {
namespace {

using detail::Candidate;
using detail::CVec;

constexpr int kDefaultStarts = 200;
constexpr int kFermatStarts = 64;
constexpr int kMaxIterations = 3000;
constexpr double kGradTol = 1e-13;

struct LocalModel {
  /// Objective -<q, x> (sphere ambient) or |x - q|^2 / 2 (flat ambient).
  bool spherical = false;
  std::function<Vec(Rng&)> start;
  std::function<Vec(const Vec&)> retract;
  /// Projection of an ambient vector onto the tangent space of N at x.
  std::function<Vec(const Vec& x, const Vec& g)> project;
};

struct Descent {
  const LocalModel& model;
  const Vec& q;

  double objective(const Vec& x) const {
    return model.spherical ? -q.dot(x) : 0.5 * (x - q).squaredNorm();
  }
  Vec gradient(const Vec& x) const { return model.spherical ? Vec(-q) : Vec(x - q); }

  Vec run(Vec x) const {
    x = model.retract(x);
    Vec g = model.project(x, gradient(x));
    double f = objective(x);
    double step = 1.0;
    for (int it = 0; it < kMaxIterations; ++it) {
      const double gn2 = g.squaredNorm();
      if (std::sqrt(gn2) <= kGradTol) break;
      Vec next;
      double fnext = 0.0;
      bool accepted = false;
      for (int back = 0; back < 60; ++back) {
        next = model.retract(x - step * g);
        fnext = objective(next);
        if (fnext <= f - 1e-4 * step * gn2) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      const Vec gnext = model.project(next, gradient(next));
      const Vec s = next - x;
      const Vec y = gnext - g;
      const double sy = s.dot(y);
      step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-8, 1e8) : std::min(step * 2.0, 1e8);
      x = next;
      g = gnext;
      f = fnext;
    }
    return x;
  }
};

Vec retract_orthogonal(const Vec& x, int n) {
  Eigen::HouseholderQR<Mat> qr(unflatten(x, n, n));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return flatten(q);
}

Vec project_sphere(const Vec& x, Vec g) {
  g -= g.dot(x) * x;
  return g;
}

LocalModel build_model(const Submanifold& sub) {
  const ManifoldId& m = sub.ambient;
  LocalModel model;
  model.spherical = m.kind == ManifoldKind::sphere;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EquatorSphere>) {
          const int head = s.k + 1;
          model.start = [head, m](Rng& rng) {
            Vec x = Vec::Zero(m.n + 1);
            x.head(head) = rng.unit_vector(head);
            return x;
          };
          model.retract = [head](const Vec& x) {
            Vec y = Vec::Zero(x.size());
            y.head(head) = x.head(head);
            const double nrm = y.norm();
            if (nrm == 0.0) y(0) = 1.0; else y /= nrm;
            return y;
          };
          model.project = [head](const Vec& x, const Vec& g) {
            Vec t = Vec::Zero(x.size());
            t.head(head) = g.head(head);
            return project_sphere(x, t);
          };
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          const double a = s.a, b = s.b;
          model.start = [a, b](Rng& rng) {
            const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
            Vec x(2);
            x << a * std::cos(th), b * std::sin(th);
            return x;
          };
          model.retract = [a, b](const Vec& x) {
            const double th = std::atan2(x(1) / b, x(0) / a);
            Vec y(2);
            y << a * std::cos(th), b * std::sin(th);
            return y;
          };
          model.project = [a, b](const Vec& x, const Vec& g) {
            Vec t(2);
            t << -a * x(1) / b, b * x(0) / a;
            t /= t.norm();
            return Vec(g.dot(t) * t);
          };
        } else if constexpr (std::is_same_v<T, OrthogonalGroup>) {
          const int n = m.n;
          model.start = [n](Rng& rng) { return flatten(random_orthogonal(rng, n)); };
          model.retract = [n](const Vec& x) { return retract_orthogonal(x, n); };
          model.project = [n](const Vec& x, const Vec& g) {
            const Mat q = unflatten(x, n, n);
            const Mat a = q.transpose() * unflatten(g, n, n);
            return flatten(Mat(q * (a - a.transpose()) / 2.0));
          };
        } else if constexpr (std::is_same_v<T, HopfLink>) {
          model.start = [](Rng& rng) {
            const bool first = rng.uniform() < 0.5;
            const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
            Vec x = Vec::Zero(4);
            x(first ? 0 : 2) = std::cos(th);
            x(first ? 1 : 3) = std::sin(th);
            return x;
          };
          model.retract = [](const Vec& x) {
            Vec y = Vec::Zero(4);
            const Eigen::Index at = x.head(2).norm() >= x.tail(2).norm() ? 0 : 2;
            y.segment(at, 2) = x.segment(at, 2) / x.segment(at, 2).norm();
            return y;
          };
          model.project = [](const Vec& x, const Vec& g) {
            Vec t = Vec::Zero(4);
            const Eigen::Index at = x.head(2).norm() >= x.tail(2).norm() ? 0 : 2;
            t(at) = -x(at + 1);
            t(at + 1) = x(at);
            return Vec(g.dot(t) * t);
          };
        } else if constexpr (std::is_same_v<T, FermatLift>) {
          const int d = s.d;
          model.start = [d, m](Rng& rng) { return detail::fermat_retract(rng.unit_vector(m.n + 1), d); };
          model.retract = [d](const Vec& x) { return detail::fermat_retract(x, d); };
          model.project = [d](const Vec& x, const Vec& g) {
            // Remove the components along x and along the normal plane
            // span{conj(z^(d-1)), i conj(z^(d-1))}.
            Vec t = project_sphere(x, g);
            const CVec nz = detail::fermat_normal(detail::to_complex(x), d);
            const double nn = nz.norm();
            if (nn > 0.0) {
              const Vec n1 = detail::from_complex(nz / nn);
              const Vec n2 = detail::from_complex(Complex(0.0, 1.0) * nz / nn);
              t -= t.dot(n1) * n1;
              t -= t.dot(n2) * n2;
            }
            return t;
          };
        } else {
          throw Error(ErrorCode::UnsupportedAmbient,
                      "multistart is not available for " + sub.to_string());
        }
      },
      sub.kind);
  return model;
}

double model_distance(const ManifoldId& m, const Vec& q, const Vec& x) {
  return m.kind == ManifoldKind::sphere ? detail::sphere_angle(q, x) : (x - q).norm();
}

}  // namespace

MinimizerSet multistart_dist(const Submanifold& sub, const ManifoldPoint& q, const OracleOptions& options) {
  if (!(q.manifold == sub.ambient)) {
    throw Error(ErrorCode::UnsupportedAmbient,
                "query point lives on " + q.manifold.to_string() + ", N is in " + sub.ambient.to_string());
  }
  validate_point(q);
  if (std::holds_alternative<FinitePoints>(sub.kind)) {
    // Nothing to descend on; the enumeration is the exact answer.
    return dist_to(sub, q, options);
  }
  const LocalModel model = build_model(sub);
  const Descent descent{model, q.coords};
  const int starts = options.starts > 0 ? options.starts
                     : std::holds_alternative<FermatLift>(sub.kind) ? kFermatStarts
                                                                    : kDefaultStarts;
  std::vector<Candidate> candidates;
  candidates.reserve(starts);
  for (int i = 0; i < starts; ++i) {
    Rng rng = Rng::stream(options.seed, static_cast<std::uint64_t>(i));
    const Vec x = descent.run(model.start(rng));
    candidates.push_back({model_distance(sub.ambient, q.coords, x), ManifoldPoint{sub.ambient, x}});
  }
  return detail::collect_minimizers(std::move(candidates), options);
}

}  // namespace cutloci
