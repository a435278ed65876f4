#include "cutloci/submanifolds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "cutloci/error.hpp"
#include "parse_util.hpp"
#include "submanifold_detail.hpp"

namespace cutloci {
namespace {

using detail::Candidate;
using detail::CVec;
using detail::sphere_angle;

constexpr double kPi = std::numbers::pi;

[[noreturn]] void unsupported(const ManifoldId& ambient, const std::string& what) {
  throw Error(ErrorCode::UnsupportedAmbient, what + " is not available in " + ambient.to_string());
}

// ---------------------------------------------------------------------------
// Ellipse: critical points of the distance from (x0, y0) are the feet
// (a^2 x0/(t+a^2), b^2 y0/(t+b^2)) for the roots t of
//   F(t) = (a x0/(t+a^2))^2 + (b y0/(t+b^2))^2 - 1.
// The nearest foot comes from the unique root in (-b^2, inf) off the axes; the
// roots in (-a^2, -b^2) give the feet across the major axis, which tie with it
// on the cut segment. Axis cases degenerate to t = -b^2 or t = -a^2.

struct EllipseEq {
  double a, b, x0, y0;
  double operator()(double t) const {
    // A vanishing numerator removes its pole entirely.
    const double u = x0 == 0.0 ? 0.0 : a * x0 / (t + a * a);
    const double v = y0 == 0.0 ? 0.0 : b * y0 / (t + b * b);
    return u * u + v * v - 1.0;
  }
  Vec foot(double t) const {
    Vec f(2);
    f << a * a * x0 / (t + a * a), b * b * y0 / (t + b * b);
    return f;
  }
};

/// Root of g on (lo, hi) with g(lo) > 0 > g(hi), where lo/hi are offsets from
/// a pole; bisects geometrically while the bracket spans orders of magnitude.
template <class G>
double bisect_offset(const G& g, double lo, double hi) {
  for (int it = 0; it < 2000; ++it) {
    double mid = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

Vec onto_ellipse(const Vec& f, double a, double b) {
  const double theta = std::atan2(f(1) / b, f(0) / a);
  Vec out(2);
  out << a * std::cos(theta), b * std::sin(theta);
  return out;
}

std::vector<Vec> ellipse_candidates(double a, double b, double x0, double y0) {
  const EllipseEq eq{a, b, x0, y0};
  const double a2 = a * a, b2 = b * b, c = a2 - b2;
  std::vector<Vec> feet;

  // Vertices cover the axis cases outside the cut segment.
  for (auto [x, y] : {std::pair{a, 0.0}, {-a, 0.0}, {0.0, b}, {0.0, -b}}) {
    Vec v(2);
    v << x, y;
    feet.push_back(v);
  }
  if (y0 == 0.0) {
    const double x = a2 * x0 / c;
    if (std::abs(x) <= a) {
      const double y = b * std::sqrt(std::max(0.0, 1.0 - (x / a) * (x / a)));
      Vec f(2);
      f << x, y;
      feet.push_back(f);
      f(1) = -y;
      feet.push_back(f);
    }
  }
  if (x0 == 0.0) {
    const double y = -b2 * y0 / c;
    if (std::abs(y) <= b) {
      const double x = a * std::sqrt(std::max(0.0, 1.0 - (y / b) * (y / b)));
      Vec f(2);
      f << x, y;
      feet.push_back(f);
      f(0) = -x;
      feet.push_back(f);
    }
  }

  // Root in (-b^2, inf), in the offset s = t + b^2.
  {
    auto g = [&](double s) { return eq(s - b2); };
    const double left = y0 != 0.0 ? std::numeric_limits<double>::infinity() : eq(-b2);
    if (left > 0.0) {
      double hi = 1.0;
      int guard = 0;
      while (!(g(hi) < 0.0)) {
        hi *= 2.0;
        if (++guard > 2000 || !std::isfinite(hi)) {
          throw Error(ErrorCode::QuarticSolveFailure, "ellipse root not bracketed above -b^2");
        }
      }
      double lo = 0.0;
      if (y0 != 0.0) {
        lo = std::min(1.0, hi / 2.0);
        guard = 0;
        while (!(g(lo) > 0.0)) {
          lo /= 2.0;
          if (++guard > 2000 || lo == 0.0) {
            throw Error(ErrorCode::QuarticSolveFailure, "ellipse root not bracketed at -b^2");
          }
        }
      }
      feet.push_back(eq.foot(bisect_offset(g, lo, hi) - b2));
    }
  }

  // Roots in (-a^2, -b^2): F is convex there. Locate its minimum by golden
  // section on u = t + a^2 in (0, c), then bracket on either side.
  if (x0 != 0.0 || y0 != 0.0) {
    auto f = [&](double u) { return eq(u - a2); };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = c;
    double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    double f1 = f(m1), f2 = f(m2);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      if (f1 < f2) {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - phi * (hi - lo);
        f1 = f(m1);
      } else {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + phi * (hi - lo);
        f2 = f(m2);
      }
    }
    const double umin = f1 < f2 ? m1 : m2;
    const double fmin = std::min(f1, f2);
    if (fmin < 0.0) {
      // Left root: F(0+) > 0 unless x0 == 0 with a finite, nonpositive limit.
      const double left = x0 != 0.0 ? std::numeric_limits<double>::infinity() : f(0.0);
      if (left > 0.0) {
        // Offset from the pole u = 0 going right; g decreases.
        auto g = [&](double s) { return f(s); };
        double l = umin / 2.0;
        int guard = 0;
        while (x0 != 0.0 && !(g(l) > 0.0) && ++guard < 2000) l /= 2.0;
        if (x0 == 0.0) l = 0.0;
        if (g(l) > 0.0 || x0 == 0.0) feet.push_back(eq.foot(bisect_offset(g, l, umin) - a2));
      }
      const double right = y0 != 0.0 ? std::numeric_limits<double>::infinity() : f(c);
      if (right > 0.0) {
        // Offset from the pole u = c going left.
        auto g = [&](double s) { return f(c - s); };
        const double smax = c - umin;
        double l = smax / 2.0;
        int guard = 0;
        while (y0 != 0.0 && !(g(l) > 0.0) && ++guard < 2000) l /= 2.0;
        if (y0 == 0.0) l = 0.0;
        if (g(l) > 0.0 || y0 == 0.0) feet.push_back(eq.foot(c - bisect_offset(g, l, smax) - a2));
      }
    } else if (fmin < 1e-12) {
      feet.push_back(eq.foot(umin - a2));
    }
  }

  for (auto& foot : feet) foot = onto_ellipse(foot, a, b);
  return feet;
}

// ---------------------------------------------------------------------------

MinimizerSet saturated_circle(const Vec& e1, const Vec& e2, const ManifoldId& ambient, double distance,
                              const OracleOptions& options, std::string tag) {
  MinimizerSet out;
  out.distance = distance;
  out.saturated = true;
  out.family_tag = std::move(tag);
  for (int j = 0; j < options.cap; ++j) {
    const double s = 2.0 * kPi * j / options.cap;
    out.minimizers.push_back(ManifoldPoint{ambient, std::cos(s) * e1 + std::sin(s) * e2});
  }
  return out;
}

/// Unit vector orthogonal to e inside the coordinate block [begin, begin+len).
Vec orthogonal_in_block(const Vec& e, Eigen::Index begin, Eigen::Index len) {
  for (Eigen::Index j = 0; j < len; ++j) {
    Vec v = Vec::Zero(e.size());
    v(begin + j) = 1.0;
    v -= v.dot(e) * e;
    if (v.norm() > 0.5) return v / v.norm();
  }
  return Vec::Zero(e.size());
}

MinimizerSet dist_finite(const FinitePoints& fp, const ManifoldId& ambient, const ManifoldPoint& q,
                         const OracleOptions& options) {
  std::vector<Candidate> candidates;
  bool antipodal = false;
  ManifoldPoint antipodal_foot;
  for (const Vec& p : fp.points) {
    if (ambient.kind == ManifoldKind::flat_torus) {
      // Every lift p + s with s in {-1,0,1}^n is a distinct geodesic endpoint.
      const Eigen::Index n = p.size();
      Eigen::Index combos = 1;
      for (Eigen::Index i = 0; i < n; ++i) combos *= 3;
      for (Eigen::Index code = 0; code < combos; ++code) {
        Vec lift = p;
        Eigen::Index rest = code;
        for (Eigen::Index i = 0; i < n; ++i) {
          lift(i) += static_cast<double>(rest % 3) - 1.0;
          rest /= 3;
        }
        candidates.push_back({(q.coords - lift).norm(), ManifoldPoint{ambient, lift}});
      }
      continue;
    }
    ManifoldPoint m{ambient, p};
    const double d = ambient.kind == ManifoldKind::sphere ? sphere_angle(q.coords, p)
                                                          : (q.coords - p).norm();
    candidates.push_back({d, m});
  }
  MinimizerSet out = detail::collect_minimizers(std::move(candidates), options);
  if (ambient.kind == ManifoldKind::sphere) {
    // At the antipode of a foot the two arcs of every great circle through
    // both points tie, so the geodesics from that foot form a continuum
    // (two of them on S^1).
    for (const auto& m : out.minimizers) {
      if (2.0 * (kPi - out.distance) <= options.tie) {
        antipodal = true;
        antipodal_foot = m;
      }
    }
    if (antipodal) {
      if (ambient.n == 1) {
        out.minimizers.push_back(antipodal_foot);
      } else {
        out.saturated = true;
      }
      out.family_tag = "all geodesics from the antipodal foot";
    }
  }
  return out;
}

MinimizerSet dist_equator(int k, const ManifoldId& ambient, const ManifoldPoint& q,
                          const OracleOptions& options) {
  const Eigen::Index head_len = k + 1;
  const Vec head = q.coords.head(head_len);
  const double hn = head.norm();
  const double tn = q.coords.tail(q.coords.size() - head_len).norm();
  const double d = std::atan2(tn, hn);
  MinimizerSet out;
  out.distance = d;
  if (2.0 * hn <= options.tie) {
    Vec e1 = Vec::Zero(q.coords.size());
    if (hn > 0.0) e1.head(head_len) = head / hn; else e1(0) = 1.0;
    if (k == 0) {
      out.minimizers = {ManifoldPoint{ambient, e1}, ManifoldPoint{ambient, -e1}};
      return out;
    }
    return saturated_circle(e1, orthogonal_in_block(e1, 0, head_len), ambient, d, options,
                            "great sphere S^" + std::to_string(k));
  }
  Vec m = Vec::Zero(q.coords.size());
  m.head(head_len) = head / hn;
  out.minimizers.push_back(ManifoldPoint{ambient, m});
  if (k == 0) {
    // The other point of S^0 ties only near the cut; check explicitly.
    const double other = std::atan2(tn, -hn);
    if (other - d <= options.tie) out.minimizers.push_back(ManifoldPoint{ambient, -m});
  }
  return out;
}

MinimizerSet dist_ellipse(const Ellipse& e, const ManifoldId& ambient, const ManifoldPoint& q,
                          const OracleOptions& options) {
  std::vector<Candidate> candidates;
  for (const Vec& f : ellipse_candidates(e.a, e.b, q.coords(0), q.coords(1))) {
    candidates.push_back({(f - q.coords).norm(), ManifoldPoint{ambient, f}});
  }
  return detail::collect_minimizers(std::move(candidates), options);
}

MinimizerSet dist_orthogonal(const ManifoldId& ambient, const ManifoldPoint& q,
                             const OracleOptions& options) {
  const int n = ambient.n;
  const Mat a = q.matrix();
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double d = std::sqrt((s.array() - 1.0).square().sum());
  MinimizerSet out;
  out.distance = d;

  // Flipping the sign on a singular direction costs 2 sigma / d in distance;
  // directions that cost less than the tie tolerance count as null.
  int k = n;
  while (k > 0 && s(k - 1) <= options.tie * d / 2.0) --k;
  const int m = n - k;
  const Mat& u = svd.matrixU();
  const Mat& v = svd.matrixV();
  auto member = [&](const Mat& c) {
    Mat block = Mat::Identity(n, n);
    block.bottomRightCorner(m, m) = c;
    return ManifoldPoint::from_matrix(ambient, u * block * v.transpose());
  };
  if (m == 0) {
    out.minimizers.push_back(member(Mat(0, 0)));
    return out;
  }
  out.family_tag = "U(I_" + std::to_string(k) + " + O(" + std::to_string(m) + "))V^T";
  Mat flip = Mat::Identity(m, m);
  flip(m - 1, m - 1) = -1.0;
  out.minimizers.push_back(member(Mat::Identity(m, m)));
  out.minimizers.push_back(member(flip));
  if (m >= 2) {
    out.saturated = true;
    Rng rng(options.seed);
    while (static_cast<int>(out.minimizers.size()) < options.cap) {
      out.minimizers.push_back(member(random_orthogonal(rng, m)));
    }
  }
  return out;
}

MinimizerSet dist_special_orthogonal(const ManifoldId& ambient, const ManifoldPoint& q) {
  const Mat a = q.matrix();
  if (!(a.determinant() > 0.0)) {
    throw Error(ErrorCode::InvalidPoint, "glplus point must have positive determinant");
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  if (s(s.size() - 1) <= matfun::kNearSingularTol) {
    throw Error(ErrorCode::NearSingular, "glplus point is numerically singular");
  }
  MinimizerSet out;
  out.distance = std::sqrt(s.array().log().square().sum());
  out.minimizers.push_back(
      ManifoldPoint::from_matrix(ambient, svd.matrixU() * svd.matrixV().transpose()));
  return out;
}

MinimizerSet dist_upuq(const ManifoldId& ambient, const ManifoldPoint& q) {
  const CMat a = q.complex_matrix();
  const double defect = point_defect(q);
  if (!(defect <= 1e-9)) {
    throw Error(ErrorCode::MembershipViolation,
                "point is not in U(p,q) (defect " + std::to_string(defect) + ")");
  }
  const CMat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<CMat> eig((gram + gram.adjoint()) / 2.0);
  const Vec lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) {
    throw Error(ErrorCode::LogSpectrumViolation, "A^*A has a nonpositive eigenvalue");
  }
  const Vec half_log = 0.5 * lambda.array().log().matrix();
  const Vec inv_root = lambda.array().rsqrt().matrix();
  const CMat& v = eig.eigenvectors();
  MinimizerSet out;
  out.distance = half_log.norm();
  out.minimizers.push_back(ManifoldPoint::from_complex_matrix(
      ambient, a * v * inv_root.cast<Complex>().asDiagonal() * v.adjoint()));
  return out;
}

MinimizerSet dist_hopf(const ManifoldId& ambient, const ManifoldPoint& q, const OracleOptions& options) {
  const Vec& x = q.coords;
  const double r1 = x.head(2).norm();
  const double r2 = x.tail(2).norm();
  const double d1 = std::atan2(r2, r1);
  const double d2 = std::atan2(r1, r2);
  const double d = std::min(d1, d2);
  MinimizerSet out;
  out.distance = d;
  auto add_component = [&](bool first, double r) {
    Vec m = Vec::Zero(4);
    const Eigen::Index at = first ? 0 : 2;
    if (2.0 * r <= options.tie) {
      // The whole circle is equidistant.
      out.saturated = true;
      out.family_tag = first ? "circle N1" : "circle N2";
      for (int j = 0; j < options.cap / 2; ++j) {
        const double s = 4.0 * kPi * j / options.cap;
        m.setZero();
        m(at) = std::cos(s);
        m(at + 1) = std::sin(s);
        out.minimizers.push_back(ManifoldPoint{ambient, m});
      }
      return;
    }
    m.segment(at, 2) = x.segment(at, 2) / r;
    out.minimizers.push_back(ManifoldPoint{ambient, m});
  };
  if (d1 - d <= options.tie) add_component(true, r1);
  if (d2 - d <= options.tie) add_component(false, r2);
  return out;
}

MinimizerSet dist_fermat_n1(int d, const ManifoldId& ambient, const ManifoldPoint& q,
                            const OracleOptions& options) {
  const CVec z = detail::to_complex(q.coords);
  std::vector<Candidate> candidates;
  bool saturated = false;
  std::string tag;
  for (int k = 0; k < d; ++k) {
    const Complex xi = detail::fermat_root(k, d);
    // Component X_k = {(w, xi w) : |w| = 1/sqrt 2}; <q, (w, xi w)> is
    // Re((conj q1 + conj q2 xi) w), maximized at w = conj(c)/|c|/sqrt 2.
    const Complex c = std::conj(z(0)) + std::conj(z(1)) * xi;
    const double mag = std::abs(c);
    if (mag / std::sqrt(2.0) <= options.tie / 2.0) {
      saturated = true;
      tag = "component X_" + std::to_string(k);
      for (int j = 0; j < options.cap; ++j) {
        const Complex w = std::polar(1.0 / std::sqrt(2.0), 2.0 * kPi * j / options.cap);
        CVec m(2);
        m << w, xi * w;
        candidates.push_back({kPi / 2.0, ManifoldPoint{ambient, detail::from_complex(m)}});
      }
      continue;
    }
    const Complex w = std::conj(c) / mag / std::sqrt(2.0);
    CVec m(2);
    m << w, xi * w;
    const Vec mx = detail::from_complex(m);
    candidates.push_back({sphere_angle(q.coords, mx), ManifoldPoint{ambient, mx}});
  }
  MinimizerSet out = detail::collect_minimizers(std::move(candidates), options);
  if (saturated && std::abs(out.distance - kPi / 2.0) <= options.tie) {
    out.saturated = true;
    out.family_tag = tag;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Descriptor

Submanifold::Submanifold(ManifoldId ambient_id, SubmanifoldKind k)
    : ambient(ambient_id), kind(std::move(k)) {
  const ManifoldId& m = ambient;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FinitePoints>) {
          if (m.kind == ManifoldKind::glplus_left_inv || m.kind == ManifoldKind::upq) {
            unsupported(m, "a finite point set");
          }
          if (s.points.empty()) throw Error(ErrorCode::ParseError, "point set is empty");
          for (const Vec& p : s.points) validate_point(ManifoldPoint{m, p});
        } else if constexpr (std::is_same_v<T, EquatorSphere>) {
          if (m.kind != ManifoldKind::sphere) unsupported(m, "an equatorial sphere");
          if (s.k < 0 || s.k > m.n - 1) {
            throw Error(ErrorCode::ParseError, "equator:k needs 0 <= k <= n-1");
          }
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          if (!(m.kind == ManifoldKind::euclidean && m.n == 2)) unsupported(m, "an ellipse");
          if (!(s.a > s.b && s.b > 0.0)) throw Error(ErrorCode::ParseError, "ellipse needs a > b > 0");
        } else if constexpr (std::is_same_v<T, OrthogonalGroup>) {
          if (m.kind != ManifoldKind::matrix_space) unsupported(m, "O(n)");
        } else if constexpr (std::is_same_v<T, SpecialOrthogonal>) {
          if (m.kind != ManifoldKind::glplus_left_inv) unsupported(m, "SO(n)");
        } else if constexpr (std::is_same_v<T, UpUqSubgroup>) {
          if (m.kind != ManifoldKind::upq) unsupported(m, "U(p) x U(q)");
        } else if constexpr (std::is_same_v<T, HopfLink>) {
          if (!(m.kind == ManifoldKind::sphere && m.n == 3)) unsupported(m, "the Hopf link");
        } else if constexpr (std::is_same_v<T, FermatLift>) {
          if (!(m.kind == ManifoldKind::sphere && m.n % 2 == 1 && m.n >= 3)) {
            unsupported(m, "a Fermat lift (needs sphere:2n+1 with n >= 1)");
          }
          if (s.d < 2) throw Error(ErrorCode::ParseError, "fermat:d needs d >= 2");
        }
      },
      kind);
}

Submanifold Submanifold::parse(const ManifoldId& ambient, std::string_view text) {
  const auto [head, tail] = detail::split_once(text, ':');
  auto need_dim = [&](int n) {
    if (ambient.n != n) {
      throw Error(ErrorCode::UnsupportedAmbient, std::string(text) + " does not match " + ambient.to_string());
    }
  };
  if (head == "points") {
    if (tail.empty()) throw Error(ErrorCode::ParseError, "points:<file.json> needs a file");
    std::ifstream in{std::string(tail)};
    if (!in) throw Error(ErrorCode::IoError, "cannot open point file '" + std::string(tail) + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("point file: ") + e.what());
    }
    const nlohmann::json& list = doc.is_object() ? doc.at("points") : doc;
    FinitePoints fp;
    try {
      for (const auto& entry : list) {
        const auto values = entry.get<std::vector<double>>();
        fp.points.push_back(Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size())));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("point file: ") + e.what());
    }
    return Submanifold(ambient, fp);
  }
  if (head == "equator") return Submanifold(ambient, EquatorSphere{detail::parse_int(tail)});
  if (head == "ellipse") {
    const auto ab = detail::parse_double_list(tail);
    if (ab.size() != 2) throw Error(ErrorCode::ParseError, "ellipse expects 'ellipse:a,b'");
    return Submanifold(ambient, Ellipse{ab[0], ab[1]});
  }
  if (head == "orthogonal") {
    Submanifold s(ambient, OrthogonalGroup{});
    need_dim(detail::parse_int(tail));
    return s;
  }
  if (head == "specialorthogonal") {
    Submanifold s(ambient, SpecialOrthogonal{});
    need_dim(detail::parse_int(tail));
    return s;
  }
  if (head == "upuq") {
    Submanifold s(ambient, UpUqSubgroup{});
    const auto pq = detail::parse_int_list(tail);
    if (pq.size() != 2) throw Error(ErrorCode::ParseError, "upuq expects 'upuq:p,q'");
    if (pq[0] != ambient.p || pq[1] != ambient.q) {
      throw Error(ErrorCode::UnsupportedAmbient, std::string(text) + " does not match " + ambient.to_string());
    }
    return s;
  }
  if (head == "hopflink") {
    if (!tail.empty()) throw Error(ErrorCode::ParseError, "hopflink takes no parameters");
    return Submanifold(ambient, HopfLink{});
  }
  if (head == "fermat") return Submanifold(ambient, FermatLift{detail::parse_int(tail)});
  throw Error(ErrorCode::ParseError, "unknown submanifold '" + std::string(text) + "'");
}

std::string Submanifold::to_string() const {
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FinitePoints>) {
          return "points[" + std::to_string(s.points.size()) + "]";
        } else if constexpr (std::is_same_v<T, EquatorSphere>) {
          return "equator:" + std::to_string(s.k);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "ellipse:%g,%g", s.a, s.b);
          return buf;
        } else if constexpr (std::is_same_v<T, OrthogonalGroup>) {
          return "orthogonal:" + std::to_string(ambient.n);
        } else if constexpr (std::is_same_v<T, SpecialOrthogonal>) {
          return "specialorthogonal:" + std::to_string(ambient.n);
        } else if constexpr (std::is_same_v<T, UpUqSubgroup>) {
          return "upuq:" + std::to_string(ambient.p) + "," + std::to_string(ambient.q);
        } else if constexpr (std::is_same_v<T, HopfLink>) {
          return "hopflink";
        } else {
          return "fermat:" + std::to_string(s.d);
        }
      },
      kind);
}

int Submanifold::fermat_n() const { return (ambient.n - 1) / 2; }

bool Submanifold::closed_form() const {
  return !(std::holds_alternative<FermatLift>(kind) && fermat_n() != 1);
}

// ---------------------------------------------------------------------------

double ambient_distance(const ManifoldPoint& a, const ManifoldPoint& b) {
  return riem_distance(a, b);
}

MinimizerSet dist_to(const Submanifold& sub, const ManifoldPoint& q, const OracleOptions& options) {
  if (!(q.manifold == sub.ambient)) {
    throw Error(ErrorCode::UnsupportedAmbient,
                "query point lives on " + q.manifold.to_string() + ", N is in " + sub.ambient.to_string());
  }
  validate_point(q);
  const ManifoldId& m = sub.ambient;
  return std::visit(
      [&](const auto& s) -> MinimizerSet {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FinitePoints>) {
          return dist_finite(s, m, q, options);
        } else if constexpr (std::is_same_v<T, EquatorSphere>) {
          return dist_equator(s.k, m, q, options);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return dist_ellipse(s, m, q, options);
        } else if constexpr (std::is_same_v<T, OrthogonalGroup>) {
          return dist_orthogonal(m, q, options);
        } else if constexpr (std::is_same_v<T, SpecialOrthogonal>) {
          return dist_special_orthogonal(m, q);
        } else if constexpr (std::is_same_v<T, UpUqSubgroup>) {
          return dist_upuq(m, q);
        } else if constexpr (std::is_same_v<T, HopfLink>) {
          return dist_hopf(m, q, options);
        } else {
          if (sub.fermat_n() == 1) return dist_fermat_n1(s.d, m, q, options);
          return multistart_dist(sub, q, options);
        }
      },
      sub.kind);
}

double membership_defect(const Submanifold& sub, const ManifoldPoint& p) {
  const Vec& x = p.coords;
  if (x.size() != sub.ambient.coord_size()) return std::numeric_limits<double>::infinity();
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FinitePoints>) {
          double best = std::numeric_limits<double>::infinity();
          for (const Vec& pt : s.points) best = std::min(best, (pt - x).norm());
          return best;
        } else if constexpr (std::is_same_v<T, EquatorSphere>) {
          return std::abs(x.norm() - 1.0) + x.tail(x.size() - s.k - 1).norm();
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return std::abs(std::pow(x(0) / s.a, 2) + std::pow(x(1) / s.b, 2) - 1.0);
        } else if constexpr (std::is_same_v<T, OrthogonalGroup>) {
          const Mat a = p.matrix();
          return (a.transpose() * a - Mat::Identity(a.rows(), a.cols())).norm();
        } else if constexpr (std::is_same_v<T, SpecialOrthogonal>) {
          const Mat a = p.matrix();
          const double det = a.determinant();
          return (a.transpose() * a - Mat::Identity(a.rows(), a.cols())).norm() +
                 (det > 0.0 ? 0.0 : 1.0);
        } else if constexpr (std::is_same_v<T, UpUqSubgroup>) {
          const CMat a = p.complex_matrix();
          const int pp = sub.ambient.p, qq = sub.ambient.q;
          return a.topRightCorner(pp, qq).norm() + a.bottomLeftCorner(qq, pp).norm() +
                 (a.adjoint() * a - CMat::Identity(a.rows(), a.cols())).norm();
        } else if constexpr (std::is_same_v<T, HopfLink>) {
          return std::abs(x.norm() - 1.0) + std::min(x.head(2).norm(), x.tail(2).norm());
        } else {
          return std::abs(x.norm() - 1.0) + std::abs(detail::fermat_value(detail::to_complex(x), s.d));
        }
      },
      sub.kind);
}

ManifoldPoint sample_point(const Submanifold& sub, Rng& rng) {
  const ManifoldId& m = sub.ambient;
  return std::visit(
      [&](const auto& s) -> ManifoldPoint {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FinitePoints>) {
          return ManifoldPoint{m, s.points[rng.integer(0, static_cast<int>(s.points.size()) - 1)]};
        } else if constexpr (std::is_same_v<T, EquatorSphere>) {
          Vec x = Vec::Zero(m.n + 1);
          x.head(s.k + 1) = rng.unit_vector(s.k + 1);
          return ManifoldPoint{m, x};
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          const double theta = rng.uniform(0.0, 2.0 * kPi);
          Vec x(2);
          x << s.a * std::cos(theta), s.b * std::sin(theta);
          return ManifoldPoint{m, x};
        } else if constexpr (std::is_same_v<T, OrthogonalGroup>) {
          return ManifoldPoint::from_matrix(m, random_orthogonal(rng, m.n));
        } else if constexpr (std::is_same_v<T, SpecialOrthogonal>) {
          Mat q = random_orthogonal(rng, m.n);
          if (q.determinant() < 0.0) q.col(0) = -q.col(0);
          return ManifoldPoint::from_matrix(m, q);
        } else if constexpr (std::is_same_v<T, UpUqSubgroup>) {
          CMat u = CMat::Zero(m.n, m.n);
          u.topLeftCorner(m.p, m.p) = random_unitary(rng, m.p);
          u.bottomRightCorner(m.q, m.q) = random_unitary(rng, m.q);
          return ManifoldPoint::from_complex_matrix(m, u);
        } else if constexpr (std::is_same_v<T, HopfLink>) {
          const bool first = rng.uniform() < 0.5;
          const double s_ang = rng.uniform(0.0, 2.0 * kPi);
          Vec x = Vec::Zero(4);
          x(first ? 0 : 2) = std::cos(s_ang);
          x(first ? 1 : 3) = std::sin(s_ang);
          return ManifoldPoint{m, x};
        } else {
          if (sub.fermat_n() == 1) {
            const int k = rng.integer(0, s.d - 1);
            const Complex w = std::polar(1.0 / std::sqrt(2.0), rng.uniform(0.0, 2.0 * kPi));
            CVec z(2);
            z << w, detail::fermat_root(k, s.d) * w;
            return ManifoldPoint{m, detail::from_complex(z)};
          }
          for (;;) {
            const Vec x = detail::fermat_retract(rng.unit_vector(m.n + 1), s.d);
            ManifoldPoint p{m, x};
            if (membership_defect(sub, p) <= 1e-12) return p;
          }
        }
      },
      sub.kind);
}

std::vector<TangentVector> unit_normal_sample(const Submanifold& sub, const ManifoldPoint& p,
                                              std::uint64_t seed, int count) {
  const double defect = membership_defect(sub, p);
  if (!(defect <= kMembershipTol)) {
    throw Error(ErrorCode::NotOnSubmanifold,
                "base point is off N (defect " + std::to_string(defect) + ")");
  }
  const ManifoldId& m = sub.ambient;
  const Vec& x = p.coords;
  Rng rng(seed);
  std::vector<TangentVector> out;
  out.reserve(count);

  auto tangent_to_sphere = [&](Vec v) {
    if (m.kind == ManifoldKind::sphere) v -= v.dot(x) * x;
    return v;
  };

  for (int i = 0; i < count; ++i) {
    Vec v = std::visit(
        [&](const auto& s) -> Vec {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, FinitePoints>) {
            for (;;) {
              Vec g = tangent_to_sphere(rng.gaussian(x.size()));
              if (g.norm() > 1e-8) return g / g.norm();
            }
          } else if constexpr (std::is_same_v<T, EquatorSphere>) {
            Vec g = Vec::Zero(x.size());
            g.tail(x.size() - s.k - 1) = rng.unit_vector(x.size() - s.k - 1);
            return g;
          } else if constexpr (std::is_same_v<T, Ellipse>) {
            Vec g(2);
            g << x(0) / (s.a * s.a), x(1) / (s.b * s.b);
            g /= g.norm();
            return rng.uniform() < 0.5 ? Vec(-g) : g;
          } else if constexpr (std::is_same_v<T, OrthogonalGroup> || std::is_same_v<T, SpecialOrthogonal>) {
            const Mat g = rng.gaussian(m.n, m.n);
            Mat w = (g + g.transpose()) / 2.0;
            w /= w.norm();
            return flatten(Mat(p.matrix() * w));
          } else if constexpr (std::is_same_v<T, UpUqSubgroup>) {
            const CMat b = rng.complex_gaussian(m.p, m.q);
            CMat y = CMat::Zero(m.n, m.n);
            y.topRightCorner(m.p, m.q) = b;
            y.bottomLeftCorner(m.q, m.p) = b.adjoint();
            y /= y.norm();
            return flatten(CMat(p.complex_matrix() * y));
          } else if constexpr (std::is_same_v<T, HopfLink>) {
            const bool on_first = x.head(2).norm() > x.tail(2).norm();
            const double s_ang = rng.uniform(0.0, 2.0 * kPi);
            Vec g = Vec::Zero(4);
            g(on_first ? 2 : 0) = std::cos(s_ang);
            g(on_first ? 3 : 1) = std::sin(s_ang);
            return g;
          } else {
            // Normal plane spanned by conj(z^(d-1)) and i conj(z^(d-1)); both
            // are already orthogonal to z and iz.
            const CVec z = detail::to_complex(x);
            CVec g = detail::fermat_normal(z, s.d);
            g /= g.norm();
            const double s_ang = rng.uniform(0.0, 2.0 * kPi);
            return detail::from_complex(Complex(std::cos(s_ang), std::sin(s_ang)) * g);
          }
        },
        sub.kind);
    out.push_back(TangentVector{p, v});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace detail {

MinimizerSet collect_minimizers(std::vector<Candidate> candidates, const OracleOptions& options) {
  if (candidates.empty()) throw Error(ErrorCode::OracleFailure, "no candidate minimizers");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& l, const Candidate& r) { return l.distance < r.distance; });
  MinimizerSet out;
  out.distance = candidates.front().distance;
  for (const Candidate& c : candidates) {
    if (c.distance - out.distance > options.tie) break;
    bool merged = false;
    for (const auto& rep : out.minimizers) {
      if ((rep.coords - c.point.coords).norm() < options.cluster) {
        merged = true;
        break;
      }
    }
    if (merged) continue;
    if (static_cast<int>(out.minimizers.size()) >= options.cap) {
      out.saturated = true;
      break;
    }
    out.minimizers.push_back(c.point);
  }
  return out;
}

Complex fermat_value(const CVec& z, int d) {
  Complex sum = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) sum += std::pow(z(j), d);
  return sum;
}

CVec fermat_normal(const CVec& z, int d) {
  CVec g(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) g(j) = std::conj(std::pow(z(j), d - 1));
  return g;
}

Vec fermat_retract(const Vec& x, int d) {
  CVec z = to_complex(x);
  for (int it = 0; it < 100; ++it) {
    const Complex f = fermat_value(z, d);
    if (std::abs(f) <= 1e-15 * std::pow(z.norm(), d)) break;
    // Minimal-norm Newton step for the holomorphic equation F(z) = 0:
    // J = d z^(d-1), delta = -conj(J) F / |J|^2.
    const CVec jconj = static_cast<double>(d) * fermat_normal(z, d);
    const double jn = jconj.squaredNorm();
    if (jn == 0.0) break;
    z -= jconj * (f / jn);
  }
  return from_complex(z / z.norm());
}

Complex fermat_root(int k, int d) { return std::polar(1.0, kPi * (2.0 * k + 1.0) / d); }

}  // namespace detail
}  // namespace cutloci
