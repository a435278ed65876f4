#include "cutloci/manifolds.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cutloci/error.hpp"
#include "parse_util.hpp"

namespace cutloci {
namespace {

constexpr double kGroupTol = 1e-9;

ManifoldId make(ManifoldKind kind, int n) {
  if (n < 1) throw Error(ErrorCode::ParseError, "manifold dimension must be >= 1");
  ManifoldId id;
  id.kind = kind;
  id.n = n;
  return id;
}

void require_same(const ManifoldId& a, const ManifoldId& b, const char* what) {
  if (!(a == b)) {
    throw Error(ErrorCode::BaseMismatch, std::string(what) + ": points on " + a.to_string() +
                                             " and " + b.to_string());
  }
}

void require_length(const ManifoldId& m, const Vec& v, const char* what) {
  if (v.size() != m.coord_size()) {
    throw Error(ErrorCode::InvalidPoint, std::string(what) + ": expected " +
                                             std::to_string(m.coord_size()) +
                                             " coordinates for " + m.to_string() + ", got " +
                                             std::to_string(v.size()));
  }
}

/// True when U is block diagonal with unitary p x p and q x q blocks.
bool in_compact_upq(const CMat& u, int p, int q) {
  const int n = p + q;
  const double off = u.topRightCorner(p, q).norm() + u.bottomLeftCorner(q, p).norm();
  const double unit = (u.adjoint() * u - CMat::Identity(n, n)).norm();
  return off <= kGroupTol && unit <= kGroupTol;
}

}  // namespace

ManifoldId ManifoldId::euclidean(int n) { return make(ManifoldKind::euclidean, n); }
ManifoldId ManifoldId::sphere(int n) { return make(ManifoldKind::sphere, n); }
ManifoldId ManifoldId::flat_torus(int n) { return make(ManifoldKind::flat_torus, n); }
ManifoldId ManifoldId::matrix_space(int n) { return make(ManifoldKind::matrix_space, n); }
ManifoldId ManifoldId::glplus(int n) { return make(ManifoldKind::glplus_left_inv, n); }
ManifoldId ManifoldId::upq(int p, int q) {
  if (p < 1 || q < 1) throw Error(ErrorCode::ParseError, "upq needs p >= 1 and q >= 1");
  ManifoldId id = make(ManifoldKind::upq, p + q);
  id.p = p;
  id.q = q;
  return id;
}

ManifoldId ManifoldId::parse(std::string_view text) {
  const auto [head, tail] = detail::split_once(text, ':');
  if (tail.empty()) throw Error(ErrorCode::ParseError, "manifold '" + std::string(text) + "' lacks ':<dim>'");
  if (head == "upq") {
    const auto dims = detail::parse_int_list(tail);
    if (dims.size() != 2) throw Error(ErrorCode::ParseError, "upq expects 'upq:p,q'");
    return upq(dims[0], dims[1]);
  }
  const int n = detail::parse_int(tail);
  if (head == "euclidean") return euclidean(n);
  if (head == "sphere") return sphere(n);
  if (head == "torus") return flat_torus(n);
  if (head == "matspace") return matrix_space(n);
  if (head == "glplus") return glplus(n);
  throw Error(ErrorCode::ParseError, "unknown manifold kind '" + std::string(head) + "'");
}

std::string ManifoldId::to_string() const {
  switch (kind) {
    case ManifoldKind::euclidean: return "euclidean:" + std::to_string(n);
    case ManifoldKind::sphere: return "sphere:" + std::to_string(n);
    case ManifoldKind::flat_torus: return "torus:" + std::to_string(n);
    case ManifoldKind::matrix_space: return "matspace:" + std::to_string(n);
    case ManifoldKind::glplus_left_inv: return "glplus:" + std::to_string(n);
    case ManifoldKind::upq: return "upq:" + std::to_string(p) + "," + std::to_string(q);
  }
  return "unknown";
}

int ManifoldId::coord_size() const {
  switch (kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::flat_torus: return n;
    case ManifoldKind::sphere: return n + 1;
    case ManifoldKind::matrix_space:
    case ManifoldKind::glplus_left_inv: return n * n;
    case ManifoldKind::upq: return 2 * n * n;
  }
  return 0;
}

int ManifoldId::matrix_size() const { return is_matrix_kind() ? n : 0; }

bool ManifoldId::is_matrix_kind() const {
  return kind == ManifoldKind::matrix_space || kind == ManifoldKind::glplus_left_inv ||
         kind == ManifoldKind::upq;
}

Vec flatten(const Mat& a) {
  Vec v(a.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

Vec flatten(const CMat& a) {
  Vec v(2 * a.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Eigen::Index k = 2 * (i * a.cols() + j);
      v(k) = a(i, j).real();
      v(k + 1) = a(i, j).imag();
    }
  return v;
}

Mat unflatten(const Vec& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw Error(ErrorCode::ShapeMismatch, "unflatten: size mismatch");
  }
  Mat a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = v(i * cols + j);
  return a;
}

CMat unflatten_complex(const Vec& v, int rows, int cols) {
  if (v.size() != 2 * static_cast<Eigen::Index>(rows) * cols) {
    throw Error(ErrorCode::ShapeMismatch, "unflatten_complex: size mismatch");
  }
  CMat a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Eigen::Index k = 2 * (i * cols + j);
      a(i, j) = Complex(v(k), v(k + 1));
    }
  return a;
}

Mat signature_matrix(int p, int q) {
  Mat s = Mat::Identity(p + q, p + q);
  s.bottomRightCorner(q, q) *= -1.0;
  return s;
}

Mat ManifoldPoint::matrix() const { return unflatten(coords, manifold.n, manifold.n); }
CMat ManifoldPoint::complex_matrix() const { return unflatten_complex(coords, manifold.n, manifold.n); }

ManifoldPoint ManifoldPoint::from_matrix(const ManifoldId& m, const Mat& a) {
  return ManifoldPoint{m, flatten(a)};
}

ManifoldPoint ManifoldPoint::from_complex_matrix(const ManifoldId& m, const CMat& a) {
  return ManifoldPoint{m, flatten(a)};
}

Mat TangentVector::matrix() const { return unflatten(vec, base.manifold.n, base.manifold.n); }
CMat TangentVector::complex_matrix() const {
  return unflatten_complex(vec, base.manifold.n, base.manifold.n);
}

TangentVector TangentVector::from_matrix(const ManifoldPoint& base, const Mat& a) {
  return TangentVector{base, flatten(a)};
}

TangentVector TangentVector::from_complex_matrix(const ManifoldPoint& base, const CMat& a) {
  return TangentVector{base, flatten(a)};
}

double point_defect(const ManifoldPoint& p) {
  const ManifoldId& m = p.manifold;
  if (p.coords.size() != m.coord_size()) return std::numeric_limits<double>::infinity();
  if (!p.coords.allFinite()) return std::numeric_limits<double>::infinity();
  switch (m.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::matrix_space: return 0.0;
    case ManifoldKind::sphere: return std::abs(p.coords.norm() - 1.0);
    case ManifoldKind::flat_torus: {
      double worst = 0.0;
      for (Eigen::Index i = 0; i < p.coords.size(); ++i) {
        const double x = p.coords(i);
        if (x < 0.0) worst = std::max(worst, -x);
        if (x >= 1.0) worst = std::max(worst, x - 1.0 + std::numeric_limits<double>::epsilon());
      }
      return worst;
    }
    case ManifoldKind::glplus_left_inv: {
      const double det = p.matrix().determinant();
      return det > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    case ManifoldKind::upq: {
      const CMat a = p.complex_matrix();
      const Mat s = signature_matrix(m.p, m.q);
      return (a.adjoint() * s.cast<Complex>() * a - s.cast<Complex>()).norm();
    }
  }
  return 0.0;
}

void validate_point(const ManifoldPoint& p) {
  require_length(p.manifold, p.coords, "validate_point");
  const double defect = point_defect(p);
  const double tol = p.manifold.kind == ManifoldKind::sphere ? 1e-10 : kGroupTol;
  if (!(defect <= tol)) {
    throw Error(ErrorCode::InvalidPoint,
                "point violates the invariants of " + p.manifold.to_string() +
                    " (defect " + std::to_string(defect) + ")");
  }
}

ManifoldPoint exp_map(const TangentVector& v, double t) {
  const ManifoldPoint& p = v.base;
  const ManifoldId& m = p.manifold;
  require_length(m, p.coords, "exp_map");
  require_length(m, v.vec, "exp_map");
  if (t == 0.0) return p;

  switch (m.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::matrix_space: return ManifoldPoint{m, p.coords + t * v.vec};
    case ManifoldKind::sphere: {
      const double speed = v.vec.norm();
      if (speed == 0.0) return p;
      const double angle = speed * t;
      Vec x = p.coords * std::cos(angle) + (v.vec / speed) * std::sin(angle);
      return ManifoldPoint{m, x / x.norm()};
    }
    case ManifoldKind::flat_torus: {
      Vec x = p.coords + t * v.vec;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        x(i) -= std::floor(x(i));
        if (x(i) >= 1.0) x(i) = 0.0;
      }
      return ManifoldPoint{m, x};
    }
    case ManifoldKind::glplus_left_inv: {
      const Mat b = p.matrix();
      const int n = m.n;
      if ((b.transpose() * b - Mat::Identity(n, n)).norm() > kGroupTol || b.determinant() <= 0.0) {
        throw Error(ErrorCode::UnsupportedGeodesic,
                    "glplus geodesics are available only through points of SO(n)");
      }
      const Mat w = b.transpose() * v.matrix();
      if ((w - w.transpose()).norm() > kGroupTol * std::max(1.0, w.norm())) {
        throw Error(ErrorCode::UnsupportedGeodesic,
                    "glplus geodesics need a direction B*W with W symmetric");
      }
      const Mat ws = (w + w.transpose()) / 2.0;
      return ManifoldPoint::from_matrix(m, b * matfun::mat_exp<double>(t * ws));
    }
    case ManifoldKind::upq: {
      const CMat u = p.complex_matrix();
      if (!in_compact_upq(u, m.p, m.q)) {
        throw Error(ErrorCode::UnsupportedGeodesic,
                    "upq geodesics are available only through points of U(p) x U(q)");
      }
      const CMat y = u.adjoint() * v.complex_matrix();
      const CMat s = signature_matrix(m.p, m.q).cast<Complex>();
      const double scale = std::max(1.0, y.norm());
      if ((y.adjoint() * s + s * y).norm() > kGroupTol * scale) {
        throw Error(ErrorCode::UnsupportedGeodesic, "direction is not in the Lie algebra u(p,q)");
      }
      const double diag_blocks = y.topLeftCorner(m.p, m.p).norm() + y.bottomRightCorner(m.q, m.q).norm();
      const double off_blocks = y.topRightCorner(m.p, m.q).norm() + y.bottomLeftCorner(m.q, m.p).norm();
      if (diag_blocks > kGroupTol * scale && off_blocks > kGroupTol * scale) {
        throw Error(ErrorCode::UnsupportedGeodesic,
                    "mixed directions are not geodesic; use the n-part or the u(p)+u(q) part");
      }
      return ManifoldPoint::from_complex_matrix(m, u * matfun::mat_exp<Complex>(Complex(t) * y));
    }
  }
  throw Error(ErrorCode::UnsupportedGeodesic, "unknown manifold kind");
}

double riem_distance(const ManifoldPoint& a, const ManifoldPoint& b) {
  require_same(a.manifold, b.manifold, "riem_distance");
  const ManifoldId& m = a.manifold;
  require_length(m, a.coords, "riem_distance");
  require_length(m, b.coords, "riem_distance");
  switch (m.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::matrix_space: return (a.coords - b.coords).norm();
    case ManifoldKind::sphere:
      // Same value as arccos(<a,b>) on unit vectors, without the loss of
      // accuracy near 0 and pi.
      return 2.0 * std::atan2((a.coords - b.coords).norm(), (a.coords + b.coords).norm());
    case ManifoldKind::flat_torus: {
      const Eigen::Index n = a.coords.size();
      Vec diff = a.coords - b.coords;
      // Per-axis minimum over shifts {-1,0,1} equals the minimum over all
      // shift vectors in {-1,0,1}^n because the squared norm separates.
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (double s : {-1.0, 0.0, 1.0}) best = std::min(best, std::abs(diff(i) + s));
        sum += best * best;
      }
      return std::sqrt(sum);
    }
    case ManifoldKind::glplus_left_inv:
    case ManifoldKind::upq:
      throw Error(ErrorCode::UnsupportedDistance,
                  "point-to-point distance is not available on " + m.to_string());
  }
  throw Error(ErrorCode::UnsupportedDistance, "unknown manifold kind");
}

double inner(const TangentVector& u, const TangentVector& v) {
  require_same(u.base.manifold, v.base.manifold, "inner");
  if (u.base.coords.size() != v.base.coords.size() ||
      (u.base.coords - v.base.coords).norm() > 1e-12 * std::max(1.0, u.base.coords.norm())) {
    throw Error(ErrorCode::BaseMismatch, "inner: tangent vectors at different base points");
  }
  const ManifoldId& m = u.base.manifold;
  require_length(m, u.vec, "inner");
  require_length(m, v.vec, "inner");
  switch (m.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::sphere:
    case ManifoldKind::flat_torus:
    case ManifoldKind::matrix_space: return u.vec.dot(v.vec);
    case ManifoldKind::glplus_left_inv: {
      const auto lu = u.base.matrix().partialPivLu();
      const Mat x = lu.solve(u.matrix());
      const Mat y = lu.solve(v.matrix());
      return (x.array() * y.array()).sum();
    }
    case ManifoldKind::upq: {
      const auto lu = u.base.complex_matrix().partialPivLu();
      const CMat x = lu.solve(u.complex_matrix());
      const CMat y = lu.solve(v.complex_matrix());
      return (x.array().conjugate() * y.array()).sum().real();
    }
  }
  return 0.0;
}

double norm(const TangentVector& v) { return std::sqrt(std::max(0.0, inner(v, v))); }

double diameter(const ManifoldId& m) {
  switch (m.kind) {
    case ManifoldKind::sphere: return std::numbers::pi;
    case ManifoldKind::flat_torus: return std::sqrt(static_cast<double>(m.n)) / 2.0;
    default: return std::numeric_limits<double>::infinity();
  }
}

}  // namespace cutloci
