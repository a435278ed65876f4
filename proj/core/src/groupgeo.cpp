#include "cutloci/groupgeo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cutloci/error.hpp"

namespace cutloci::groupgeo {
namespace {

constexpr double kMembershipTol = 1e-9;
constexpr double kNBlockTol = 1e-8;
constexpr int kBlockSeriesMaxTerms = 20000;

void require_square(const Mat& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + " needs a nonempty square matrix");
  }
}

void require_upq_shape(const CMat& a, int p, int q) {
  if (p < 1 || q < 1 || a.rows() != p + q || a.cols() != p + q) {
    throw Error(ErrorCode::ShapeMismatch, "expected a " + std::to_string(p + q) + "x" + std::to_string(p + q) +
                                              " matrix for U(" + std::to_string(p) + "," + std::to_string(q) + ")");
  }
}

void require_invertible(const Mat& a, const char* what) {
  const Vec s = matfun::svd(a).singular_values;
  if (s(s.size() - 1) <= matfun::kNearSingularTol * std::max(1.0, s(0))) {
    throw Error(ErrorCode::NearSingular, std::string(what) + ": smallest singular value " +
                                             std::to_string(s(s.size() - 1)));
  }
}

void require_member(const CMat& a, int p, int q) {
  const double defect = upq_membership(a, p, q);
  if (!(defect <= kMembershipTol * std::max(1.0, a.squaredNorm()))) {
    throw Error(ErrorCode::MembershipViolation, "not in U(" + std::to_string(p) + "," + std::to_string(q) +
                                                    "): defect " + std::to_string(defect));
  }
}

CMat signature(int p, int q) {
  CMat s = CMat::Identity(p + q, p + q);
  s.bottomRightCorner(q, q) *= -1.0;
  return s;
}

/// A (sqrt(A^T A))^{-1} through the SVD: U V^T.
Mat orthogonal_factor(const Mat& a) { return matfun::polar(a).orthogonal_factor; }

Mat log_sqrt_gram(const Mat& a) {
  const matfun::Svd s = matfun::svd(a);
  return s.v * s.singular_values.array().log().matrix().asDiagonal() * s.v.transpose();
}

double left_invariant_speed(const Mat& a, double t, double h) {
  const Mat g = geodesic_to_SO(a, t);
  const Mat dg = (geodesic_to_SO(a, t + h) - geodesic_to_SO(a, t - h)) / (2.0 * h);
  return g.partialPivLu().solve(dg).norm();
}

}  // namespace

Mat flow_to_orthogonal(const Mat& a, double t) {
  require_square(a, "flow_to_orthogonal");
  require_invertible(a, "flow_to_orthogonal");
  const double e = std::exp(-2.0 * t);
  return e * a + (1.0 - e) * orthogonal_factor(a);
}

double flow_ode_residual(const Mat& a, double t, double h) {
  const Mat g = flow_to_orthogonal(a, t);
  const Mat dg = (flow_to_orthogonal(a, t + h) - flow_to_orthogonal(a, t - h)) / (2.0 * h);
  const Mat rhs = -2.0 * g + 2.0 * matfun::grad_trace_sqrt(g);
  return (dg - rhs).norm();
}

double flow_gram_defect(const Mat& a, double t) {
  const Mat g = flow_to_orthogonal(a, t);
  const double e = std::exp(-2.0 * t);
  const Mat s = matfun::polar(a).psd_factor;
  const Mat m = s * e + (1.0 - e) * Mat::Identity(a.rows(), a.cols());
  return (g.transpose() * g - m * m).norm();
}

Mat hessian_normal_check(const Mat& q, double h) {
  require_square(q, "hessian_normal_check");
  const int n = static_cast<int>(q.rows());
  // Orthonormal basis of symmetric matrices: E_ii and (E_ij + E_ji)/sqrt 2.
  std::vector<Mat> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat w = Mat::Zero(n, n);
      if (i == j) {
        w(i, i) = 1.0;
      } else {
        w(i, j) = w(j, i) = 1.0 / std::sqrt(2.0);
      }
      basis.push_back(q * w);
    }
  const auto f = [](const Mat& x) {
    const Vec s = matfun::svd(x).singular_values;
    return (s.array() - 1.0).square().sum();
  };
  const double f0 = f(q);
  const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
  Mat hess(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    hess(i, i) = (f(q + h * basis[i]) - 2.0 * f0 + f(q - h * basis[i])) / (h * h);
    for (Eigen::Index j = 0; j < i; ++j) {
      const Mat sum = basis[i] + basis[j];
      const Mat diff = basis[i] - basis[j];
      const double v = (f(q + h * sum) - f(q + h * diff) - f(q - h * diff) + f(q - h * sum)) / (4.0 * h * h);
      hess(i, j) = hess(j, i) = v;
    }
  }
  return hess;
}

Mat geodesic_to_SO(const Mat& a, double t) {
  require_square(a, "geodesic_to_SO");
  require_invertible(a, "geodesic_to_SO");
  if (a.determinant() <= 0.0) {
    throw Error(ErrorCode::InvalidPoint, "geodesic_to_SO needs det A > 0");
  }
  return orthogonal_factor(a) * matfun::mat_exp<double>(t * log_sqrt_gram(a));
}

double geodesic_to_SO_length(const Mat& a, int intervals) {
  const int m = std::max(2, intervals + intervals % 2);
  const double h = 1e-5;
  double total = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double t = static_cast<double>(i) / m;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    total += w * left_invariant_speed(a, t, h);
  }
  return total / (3.0 * m);
}

double geodesic_to_SO_speed_variation(const Mat& a, int samples) {
  const double h = 1e-5;
  const double base = left_invariant_speed(a, 0.0, h);
  double worst = 0.0;
  for (int i = 1; i <= samples; ++i) {
    worst = std::max(worst, std::abs(left_invariant_speed(a, static_cast<double>(i) / samples, h) - base));
  }
  return worst;
}

double UpqBlockDefects::max() const { return std::max({relation, aa, ab, bb}); }

double upq_membership(const CMat& a, int p, int q) {
  require_upq_shape(a, p, q);
  const CMat s = signature(p, q);
  return (a.adjoint() * s * a - s).norm();
}

UpqBlockDefects upq_block_identities(const CMat& a, int p, int q) {
  require_upq_shape(a, p, q);
  const CMat A = a.topLeftCorner(p, p);
  const CMat B = a.topRightCorner(p, q);
  const CMat C = a.bottomLeftCorner(q, p);
  const CMat D = a.bottomRightCorner(q, q);
  UpqBlockDefects r;
  r.relation = upq_membership(a, p, q);
  r.aa = (A.adjoint() * A - C.adjoint() * C - CMat::Identity(p, p)).norm();
  r.ab = (A.adjoint() * B - C.adjoint() * D).norm();
  r.bb = (B.adjoint() * B - D.adjoint() * D + CMat::Identity(q, q)).norm();
  return r;
}

CMat upq_inverse_closed_form(const CMat& a, int p, int q) {
  require_upq_shape(a, p, q);
  require_member(a, p, q);
  const CMat A = a.topLeftCorner(p, p);
  const CMat B = a.topRightCorner(p, q);
  const CMat x = A.partialPivLu().solve(B);  // A^{-1} B
  CMat r = CMat::Identity(p + q, p + q);
  r.topRightCorner(p, q) = -x;
  r.bottomLeftCorner(q, p) = -x.adjoint();  // B^* (A^*)^{-1}
  return r / 2.0;
}

UpqDecomposition upq_decompose(const CMat& a, int p, int q) {
  require_upq_shape(a, p, q);
  require_member(a, p, q);
  CMat y;
  try {
    y = 0.5 * matfun::principal_log<Complex>(CMat(a.adjoint() * a), matfun::LogMethod::eigen);
  } catch (const Error& e) {
    throw Error(ErrorCode::LogSpectrumViolation, e.what());
  }
  const double diag_defect = std::hypot(y.topLeftCorner(p, p).norm(), y.bottomRightCorner(q, q).norm());
  if (diag_defect > kNBlockTol * std::max(1.0, y.norm())) {
    throw Error(ErrorCode::LogSpectrumViolation,
                "1/2 log(A^*A) has diagonal blocks of size " + std::to_string(diag_defect));
  }
  y.topLeftCorner(p, p).setZero();
  y.bottomRightCorner(q, q).setZero();
  y = (y + y.adjoint()) / 2.0;
  UpqDecomposition out;
  out.n_part = y;
  out.unitary_part = a * matfun::mat_exp<Complex>(CMat(-y));
  out.source = a;
  return out;
}

double dist_upq(const CMat& a, int p, int q) { return upq_decompose(a, p, q).n_part.norm(); }

CMat upq_n_part_series(const CMat& a, int p, int q) {
  require_upq_shape(a, p, q);
  require_member(a, p, q);
  const CMat A = a.topLeftCorner(p, p);
  const CMat B = a.topRightCorner(p, q);
  const CMat t = A.partialPivLu().solve(B);
  CMat x = CMat::Zero(p + q, p + q);
  x.topRightCorner(p, q) = t;
  x.bottomLeftCorner(q, p) = t.adjoint();
  const CMat x2 = x * x;
  CMat power = x;
  CMat sum = x;
  for (int m = 1; m < kBlockSeriesMaxTerms; ++m) {
    power = power * x2;
    const CMat term = power / static_cast<double>(2 * m + 1);
    sum += term;
    if (term.norm() <= 1e-16 * std::max(1.0, sum.norm())) return sum;
  }
  throw Error(ErrorCode::NoConvergence, "block series for the n part did not converge");
}

CMat upq_block_exp(const CMat& y, int p, int q) {
  require_upq_shape(y, p, q);
  const CMat b = y.topRightCorner(p, q);
  Eigen::JacobiSVD<CMat> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMat& u = svd.matrixU();  // p x p
  const CMat& v = svd.matrixV();  // q x q
  const Vec& s = svd.singularValues();
  const Eigen::Index r = s.size();
  Vec ch_p = Vec::Ones(p), ch_q = Vec::Ones(q);
  CMat sh = CMat::Zero(p, q);
  for (Eigen::Index i = 0; i < r; ++i) {
    ch_p(i) = std::cosh(s(i));
    ch_q(i) = std::cosh(s(i));
    sh(i, i) = std::sinh(s(i));
  }
  CMat e(p + q, p + q);
  e.topLeftCorner(p, p) = u * ch_p.cast<Complex>().asDiagonal() * u.adjoint();
  e.bottomRightCorner(q, q) = v * ch_q.cast<Complex>().asDiagonal() * v.adjoint();
  e.topRightCorner(p, q) = u * sh * v.adjoint();
  e.bottomLeftCorner(q, p) = e.topRightCorner(p, q).adjoint();
  return e;
}

CMat random_n_part(Rng& rng, int p, int q, double norm) {
  const CMat b = rng.complex_gaussian(p, q);
  CMat y = CMat::Zero(p + q, p + q);
  y.topRightCorner(p, q) = b;
  y.bottomLeftCorner(q, p) = b.adjoint();
  const double nrm = y.norm();
  return nrm > 0.0 ? CMat(y * (norm / nrm)) : y;
}

CMat random_compact_upq(Rng& rng, int p, int q) {
  CMat u = CMat::Zero(p + q, p + q);
  u.topLeftCorner(p, p) = random_unitary(rng, p);
  u.bottomRightCorner(q, q) = random_unitary(rng, q);
  return u;
}

CMat random_upq(Rng& rng, int p, int q, double max_norm) {
  const CMat u = random_compact_upq(rng, p, q);
  const CMat y = random_n_part(rng, p, q, rng.uniform(0.0, max_norm));
  return u * matfun::mat_exp<Complex>(y);
}

CMat boost_u11(double r) {
  CMat a(2, 2);
  a << std::cosh(r), std::sinh(r), std::sinh(r), std::cosh(r);
  return a;
}

}  // namespace cutloci::groupgeo
