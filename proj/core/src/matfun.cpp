#include "cutloci/matfun.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "cutloci/error.hpp"

namespace cutloci::matfun {
namespace {

template <class Scalar>
void require_square(const DenseMatrix<Scalar>& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + " needs a square matrix, got " +
                                              std::to_string(a.rows()) + "x" +
                                              std::to_string(a.cols()));
  }
}

template <class Scalar>
void require_finite(const DenseMatrix<Scalar>& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite entry");
}

template <class Scalar>
void require_hermitian(const DenseMatrix<Scalar>& a, const char* what) {
  const double defect = hermitian_defect<Scalar>(a);
  if (defect > kHermitianTol) {
    throw Error(ErrorCode::NotHermitian,
                std::string(what) + ": relative asymmetry " + std::to_string(defect));
  }
}

/// Scale used by the relative spectrum thresholds; the zero matrix uses 1.
template <class Scalar>
double spectral_scale(const DenseMatrix<Scalar>& a) {
  const double norm = a.norm();
  return norm > 0.0 ? norm : 1.0;
}

}  // namespace

template <class Scalar>
double hermitian_defect(const DenseMatrix<Scalar>& a) {
  require_square(a, "hermitian_defect");
  const double norm = a.norm();
  if (norm == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / norm;
}

template <class Scalar>
SqrtResult<Scalar> sym_sqrt_report(const DenseMatrix<Scalar>& a) {
  require_square(a, "sym_sqrt");
  require_finite(a, "sym_sqrt");
  require_hermitian(a, "sym_sqrt");

  const DenseMatrix<Scalar> sym = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> eig(sym);
  const double scale = spectral_scale(a);

  SqrtResult<Scalar> out;
  Vec roots(eig.eigenvalues().size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    double lambda = eig.eigenvalues()(i);
    if (lambda < -kNegativeSpectrumTol * scale) {
      throw Error(ErrorCode::NegativeSpectrum,
                  "sym_sqrt: eigenvalue " + std::to_string(lambda) + " is negative");
    }
    if (lambda < -kClampTol * scale) out.clamped = true;
    roots(i) = std::sqrt(std::max(lambda, 0.0));
  }
  const auto& v = eig.eigenvectors();
  out.root = v * roots.cast<Scalar>().asDiagonal() * v.adjoint();
  out.root = (out.root + out.root.adjoint()) / 2.0;
  return out;
}

template <class Scalar>
DenseMatrix<Scalar> sym_sqrt(const DenseMatrix<Scalar>& a) {
  return sym_sqrt_report<Scalar>(a).root;
}

template <class Scalar>
PolarFactors<Scalar> polar(const DenseMatrix<Scalar>& a) {
  require_square(a, "polar");
  require_finite(a, "polar");
  // Both factors come from one SVD, A = U diag(s) V^*: Q = U V^* and
  // S = V diag(s) V^*, which is sqrt(A^* A). Squaring A before taking the root
  // would cost half of the digits in the small singular values.
  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& u = svd.matrixU();
  const auto& v = svd.matrixV();
  PolarFactors<Scalar> out;
  out.orthogonal_factor = u * v.adjoint();
  out.psd_factor = v * svd.singularValues().template cast<Scalar>().asDiagonal() * v.adjoint();
  out.psd_factor = (out.psd_factor + out.psd_factor.adjoint()) / 2.0;
  return out;
}

template <class Scalar>
DenseMatrix<Scalar> principal_log(const DenseMatrix<Scalar>& a, LogMethod method) {
  require_square(a, "principal_log");
  require_finite(a, "principal_log");
  const Eigen::Index n = a.rows();

  if (method == LogMethod::eigen) {
    require_hermitian(a, "principal_log");
    const DenseMatrix<Scalar> sym = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> eig(sym);
    Vec logs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lambda = eig.eigenvalues()(i);
      if (!(lambda > 0.0)) {
        throw Error(ErrorCode::SpectrumViolation,
                    "principal_log: eigenvalue " + std::to_string(lambda) + " is not positive");
      }
      logs(i) = std::log(lambda);
    }
    const auto& v = eig.eigenvectors();
    DenseMatrix<Scalar> out = v * logs.cast<Scalar>().asDiagonal() * v.adjoint();
    return (out + out.adjoint()) / 2.0;
  }

  Eigen::ComplexEigenSolver<CMat> eig(a.template cast<Complex>(), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(eig.eigenvalues()(i).real() > 0.0)) {
      throw Error(ErrorCode::SpectrumViolation,
                  "principal_log: eigenvalue with real part " +
                      std::to_string(eig.eigenvalues()(i).real()) + " is not in the right half-plane");
    }
  }

  // log A = 2 sum_k C^(2k+1) / (2k+1) with C = (A - I)(A + I)^{-1}.
  const DenseMatrix<Scalar> id = DenseMatrix<Scalar>::Identity(n, n);
  const DenseMatrix<Scalar> c = (a + id).transpose().partialPivLu().solve((a - id).transpose()).transpose();
  const DenseMatrix<Scalar> c2 = c * c;
  DenseMatrix<Scalar> power = c;
  DenseMatrix<Scalar> acc = 2.0 * c;
  if (c.norm() == 0.0) return acc;
  for (int k = 1; k <= kGregoryMaxTerms; ++k) {
    power = power * c2;
    const DenseMatrix<Scalar> term = power * (2.0 / (2.0 * k + 1.0));
    acc += term;
    if (term.norm() < kGregoryTol * acc.norm()) return acc;
  }
  throw Error(ErrorCode::NoConvergence, "principal_log: Gregory series did not converge in " +
                                            std::to_string(kGregoryMaxTerms) + " terms");
}

template <class Scalar>
DenseMatrix<Scalar> mat_exp(const DenseMatrix<Scalar>& a) {
  require_square(a, "mat_exp");
  require_finite(a, "mat_exp");
  return a.exp();
}

Mat frechet_sqrt(const Mat& a, const Mat& h) {
  require_square(a, "frechet_sqrt");
  require_finite(a, "frechet_sqrt");
  require_finite(h, "frechet_sqrt");
  if (h.rows() != a.rows() || h.cols() != a.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "frechet_sqrt: A and H differ in shape");
  }
  require_hermitian(a, "frechet_sqrt");
  require_hermitian(h, "frechet_sqrt");

  Eigen::SelfAdjointEigenSolver<Mat> eig((a + a.transpose()) / 2.0);
  const double scale = spectral_scale(a);
  const Eigen::Index n = a.rows();
  Vec sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues()(i);
    if (lambda < -kNegativeSpectrumTol * scale) {
      throw Error(ErrorCode::NegativeSpectrum,
                  "frechet_sqrt: eigenvalue " + std::to_string(lambda) + " is negative");
    }
    sigma(i) = std::sqrt(std::max(lambda, 0.0));
  }
  const Mat& v = eig.eigenvectors();
  Mat x = v.transpose() * ((h + h.transpose()) / 2.0) * v;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double denom = sigma(i) + sigma(j);
      if (denom < 1e-12) {
        throw Error(ErrorCode::SingularSylvester,
                    "frechet_sqrt: sigma_i + sigma_j = " + std::to_string(denom));
      }
      x(i, j) /= denom;
    }
  }
  Mat out = v * x * v.transpose();
  return (out + out.transpose()) / 2.0;
}

Mat grad_trace_sqrt(const Mat& a) {
  require_square(a, "grad_trace_sqrt");
  require_finite(a, "grad_trace_sqrt");
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= kNearSingularTol) {
    throw Error(ErrorCode::NearSingular, "grad_trace_sqrt: smallest singular value " +
                                             std::to_string(s.size() ? s(s.size() - 1) : 0.0));
  }
  const Mat root = sym_sqrt<double>(a.transpose() * a);
  // A S^{-1} = (S^{-1} A^T)^T since S is symmetric.
  return root.ldlt().solve(a.transpose()).transpose();
}

Svd svd(const Mat& a) {
  require_finite(a, "svd");
  Eigen::JacobiSVD<Mat> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Svd{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

template double hermitian_defect<double>(const Mat&);
template double hermitian_defect<Complex>(const CMat&);
template SqrtResult<double> sym_sqrt_report<double>(const Mat&);
template SqrtResult<Complex> sym_sqrt_report<Complex>(const CMat&);
template Mat sym_sqrt<double>(const Mat&);
template CMat sym_sqrt<Complex>(const CMat&);
template PolarFactors<double> polar<double>(const Mat&);
template PolarFactors<Complex> polar<Complex>(const CMat&);
template Mat principal_log<double>(const Mat&, LogMethod);
template CMat principal_log<Complex>(const CMat&, LogMethod);
template Mat mat_exp<double>(const Mat&);
template CMat mat_exp<Complex>(const CMat&);

}  // namespace cutloci::matfun
