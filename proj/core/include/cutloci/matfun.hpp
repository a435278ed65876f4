#pragma once

// Dense matrix-function kernels on small real and complex matrices.
//
// Every function here is a pure function of its arguments. Functions templated
// on the scalar type are instantiated for double and std::complex<double>.

#include <complex>

#include <Eigen/Dense>

namespace cutloci {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace cutloci

namespace cutloci::matfun {

/// Asymmetry accepted by the Hermitian-input routines, relative to ||A||_F.
inline constexpr double kHermitianTol = 1e-12;
/// Eigenvalues in [-kClampTol, 0) are silently set to zero.
inline constexpr double kClampTol = 1e-12;
/// Eigenvalues below -kNegativeSpectrumTol are rejected; values between the two
/// thresholds are clamped and flagged.
inline constexpr double kNegativeSpectrumTol = 1e-8;
inline constexpr int kGregoryMaxTerms = 200;
inline constexpr double kGregoryTol = 1e-14;
/// Smallest singular value accepted by routines that need an inverse.
inline constexpr double kNearSingularTol = 1e-10;

enum class LogMethod { gregory, eigen };

template <class Scalar>
struct PolarFactors {
  DenseMatrix<Scalar> orthogonal_factor;
  DenseMatrix<Scalar> psd_factor;
};

template <class Scalar>
struct SqrtResult {
  DenseMatrix<Scalar> root;
  /// True when an eigenvalue in (-1e-8, -1e-12) had to be clamped to zero.
  bool clamped = false;
};

/// A = U * diag(singular_values) * V^T, singular values descending.
struct Svd {
  Mat u;
  Vec singular_values;
  Mat v;
};

/// ||A - A^*||_F / ||A||_F (0 for the zero matrix).
template <class Scalar>
double hermitian_defect(const DenseMatrix<Scalar>& a);

template <class Scalar>
SqrtResult<Scalar> sym_sqrt_report(const DenseMatrix<Scalar>& a);

/// Hermitian PSD square root through the eigendecomposition.
template <class Scalar>
DenseMatrix<Scalar> sym_sqrt(const DenseMatrix<Scalar>& a);

/// A = Q * S with S = sqrt(A^* A). For singular A the unitary factor is U V^*
/// from the SVD, one valid choice among many.
template <class Scalar>
PolarFactors<Scalar> polar(const DenseMatrix<Scalar>& a);

/// Principal logarithm. `eigen` needs a Hermitian positive definite input;
/// `gregory` accepts any matrix with spectrum in the open right half-plane.
template <class Scalar>
DenseMatrix<Scalar> principal_log(const DenseMatrix<Scalar>& a, LogMethod method);

template <class Scalar>
DenseMatrix<Scalar> mat_exp(const DenseMatrix<Scalar>& a);

/// Frechet derivative of the SPD square root at A in the symmetric direction H,
/// i.e. the symmetric solution X of X sqrt(A) + sqrt(A) X = H.
Mat frechet_sqrt(const Mat& a, const Mat& h);

/// Gradient of A -> tr sqrt(A^T A), which is A (sqrt(A^T A))^{-1}.
Mat grad_trace_sqrt(const Mat& a);

Svd svd(const Mat& a);

extern template double hermitian_defect<double>(const Mat&);
extern template double hermitian_defect<Complex>(const CMat&);
extern template SqrtResult<double> sym_sqrt_report<double>(const Mat&);
extern template SqrtResult<Complex> sym_sqrt_report<Complex>(const CMat&);
extern template Mat sym_sqrt<double>(const Mat&);
extern template CMat sym_sqrt<Complex>(const CMat&);
extern template PolarFactors<double> polar<double>(const Mat&);
extern template PolarFactors<Complex> polar<Complex>(const CMat&);
extern template Mat principal_log<double>(const Mat&, LogMethod);
extern template CMat principal_log<Complex>(const CMat&, LogMethod);
extern template Mat mat_exp<double>(const Mat&);
extern template CMat mat_exp<Complex>(const CMat&);

}  // namespace cutloci::matfun
