#include <gtest/gtest.h>

#include <cmath>

#include "cutloci/error.hpp"
#include "cutloci/groupgeo.hpp"
#include "cutloci/submanifolds.hpp"

namespace cutloci {
namespace {

Mat diag(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Mat rotation(double t) {
  Mat m(2, 2);
  m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return m;
}

TEST(FlowToOrthogonal, ConstantOnOrthogonalMatrices) {
  const Mat q = rotation(0.8);
  for (double t : {0.0, 0.5, 3.0}) EXPECT_LE((groupgeo::flow_to_orthogonal(q, t) - q).norm(), 1e-14);
}

TEST(FlowToOrthogonal, ConvergesToPolarFactor) {
  EXPECT_LE((groupgeo::flow_to_orthogonal(diag(2, 3), 10.0) - Mat::Identity(2, 2)).norm(), 1e-8);
  EXPECT_LE((groupgeo::flow_to_orthogonal(diag(2, 3), 0.0) - diag(2, 3)).norm(), 1e-15);
}

TEST(FlowToOrthogonal, SolvesGradientOde) {
  Rng rng(51);
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 3;
    Mat a = rng.gaussian(n, n);
    a += 1.5 * Mat::Identity(n, n);
    for (double t : {0.0, 0.5, 1.0, 2.0}) {
      EXPECT_LE(groupgeo::flow_ode_residual(a, t), 1e-7);
      EXPECT_LE(groupgeo::flow_gram_defect(a, t), 1e-9 * std::max(1.0, a.squaredNorm()));
    }
  }
}

TEST(FlowToOrthogonal, RejectsSingularInput) {
  try {
    groupgeo::flow_to_orthogonal(diag(1, 0), 1.0);
    FAIL() << "expected NearSingular";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NearSingular);
  }
}

TEST(HessianNormalCheck, IsTwiceIdentity) {
  Rng rng(52);
  const Mat h2 = groupgeo::hessian_normal_check(Mat::Identity(2, 2));
  ASSERT_EQ(h2.rows(), 3);
  EXPECT_LE((h2 - 2.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-3);
  const Mat h3 = groupgeo::hessian_normal_check(Mat::Identity(3, 3));
  ASSERT_EQ(h3.rows(), 6);
  EXPECT_LE((h3 - 2.0 * Mat::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-3);
  const Mat hq = groupgeo::hessian_normal_check(random_orthogonal(rng, 2));
  EXPECT_LE((hq - 2.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(GeodesicToSO, ScalarMatrix) {
  const double e = std::exp(1.0);
  for (double t : {0.0, 0.3, 1.0}) {
    EXPECT_LE((groupgeo::geodesic_to_SO(diag(e, e), t) - std::exp(t) * Mat::Identity(2, 2)).norm(), 1e-12);
  }
}

TEST(GeodesicToSO, ConstantOnRotations) {
  const Mat r = rotation(1.1);
  EXPECT_LE((groupgeo::geodesic_to_SO(r, 0.7) - r).norm(), 1e-12);
}

TEST(GeodesicToSO, LengthMatchesLogDistance) {
  const double expected = std::sqrt(std::pow(std::log(2.0), 2) + std::pow(std::log(3.0), 2));
  EXPECT_NEAR(groupgeo::geodesic_to_SO_length(diag(2, 3)), expected, 1e-8);
  EXPECT_LE(groupgeo::geodesic_to_SO_speed_variation(diag(2, 3)), 1e-6);

  Rng rng(53);
  const Submanifold so(ManifoldId::glplus(3), SpecialOrthogonal{});
  for (int i = 0; i < 5; ++i) {
    Mat a = rng.gaussian(3, 3) + 2.0 * Mat::Identity(3, 3);
    if (a.determinant() < 0.0) a.col(0) = -a.col(0);
    EXPECT_LE((groupgeo::geodesic_to_SO(a, 1.0) - a).norm(), 1e-9 * a.norm());
    EXPECT_LE((groupgeo::geodesic_to_SO(a, 0.0) - matfun::polar<double>(a).orthogonal_factor).norm(), 1e-9);
    EXPECT_NEAR(groupgeo::geodesic_to_SO_length(a), dist_to(so, ManifoldPoint::from_matrix(so.ambient, a)).distance,
                1e-8);
  }
}

TEST(GeodesicToSO, RejectsNegativeDeterminant) {
  try {
    groupgeo::geodesic_to_SO(diag(-1, 2), 0.5);
    FAIL() << "expected InvalidPoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPoint);
  }
}

TEST(Upq, MembershipExamples) {
  EXPECT_EQ(groupgeo::upq_membership(CMat::Identity(3, 3), 2, 1), 0.0);
  EXPECT_LE(groupgeo::upq_block_identities(groupgeo::boost_u11(1.0), 1, 1).max(), 1e-12);
  Rng rng(54);
  EXPECT_LE(groupgeo::upq_block_identities(groupgeo::random_compact_upq(rng, 2, 1), 2, 1).max(), 1e-12);
  EXPECT_GT(groupgeo::upq_membership(2.0 * CMat::Identity(2, 2), 1, 1), 1.0);
}

TEST(Upq, InverseClosedForm) {
  EXPECT_LE((groupgeo::upq_inverse_closed_form(CMat::Identity(3, 3), 2, 1) - 0.5 * CMat::Identity(3, 3)).norm(),
            1e-15);
  CMat expected(2, 2);
  const double th = std::tanh(1.0);
  expected << 0.5, -0.5 * th, -0.5 * th, 0.5;
  EXPECT_LE((groupgeo::upq_inverse_closed_form(groupgeo::boost_u11(1.0), 1, 1) - expected).norm(), 1e-12);

  Rng rng(55);
  for (int i = 0; i < 20; ++i) {
    const CMat a = groupgeo::random_upq(rng, 2, 1);
    const CMat direct = (a.adjoint() * a + CMat::Identity(3, 3)).inverse();
    EXPECT_LE((groupgeo::upq_inverse_closed_form(a, 2, 1) - direct).norm(), 1e-9);
  }
}

TEST(Upq, InverseRejectsNonMembers) {
  try {
    groupgeo::upq_inverse_closed_form(2.0 * CMat::Identity(2, 2), 1, 1);
    FAIL() << "expected MembershipViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MembershipViolation);
  }
}

TEST(Upq, DecomposeExamples) {
  Rng rng(56);
  const CMat u = groupgeo::random_compact_upq(rng, 2, 1);
  const auto compact = groupgeo::upq_decompose(u, 2, 1);
  EXPECT_LE(compact.n_part.norm(), 1e-10);
  EXPECT_LE(groupgeo::dist_upq(u, 2, 1), 1e-10);

  const auto boost = groupgeo::upq_decompose(groupgeo::boost_u11(1.0), 1, 1);
  CMat y(2, 2);
  y << 0, 1, 1, 0;
  EXPECT_LE((boost.n_part - y).norm(), 1e-10);
  EXPECT_NEAR(groupgeo::dist_upq(groupgeo::boost_u11(1.0), 1, 1), std::sqrt(2.0), 1e-10);

  const CMat y0 = groupgeo::random_n_part(rng, 2, 1, 1.3);
  const auto round_trip = groupgeo::upq_decompose(matfun::mat_exp<Complex>(y0), 2, 1);
  EXPECT_LE((round_trip.n_part - y0).norm(), 1e-9);
  EXPECT_LE((round_trip.unitary_part - CMat::Identity(3, 3)).norm(), 1e-9);
}

TEST(Upq, DecompositionReconstructsRandomMembers) {
  Rng rng(57);
  for (int i = 0; i < 100; ++i) {
    const int p = i % 2 == 0 ? 2 : 1;
    const CMat a = groupgeo::random_upq(rng, p, 1);
    const auto dec = groupgeo::upq_decompose(a, p, 1);
    EXPECT_LE((dec.unitary_part * matfun::mat_exp<Complex>(dec.n_part) - a).norm(), 1e-9);
    const CMat& w = dec.unitary_part;
    EXPECT_LE(w.topRightCorner(p, 1).norm() + w.bottomLeftCorner(1, p).norm(), 1e-9);
    EXPECT_LE((w.adjoint() * w - CMat::Identity(p + 1, p + 1)).norm(), 1e-9);
    EXPECT_LE((dec.n_part - dec.n_part.adjoint()).norm(), 1e-10);
    EXPECT_LE((groupgeo::upq_n_part_series(a, p, 1) - dec.n_part).norm(), 1e-9);
    EXPECT_LE((groupgeo::upq_block_exp(dec.n_part, p, 1) - matfun::mat_exp<Complex>(dec.n_part)).norm(), 1e-9);
    EXPECT_LE(groupgeo::upq_membership(matfun::sym_sqrt<Complex>(CMat(a.adjoint() * a)), p, 1), 1e-8);
  }
}

TEST(Upq, DistanceMatchesSubmanifoldOracle) {
  Rng rng(58);
  const Submanifold sub(ManifoldId::upq(2, 1), UpUqSubgroup{});
  for (int i = 0; i < 10; ++i) {
    const CMat a = groupgeo::random_upq(rng, 2, 1);
    EXPECT_NEAR(groupgeo::dist_upq(a, 2, 1), dist_to(sub, ManifoldPoint::from_complex_matrix(sub.ambient, a)).distance,
                1e-9);
  }
}

}  // namespace
}  // namespace cutloci
