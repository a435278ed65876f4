#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cutloci/error.hpp"
#include "cutloci/groupgeo.hpp"
#include "cutloci/submanifolds.hpp"

namespace cutloci {
namespace {

constexpr double kPi = std::numbers::pi;

Vec vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Mat diag(double a, double b) { return Vec(vec({a, b})).asDiagonal(); }

TEST(Submanifold, ParsesDescriptors) {
  const auto s3 = ManifoldId::sphere(3);
  EXPECT_EQ(Submanifold::parse(s3, "equator:1").to_string(), "equator:1");
  EXPECT_EQ(Submanifold::parse(s3, "hopflink").to_string(), "hopflink");
  EXPECT_EQ(Submanifold::parse(s3, "fermat:3").fermat_n(), 1);
  EXPECT_EQ(Submanifold::parse(ManifoldId::euclidean(2), "ellipse:2,1").to_string(), "ellipse:2,1");
  EXPECT_EQ(Submanifold::parse(ManifoldId::matrix_space(3), "orthogonal:3").to_string(), "orthogonal:3");
  EXPECT_EQ(Submanifold::parse(ManifoldId::upq(2, 1), "upuq:2,1").to_string(), "upuq:2,1");
}

TEST(Submanifold, RejectsBadPairs) {
  const auto expect_code = [](const ManifoldId& m, const char* text, ErrorCode code) {
    try {
      Submanifold::parse(m, text);
      FAIL() << "accepted " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << text;
    }
  };
  expect_code(ManifoldId::sphere(3), "ellipse:2,1", ErrorCode::UnsupportedAmbient);
  expect_code(ManifoldId::sphere(2), "hopflink", ErrorCode::UnsupportedAmbient);
  expect_code(ManifoldId::sphere(2), "equator:2", ErrorCode::ParseError);
  expect_code(ManifoldId::euclidean(2), "ellipse:1,2", ErrorCode::ParseError);
  expect_code(ManifoldId::sphere(3), "fermat:1", ErrorCode::ParseError);
  expect_code(ManifoldId::sphere(3), "torus", ErrorCode::ParseError);
  expect_code(ManifoldId::sphere(3), "points:/nonexistent/file.json", ErrorCode::IoError);
}

TEST(DistTo, OrthogonalGroupDiagonal) {
  const Submanifold on(ManifoldId::matrix_space(2), OrthogonalGroup{});
  const MinimizerSet m = dist_to(on, ManifoldPoint::from_matrix(on.ambient, diag(2, 3)));
  EXPECT_NEAR(m.distance * m.distance, 5.0, 1e-12);
  ASSERT_EQ(m.multiplicity(), 1u);
  EXPECT_LE((m.minimizers[0].matrix() - Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(DistTo, OrthogonalGroupAtZeroIsSaturated) {
  for (int n : {2, 3}) {
    const Submanifold on(ManifoldId::matrix_space(n), OrthogonalGroup{});
    const MinimizerSet m = dist_to(on, ManifoldPoint::from_matrix(on.ambient, Mat::Zero(n, n)));
    EXPECT_NEAR(m.distance, std::sqrt(static_cast<double>(n)), 1e-12);
    EXPECT_TRUE(m.saturated);
    EXPECT_TRUE(m.separating());
  }
}

TEST(DistTo, OrthogonalGroupSingularFamilyIsEquidistant) {
  Rng rng(31);
  const Submanifold on(ManifoldId::matrix_space(3), OrthogonalGroup{});
  const Mat u = random_orthogonal(rng, 3), v = random_orthogonal(rng, 3);
  const Mat a = u * Vec(vec({2.0, 0.7, 0.0})).asDiagonal() * v.transpose();
  const MinimizerSet m = dist_to(on, ManifoldPoint::from_matrix(on.ambient, a));
  EXPECT_GE(m.multiplicity(), 2u);
  for (const ManifoldPoint& b : m.minimizers) {
    const Mat q = b.matrix();
    EXPECT_LE((q.transpose() * q - Mat::Identity(3, 3)).norm(), 1e-9);
    EXPECT_NEAR((a - q).norm(), m.distance, 1e-9);
  }
}

TEST(DistTo, HopfLinkEqualPoint) {
  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  const MinimizerSet m = dist_to(link, ManifoldPoint{link.ambient, vec({.5, .5, .5, .5})});
  EXPECT_NEAR(m.distance, kPi / 4.0, 1e-14);
  EXPECT_EQ(m.multiplicity(), 2u);
  EXPECT_TRUE(m.separating());
}

TEST(DistTo, FermatDegreeTwoTie) {
  const Submanifold f(ManifoldId::sphere(3), FermatLift{2});
  const double r = 1.0 / std::sqrt(2.0);
  const MinimizerSet m = dist_to(f, ManifoldPoint{f.ambient, vec({r, 0, r, 0})});
  EXPECT_NEAR(m.distance, kPi / 4.0, 1e-12);
  EXPECT_GE(m.multiplicity(), 2u);
}

TEST(DistTo, SpecialOrthogonalLogDistance) {
  const Submanifold so(ManifoldId::glplus(2), SpecialOrthogonal{});
  const double e = std::exp(1.0);
  const MinimizerSet m = dist_to(so, ManifoldPoint::from_matrix(so.ambient, diag(e, e)));
  EXPECT_NEAR(m.distance, std::sqrt(2.0), 1e-12);
  ASSERT_EQ(m.multiplicity(), 1u);
  EXPECT_LE((m.minimizers[0].matrix() - Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(DistTo, UpUqBoost) {
  const Submanifold sub(ManifoldId::upq(1, 1), UpUqSubgroup{});
  const MinimizerSet m = dist_to(sub, ManifoldPoint::from_complex_matrix(sub.ambient, groupgeo::boost_u11(1.0)));
  EXPECT_NEAR(m.distance, std::sqrt(2.0), 1e-10);
}

TEST(DistTo, EquatorProjection) {
  const Submanifold eq(ManifoldId::sphere(3), EquatorSphere{1});
  const Vec q = vec({0.6, 0.0, 0.8, 0.0});
  const MinimizerSet m = dist_to(eq, ManifoldPoint{eq.ambient, q});
  EXPECT_NEAR(m.distance, std::acos(0.6), 1e-14);
  ASSERT_EQ(m.multiplicity(), 1u);
  EXPECT_LE((m.minimizers[0].coords - vec({1, 0, 0, 0})).norm(), 1e-14);
  const MinimizerSet far = dist_to(eq, ManifoldPoint{eq.ambient, vec({0, 0, 0.6, 0.8})});
  EXPECT_NEAR(far.distance, kPi / 2.0, 1e-14);
  EXPECT_TRUE(far.saturated);
}

TEST(DistTo, EllipseInsideAndOutside) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  // Center: the two minor-axis vertices tie.
  const MinimizerSet center = dist_to(el, ManifoldPoint{el.ambient, vec({0, 0})});
  EXPECT_NEAR(center.distance, 1.0, 1e-12);
  EXPECT_EQ(center.multiplicity(), 2u);
  // Beyond the cut segment on the major axis: unique minimizer at the vertex.
  const MinimizerSet beyond = dist_to(el, ManifoldPoint{el.ambient, vec({1.8, 0})});
  EXPECT_NEAR(beyond.distance, 0.2, 1e-12);
  EXPECT_EQ(beyond.multiplicity(), 1u);
  const MinimizerSet out = dist_to(el, ManifoldPoint{el.ambient, vec({0, 3})});
  EXPECT_NEAR(out.distance, 2.0, 1e-12);
}

TEST(DistTo, PointOnSubmanifoldIsItsOwnMinimizer) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  const ManifoldPoint p{el.ambient, vec({2, 0})};
  const MinimizerSet m = dist_to(el, p);
  EXPECT_LE(m.distance, 1e-12);
  ASSERT_EQ(m.multiplicity(), 1u);
  EXPECT_LE((m.minimizers[0].coords - p.coords).norm(), 1e-12);
}

TEST(DistTo, MinimizersLieOnNAndRealizeDistance) {
  Rng rng(32);
  const std::vector<Submanifold> subs = {
      Submanifold(ManifoldId::sphere(3), EquatorSphere{1}), Submanifold(ManifoldId::sphere(3), HopfLink{}),
      Submanifold(ManifoldId::sphere(3), FermatLift{3}), Submanifold(ManifoldId::euclidean(2), Ellipse{2.0, 1.0})};
  for (const Submanifold& sub : subs) {
    for (int i = 0; i < 50; ++i) {
      const Vec q = sub.ambient.kind == ManifoldKind::sphere ? rng.unit_vector(4) : Vec(3.0 * rng.gaussian(2));
      const ManifoldPoint qp{sub.ambient, q};
      const MinimizerSet m = dist_to(sub, qp);
      for (const ManifoldPoint& b : m.minimizers) {
        EXPECT_LE(membership_defect(sub, b), kMembershipTol) << sub.to_string();
        EXPECT_NEAR(ambient_distance(qp, b), m.distance, kTieTol) << sub.to_string();
      }
    }
  }
}

TEST(DistTo, ClosedFormsAgreeWithMultistart) {
  Rng rng(33);
  OracleOptions options;
  options.starts = 200;
  const std::vector<Submanifold> subs = {
      Submanifold(ManifoldId::sphere(3), EquatorSphere{1}), Submanifold(ManifoldId::sphere(3), HopfLink{}),
      Submanifold(ManifoldId::sphere(3), FermatLift{2}), Submanifold(ManifoldId::euclidean(2), Ellipse{2.0, 1.0}),
      Submanifold(ManifoldId::matrix_space(2), OrthogonalGroup{})};
  for (const Submanifold& sub : subs) {
    for (int i = 0; i < 10; ++i) {
      Vec q = rng.gaussian(sub.ambient.coord_size());
      if (sub.ambient.kind == ManifoldKind::sphere) q.normalize();
      const ManifoldPoint qp{sub.ambient, q};
      options.seed = static_cast<std::uint64_t>(i);
      const double closed = dist_to(sub, qp).distance;
      const double numeric = multistart_dist(sub, qp, options).distance;
      EXPECT_GE(numeric, closed - 1e-6) << sub.to_string();
      EXPECT_LE(numeric, closed + 1e-6) << sub.to_string();
    }
  }
}

TEST(DistTo, FermatComponentFormulaOnRealSlice) {
  // q = (cos phi, 0, sin phi, 0): d(q, X_k) = arccos sqrt((1 + sin 2phi cos((2k+1)pi/d)) / 2).
  Rng rng(34);
  for (int i = 0; i < 200; ++i) {
    const int d = rng.integer(2, 8);
    const double phi = rng.uniform(0.0, kPi / 2.0);
    const Submanifold f(ManifoldId::sphere(3), FermatLift{d});
    const MinimizerSet m = dist_to(f, ManifoldPoint{f.ambient, vec({std::cos(phi), 0, std::sin(phi), 0})});
    double best = kPi;
    for (int k = 0; k < d; ++k) {
      const double c = std::sqrt((1.0 + std::sin(2.0 * phi) * std::cos((2 * k + 1) * kPi / d)) / 2.0);
      best = std::min(best, std::acos(std::clamp(c, -1.0, 1.0)));
    }
    EXPECT_NEAR(m.distance, best, 1e-12);
  }
}

TEST(DistTo, EquatorInvariantUnderBlockRotations) {
  Rng rng(35);
  const Submanifold eq(ManifoldId::sphere(4), EquatorSphere{2});
  for (int i = 0; i < 20; ++i) {
    Mat g = Mat::Identity(5, 5);
    g.topLeftCorner(3, 3) = random_orthogonal(rng, 3);
    g.bottomRightCorner(2, 2) = random_orthogonal(rng, 2);
    const Vec q = rng.unit_vector(5);
    EXPECT_NEAR(dist_to(eq, ManifoldPoint{eq.ambient, q}).distance,
                dist_to(eq, ManifoldPoint{eq.ambient, g * q}).distance, 1e-9);
  }
}

TEST(DistTo, OrthogonalInvariantUnderLeftMultiplication) {
  Rng rng(36);
  const Submanifold on(ManifoldId::matrix_space(3), OrthogonalGroup{});
  for (int i = 0; i < 20; ++i) {
    const Mat a = rng.gaussian(3, 3);
    const Mat g = random_orthogonal(rng, 3);
    EXPECT_NEAR(dist_to(on, ManifoldPoint::from_matrix(on.ambient, a)).distance,
                dist_to(on, ManifoldPoint::from_matrix(on.ambient, Mat(g * a))).distance, 1e-9);
  }
}

TEST(UnitNormals, EquatorInSphere) {
  const Submanifold eq(ManifoldId::sphere(2), EquatorSphere{1});
  const ManifoldPoint p{eq.ambient, vec({1, 0, 0})};
  for (const TangentVector& v : unit_normal_sample(eq, p, 7, 8)) {
    EXPECT_NEAR(std::abs(v.vec(2)), 1.0, 1e-12);
  }
}

TEST(UnitNormals, OrthogonalGroupAtIdentityAreSymmetric) {
  const Submanifold on(ManifoldId::matrix_space(2), OrthogonalGroup{});
  const ManifoldPoint id = ManifoldPoint::from_matrix(on.ambient, Mat::Identity(2, 2));
  for (const TangentVector& v : unit_normal_sample(on, id, 7, 16)) {
    const Mat w = v.matrix();
    EXPECT_LE((w - w.transpose()).norm(), 1e-12);
    EXPECT_NEAR(w.norm(), 1.0, 1e-12);
  }
}

TEST(UnitNormals, UpUqDirectionsAreInN) {
  Rng rng(37);
  const Submanifold sub(ManifoldId::upq(2, 1), UpUqSubgroup{});
  const CMat u = groupgeo::random_compact_upq(rng, 2, 1);
  const ManifoldPoint p = ManifoldPoint::from_complex_matrix(sub.ambient, u);
  for (const TangentVector& v : unit_normal_sample(sub, p, 3, 8)) {
    const CMat y = u.adjoint() * v.complex_matrix();
    EXPECT_LE(y.topLeftCorner(2, 2).norm() + y.bottomRightCorner(1, 1).norm(), 1e-10);
    EXPECT_LE((y - y.adjoint()).norm(), 1e-10);
    EXPECT_NEAR(norm(v), 1.0, 1e-10);
  }
}

TEST(UnitNormals, AreUnitOrthogonalAndDeterministic) {
  Rng rng(38);
  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  const ManifoldPoint p = sample_point(link, rng);
  const auto a = unit_normal_sample(link, p, 99, 10);
  const auto b = unit_normal_sample(link, p, 99, 10);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].vec, b[i].vec);
    EXPECT_NEAR(a[i].vec.norm(), 1.0, 1e-12);
    EXPECT_LE(std::abs(a[i].vec.dot(p.coords)), 1e-10);
  }
}

TEST(UnitNormals, RejectPointsOffN) {
  const Submanifold eq(ManifoldId::sphere(2), EquatorSphere{1});
  try {
    unit_normal_sample(eq, ManifoldPoint{eq.ambient, vec({0, 0, 1})}, 1, 1);
    FAIL() << "expected NotOnSubmanifold";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOnSubmanifold);
  }
}

}  // namespace
}  // namespace cutloci
