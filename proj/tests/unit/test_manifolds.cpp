#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cutloci/error.hpp"
#include "cutloci/groupgeo.hpp"
#include "cutloci/manifolds.hpp"
#include "cutloci/random.hpp"

namespace cutloci {
namespace {

constexpr double kPi = std::numbers::pi;

Vec vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

ManifoldPoint at(const ManifoldId& m, std::initializer_list<double> values) { return ManifoldPoint{m, vec(values)}; }

TEST(ManifoldId, ParsesAndPrints) {
  for (const char* text : {"euclidean:3", "sphere:2", "torus:2", "matspace:3", "glplus:2", "upq:2,1"}) {
    EXPECT_EQ(ManifoldId::parse(text).to_string(), text);
  }
  EXPECT_EQ(ManifoldId::parse("upq:2,1").coord_size(), 18);
  EXPECT_EQ(ManifoldId::parse("sphere:3").coord_size(), 4);
  EXPECT_EQ(ManifoldId::parse("matspace:3").matrix_size(), 3);
}

TEST(ManifoldId, RejectsMalformed) {
  for (const char* text : {"sphere", "sphere:0", "klein:2", "upq:1", "upq:0,1", "torus:x"}) {
    try {
      ManifoldId::parse(text);
      FAIL() << "accepted " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << text;
    }
  }
}

TEST(ExpMap, SphereReachesAntipode) {
  const auto s2 = ManifoldId::sphere(2);
  const ManifoldPoint p = at(s2, {0, 0, 1});
  const ManifoldPoint q = exp_map(TangentVector{p, vec({1, 0, 0})}, kPi);
  EXPECT_LE((q.coords - vec({0, 0, -1})).norm(), 1e-15);
}

TEST(ExpMap, TorusWraps) {
  const auto t2 = ManifoldId::flat_torus(2);
  const ManifoldPoint q = exp_map(TangentVector{at(t2, {.5, .5}), vec({1, 0})}, .25);
  EXPECT_LE((q.coords - vec({.75, .5})).norm(), 1e-15);
  const ManifoldPoint w = exp_map(TangentVector{at(t2, {.5, .5}), vec({1, 0})}, .75);
  EXPECT_LE((w.coords - vec({.25, .5})).norm(), 1e-15);
}

TEST(ExpMap, GlplusThroughIdentity) {
  const auto gl = ManifoldId::glplus(2);
  const ManifoldPoint id = ManifoldPoint::from_matrix(gl, Mat::Identity(2, 2));
  const ManifoldPoint q = exp_map(TangentVector::from_matrix(id, Mat::Identity(2, 2)), 1.0);
  EXPECT_LE((q.matrix() - std::exp(1.0) * Mat::Identity(2, 2)).norm(), 1e-14);
}

TEST(ExpMap, GlplusRejectsNonOrthogonalBase) {
  const auto gl = ManifoldId::glplus(2);
  const Mat base = Vec(vec({2, 1})).asDiagonal();
  const ManifoldPoint p = ManifoldPoint::from_matrix(gl, base);
  try {
    exp_map(TangentVector::from_matrix(p, base), 1.0);
    FAIL() << "expected UnsupportedGeodesic";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedGeodesic);
  }
}

TEST(ExpMap, AtZeroIsIdentityExactly) {
  const auto s3 = ManifoldId::sphere(3);
  const ManifoldPoint p = at(s3, {0.6, 0.8, 0, 0});
  EXPECT_EQ(exp_map(TangentVector{p, vec({0, 0, 1, 0})}, 0.0).coords, p.coords);
}

TEST(ExpMap, SphereGeodesicsStayOnSphere) {
  Rng rng(21);
  const auto s4 = ManifoldId::sphere(4);
  for (int i = 0; i < 100; ++i) {
    const Vec p = rng.unit_vector(5);
    Vec v = rng.gaussian(5);
    v -= v.dot(p) * p;
    v.normalize();
    const ManifoldPoint q = exp_map(TangentVector{ManifoldPoint{s4, p}, v}, rng.uniform(0, 10));
    EXPECT_NEAR(q.coords.norm(), 1.0, 1e-10);
  }
}

TEST(ExpMap, UpqGeodesicsStayInGroup) {
  Rng rng(22);
  const auto m = ManifoldId::upq(2, 1);
  for (int i = 0; i < 20; ++i) {
    const CMat u = groupgeo::random_compact_upq(rng, 2, 1);
    const CMat y = groupgeo::random_n_part(rng, 2, 1, 1.0);
    const ManifoldPoint base = ManifoldPoint::from_complex_matrix(m, u);
    const TangentVector v = TangentVector::from_complex_matrix(base, CMat(u * y));
    for (double t : {0.5, 1.5, 3.0}) {
      EXPECT_LE(groupgeo::upq_membership(exp_map(v, t).complex_matrix(), 2, 1), 1e-8);
    }
  }
}

/// Left-invariant (or ambient) speed of t -> exp_map(v, t) by central differences.
double numeric_speed(const TangentVector& v, double t) {
  const double h = 1e-6;
  const ManifoldPoint a = exp_map(v, t + h);
  const ManifoldPoint b = exp_map(v, t - h);
  const ManifoldPoint mid = exp_map(v, t);
  return norm(TangentVector{mid, (a.coords - b.coords) / (2.0 * h)});
}

TEST(ExpMap, ConstantSpeed) {
  Rng rng(23);
  const auto s2 = ManifoldId::sphere(2);
  const Vec p = rng.unit_vector(3);
  Vec v = rng.gaussian(3);
  v -= v.dot(p) * p;
  v *= 1.7 / v.norm();
  const TangentVector sv{ManifoldPoint{s2, p}, v};

  const auto gl = ManifoldId::glplus(3);
  Mat q = random_orthogonal(rng, 3);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  const Mat b = rng.gaussian(3, 3);
  const Mat w = (b + b.transpose()) / 2.0;
  const ManifoldPoint gp = ManifoldPoint::from_matrix(gl, q);
  const TangentVector gv = TangentVector::from_matrix(gp, Mat(q * w));

  const auto up = ManifoldId::upq(1, 1);
  const ManifoldPoint id = ManifoldPoint::from_complex_matrix(up, CMat::Identity(2, 2));
  const TangentVector uv = TangentVector::from_complex_matrix(id, groupgeo::random_n_part(rng, 1, 1, 0.8));

  const auto t3 = ManifoldId::flat_torus(3);
  const TangentVector tv{at(t3, {.1, .2, .3}), vec({.3, -.4, .5})};

  for (const TangentVector* tvec : {&sv, &gv, &uv, &tv}) {
    const double speed = norm(*tvec);
    for (double t : {0.3, 1.1, 2.9}) EXPECT_NEAR(numeric_speed(*tvec, t), speed, 1e-5 * std::max(1.0, speed));
  }
}

TEST(RiemDistance, Examples) {
  const auto s2 = ManifoldId::sphere(2);
  EXPECT_DOUBLE_EQ(riem_distance(at(s2, {0, 0, 1}), at(s2, {0, 0, -1})), kPi);
  const auto t2 = ManifoldId::flat_torus(2);
  EXPECT_NEAR(riem_distance(at(t2, {.5, .5}), at(t2, {0, .5})), .5, 1e-15);
  EXPECT_NEAR(riem_distance(at(t2, {.9, .5}), at(t2, {.1, .5})), .2, 1e-15);
  const auto m2 = ManifoldId::matrix_space(2);
  Mat rot(2, 2);
  rot << 0, -1, 1, 0;
  EXPECT_NEAR(riem_distance(ManifoldPoint::from_matrix(m2, Mat::Identity(2, 2)), ManifoldPoint::from_matrix(m2, rot)),
              2.0, 1e-15);
}

TEST(RiemDistance, UnsupportedOnGroups) {
  const auto gl = ManifoldId::glplus(2);
  const ManifoldPoint id = ManifoldPoint::from_matrix(gl, Mat::Identity(2, 2));
  try {
    riem_distance(id, id);
    FAIL() << "expected UnsupportedDistance";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedDistance);
  }
}

TEST(RiemDistance, IsAMetricOnRandomTriples) {
  Rng rng(24);
  const auto s3 = ManifoldId::sphere(3);
  const auto t3 = ManifoldId::flat_torus(3);
  const auto e2 = ManifoldId::euclidean(2);
  for (int i = 0; i < 1000; ++i) {
    const auto sphere_pt = [&] { return ManifoldPoint{s3, rng.unit_vector(4)}; };
    const auto torus_pt = [&] { return at(t3, {rng.uniform(), rng.uniform(), rng.uniform()}); };
    const auto plane_pt = [&] { return ManifoldPoint{e2, rng.gaussian(2)}; };
    for (int kind = 0; kind < 3; ++kind) {
      const auto draw = [&] { return kind == 0 ? sphere_pt() : kind == 1 ? torus_pt() : plane_pt(); };
      const ManifoldPoint a = draw(), b = draw(), c = draw();
      EXPECT_NEAR(riem_distance(a, b), riem_distance(b, a), 1e-15);
      EXPECT_LE(riem_distance(a, c), riem_distance(a, b) + riem_distance(b, c) + 1e-10);
    }
  }
}

TEST(Inner, Examples) {
  const auto e3 = ManifoldId::euclidean(3);
  const ManifoldPoint o = at(e3, {0, 0, 0});
  EXPECT_DOUBLE_EQ(inner(TangentVector{o, vec({1, 0, 0})}, TangentVector{o, vec({1, 0, 0})}), 1.0);

  const auto gl = ManifoldId::glplus(2);
  const Mat a = 2.0 * Mat::Identity(2, 2);
  const Mat w = Vec(vec({1, 0})).asDiagonal();
  const TangentVector aw = TangentVector::from_matrix(ManifoldPoint::from_matrix(gl, a), Mat(a * w));
  EXPECT_NEAR(inner(aw, aw), 1.0, 1e-15);

  const auto up = ManifoldId::upq(1, 1);
  CMat y(2, 2);
  y << 0, 1, 1, 0;
  const TangentVector yv =
      TangentVector::from_complex_matrix(ManifoldPoint::from_complex_matrix(up, CMat::Identity(2, 2)), y);
  EXPECT_NEAR(inner(yv, yv), 2.0, 1e-15);
}

TEST(Inner, RejectsDifferentBases) {
  const auto e2 = ManifoldId::euclidean(2);
  try {
    inner(TangentVector{at(e2, {0, 0}), vec({1, 0})}, TangentVector{at(e2, {1, 0}), vec({1, 0})});
    FAIL() << "expected BaseMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BaseMismatch);
  }
}

TEST(Points, ValidationAndDefects) {
  EXPECT_EQ(point_defect(at(ManifoldId::sphere(1), {1, 0})), 0.0);
  EXPECT_GT(point_defect(at(ManifoldId::sphere(1), {1, 1})), 0.1);
  EXPECT_THROW(validate_point(at(ManifoldId::sphere(1), {1, 0, 0})), Error);
  EXPECT_THROW(validate_point(at(ManifoldId::flat_torus(1), {1.5})), Error);
  Mat neg = Mat::Identity(2, 2);
  neg(0, 0) = -1;
  EXPECT_THROW(validate_point(ManifoldPoint::from_matrix(ManifoldId::glplus(2), neg)), Error);
  CMat boost = groupgeo::boost_u11(1.0);
  EXPECT_NO_THROW(validate_point(ManifoldPoint::from_complex_matrix(ManifoldId::upq(1, 1), boost)));
}

TEST(Points, MatrixFlatteningRoundTrips) {
  Rng rng(25);
  const Mat a = rng.gaussian(3, 3);
  EXPECT_EQ(unflatten(flatten(a), 3, 3), a);
  EXPECT_EQ(flatten(a)(1), a(0, 1));
  const CMat c = rng.complex_gaussian(2, 2);
  EXPECT_EQ(unflatten_complex(flatten(c), 2, 2), c);
  EXPECT_EQ(flatten(c)(1), c(0, 0).imag());
}

TEST(Diameter, PerKind) {
  EXPECT_DOUBLE_EQ(diameter(ManifoldId::sphere(3)), kPi);
  EXPECT_NEAR(diameter(ManifoldId::flat_torus(4)), 1.0, 1e-15);
  EXPECT_TRUE(std::isinf(diameter(ManifoldId::euclidean(2))));
}

TEST(SignatureMatrix, Blocks) {
  const Mat s = signature_matrix(2, 1);
  EXPECT_EQ(s.diagonal(), vec({1, 1, -1}));
}

}  // namespace
}  // namespace cutloci
