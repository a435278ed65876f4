#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cutloci/cutengine.hpp"
#include "cutloci/error.hpp"

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

TEST(Shoot, Examples) {
  const Submanifold eq(ManifoldId::sphere(2), EquatorSphere{1});
  const ManifoldPoint foot{eq.ambient, vec({1, 0, 0})};
  const ManifoldPoint p = shoot(eq, TangentVector{foot, vec({0, 0, 1})}, kPi / 4.0);
  EXPECT_LE((p.coords - vec({std::cos(kPi / 4), 0, std::sin(kPi / 4)})).norm(), 1e-15);

  const Submanifold on(ManifoldId::matrix_space(2), OrthogonalGroup{});
  const ManifoldPoint id = ManifoldPoint::from_matrix(on.ambient, Mat::Identity(2, 2));
  const TangentVector w = TangentVector::from_matrix(id, Mat(Mat::Identity(2, 2) / std::sqrt(2.0)));
  EXPECT_LE((shoot(on, w, std::sqrt(2.0)).matrix() - 2.0 * Mat::Identity(2, 2)).norm(), 1e-14);

  const Submanifold pole(ManifoldId::sphere(2), FinitePoints{{vec({0, 0, 1})}});
  const ManifoldPoint q = shoot(pole, TangentVector{ManifoldPoint{pole.ambient, vec({0, 0, 1})}, vec({0, 1, 0})},
                                kPi / 2.0);
  EXPECT_NEAR(q.coords(2), 0.0, 1e-15);
}

TEST(Shoot, MinimalBelowCutTime) {
  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  Rng rng(41);
  for (int i = 0; i < 10; ++i) {
    const ManifoldPoint foot = sample_point(link, rng);
    const TangentVector v = unit_normal_sample(link, foot, static_cast<std::uint64_t>(i), 1).front();
    const double rho = cut_time(link, v).rho;
    for (int k = 1; k <= 9; ++k) {
      const double t = 0.1 * k * rho;
      EXPECT_NEAR(dist_to(link, shoot(link, v, t)).distance, t, 1e-7);
    }
  }
}

TEST(CutTime, SouthPole) {
  const Submanifold pole(ManifoldId::sphere(2), FinitePoints{{vec({0, 0, -1})}});
  const ManifoldPoint foot{pole.ambient, vec({0, 0, -1})};
  for (const TangentVector& v : unit_normal_sample(pole, foot, 5, 4)) {
    EXPECT_NEAR(cut_time(pole, v).rho, kPi, 1e-9);
  }
}

TEST(CutTime, EquatorsInEverySphere) {
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k < n; ++k) {
      const Submanifold eq(ManifoldId::sphere(n), EquatorSphere{k});
      Rng rng(static_cast<std::uint64_t>(10 * n + k));
      const ManifoldPoint foot = sample_point(eq, rng);
      for (const TangentVector& v : unit_normal_sample(eq, foot, 3, 3)) {
        EXPECT_NEAR(cut_time(eq, v).rho, kPi / 2.0, 1e-9) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(CutTime, TorusPoint) {
  const Submanifold pt(ManifoldId::flat_torus(2), FinitePoints{{vec({.5, .5})}});
  const TangentVector v{ManifoldPoint{pt.ambient, vec({.5, .5})}, vec({1, 0})};
  EXPECT_NEAR(cut_time(pt, v).rho, 0.5, 1e-9);
  const TangentVector diagonal{ManifoldPoint{pt.ambient, vec({.5, .5})}, vec({1, 1}) / std::sqrt(2.0)};
  EXPECT_NEAR(cut_time(pt, diagonal).rho, std::sqrt(0.5), 1e-9);
}

TEST(CutTime, EllipseMinorVertex) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  const TangentVector v{ManifoldPoint{el.ambient, vec({0, 1})}, vec({0, -1})};
  const CutTimeResult r = cut_time(el, v);
  EXPECT_TRUE(r.in_range);
  EXPECT_NEAR(r.rho, 1.0, 1e-9);
}

TEST(CutTime, OutwardNormalOfEllipseNeverCuts) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  const TangentVector v{ManifoldPoint{el.ambient, vec({0, 1})}, vec({0, 1})};
  const CutTimeResult r = cut_time(el, v);
  EXPECT_FALSE(r.in_range);
  EXPECT_TRUE(std::isinf(r.rho));
}

TEST(CutTime, FailsJustAboveCutTime) {
  // Beyond rho the geodesic is no longer minimal. The step above rho has to
  // exceed the bisection error by enough that the distance deficit clears the
  // tie slack, so it is taken well above 10 tol_rho.
  const double delta = 1e-4;
  const std::vector<Submanifold> subs = {Submanifold(ManifoldId::sphere(2), EquatorSphere{1}),
                                         Submanifold(ManifoldId::flat_torus(2), FinitePoints{{vec({.5, .5})}}),
                                         Submanifold(ManifoldId::euclidean(2), Ellipse{2.0, 1.0})};
  for (const Submanifold& sub : subs) {
    Rng rng(42);
    for (int i = 0; i < 5; ++i) {
      const ManifoldPoint foot = sample_point(sub, rng);
      TangentVector v = unit_normal_sample(sub, foot, static_cast<std::uint64_t>(i), 1).front();
      if (sub.ambient.kind == ManifoldKind::euclidean && v.vec.dot(foot.coords) > 0.0) v.vec = -v.vec;
      const CutTimeResult r = cut_time(sub, v);
      ASSERT_TRUE(r.in_range) << sub.to_string();
      const double t = r.rho + delta;
      EXPECT_LT(dist_to(sub, shoot(sub, v, t)).distance, t - kTieTol) << sub.to_string();
    }
  }
}

TEST(CutTime, ContinuousAlongDirectionFamily) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  const ManifoldPoint foot{el.ambient, vec({0, 1})};
  const Submanifold eq(ManifoldId::sphere(3), EquatorSphere{1});
  const ManifoldPoint efoot{eq.ambient, vec({1, 0, 0, 0})};
  double prev_el = cut_time(el, TangentVector{foot, vec({0, -1})}).rho;
  double prev_eq = cut_time(eq, TangentVector{efoot, vec({0, 0, 1, 0})}).rho;
  for (int i = 1; i <= 200; ++i) {
    const double angle = 1e-3 * i;
    const double rho_eq = cut_time(eq, TangentVector{efoot, vec({0, 0, std::cos(angle), std::sin(angle)})}).rho;
    EXPECT_LE(std::abs(rho_eq - prev_eq), 1e-2);
    prev_eq = rho_eq;
    // The ellipse normal line is fixed per foot, so vary the foot instead.
    const ManifoldPoint f{el.ambient, vec({2.0 * std::sin(angle), std::cos(angle)})};
    const Vec n = vec({-std::sin(angle) / 2.0, -std::cos(angle)}).normalized();
    const double rho_el = cut_time(el, TangentVector{f, n}).rho;
    EXPECT_LE(std::abs(rho_el - prev_el), 1e-2);
    prev_el = rho_el;
  }
}

TEST(CutTime, RejectsDirectionsFromAnotherManifold) {
  const Submanifold eq(ManifoldId::sphere(2), EquatorSphere{1});
  const TangentVector v{ManifoldPoint{ManifoldId::sphere(3), vec({1, 0, 0, 0})}, vec({0, 0, 1, 0})};
  try {
    cut_time(eq, v);
    FAIL() << "expected BaseMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BaseMismatch);
  }
}

TEST(CutTimeWith, BisectsCustomOracle) {
  // Distance to the pair of poles of S^2, written by hand.
  const auto distance = [](const ManifoldPoint& p) { return std::acos(std::min(1.0, std::abs(p.coords(2)))); };
  const TangentVector v{ManifoldPoint{ManifoldId::sphere(2), vec({0, 0, 1})}, vec({1, 0, 0})};
  BisectionSettings settings;
  settings.t_max = kPi;
  settings.diameter = kPi;
  const CutTimeResult r = cut_time_with(distance, v, settings);
  EXPECT_TRUE(r.in_range);
  EXPECT_NEAR(r.rho, kPi / 2.0, 1e-9);
}

TEST(SeparatingTest, Examples) {
  const Submanifold pm1(ManifoldId::matrix_space(1), OrthogonalGroup{});
  const MinimizerSet zero = separating_test(pm1, ManifoldPoint::from_matrix(pm1.ambient, Mat::Zero(1, 1)));
  EXPECT_TRUE(zero.separating());
  EXPECT_EQ(zero.multiplicity(), 2u);
  EXPECT_NEAR(zero.distance, 1.0, 1e-14);

  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  const MinimizerSet mid = separating_test(link, ManifoldPoint{link.ambient, vec({.5, .5, .5, .5})});
  EXPECT_TRUE(mid.separating());
  EXPECT_EQ(mid.multiplicity(), 2u);

  const Submanifold on(ManifoldId::matrix_space(2), OrthogonalGroup{});
  const MinimizerSet rank1 = separating_test(on, ManifoldPoint::from_matrix(on.ambient, diag(1, 0)));
  EXPECT_TRUE(rank1.separating());
  EXPECT_EQ(rank1.multiplicity(), 2u);

  const MinimizerSet regular = separating_test(on, ManifoldPoint::from_matrix(on.ambient, diag(2, 3)));
  EXPECT_FALSE(regular.separating());
}

TEST(SampleCutLocus, EquatorCircleInS3) {
  const Submanifold eq(ManifoldId::sphere(3), EquatorSphere{1});
  SampleConfig config;
  config.feet = 8;
  config.dirs_per_foot = 8;
  const CutCloud cloud = sample_cut_locus(eq, config);
  ASSERT_EQ(cloud.samples.size(), 64u);
  for (const CutSample& s : cloud.samples) {
    EXPECT_LE(s.cut_point.coords.head(2).norm(), 1e-8);
    EXPECT_NEAR(s.rho, kPi / 2.0, 1e-8);
    EXPECT_EQ(s.classification, CutClass::separating);
    EXPECT_NEAR(dist_to(eq, s.cut_point).distance, s.rho, 1e-7);
    EXPECT_LE((shoot(eq, s.direction, s.rho).coords - s.cut_point.coords).norm(), 1e-8);
  }
}

TEST(SampleCutLocus, HopfLinkLandsOnCliffordTorus) {
  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  SampleConfig config;
  config.feet = 8;
  config.dirs_per_foot = 8;
  for (const CutSample& s : sample_cut_locus(link, config).samples) {
    EXPECT_NEAR(s.cut_point.coords.head(2).norm(), std::sqrt(0.5), 1e-6);
    EXPECT_NEAR(s.cut_point.coords.tail(2).norm(), std::sqrt(0.5), 1e-6);
    EXPECT_EQ(s.multiplicity, 2u);
  }
}

TEST(SampleCutLocus, ThreeEquatorialPointsCutOnMidpointMeridians) {
  std::vector<Vec> points;
  for (int k = 0; k < 3; ++k) points.push_back(vec({std::cos(2 * kPi * k / 3), std::sin(2 * kPi * k / 3), 0}));
  const Submanifold three(ManifoldId::sphere(2), FinitePoints{points});
  SampleConfig config;
  config.feet = 3;
  config.dirs_per_foot = 32;
  const CutCloud cloud = sample_cut_locus(three, config);
  EXPECT_EQ(cloud.samples.size(), 96u);
  for (const CutSample& s : cloud.samples) {
    const Vec& c = s.cut_point.coords;
    if (c.head(2).norm() < 1e-6) continue;  // a pole, where the half-circles meet
    const double azimuth = std::atan2(c(1), c(0));
    double best = kPi;
    for (double m : {kPi / 3, kPi, -kPi / 3, -kPi}) best = std::min(best, std::abs(azimuth - m));
    EXPECT_LE(best, 1e-6);
    EXPECT_EQ(s.classification, CutClass::separating);
  }
}

TEST(SampleCutLocus, SeparatingSamplesConfirmedByMultistart) {
  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  SampleConfig config;
  config.feet = 4;
  config.dirs_per_foot = 4;
  OracleOptions options;
  options.seed = 777;
  options.tie = 1e-6;
  for (const CutSample& s : sample_cut_locus(link, config).samples) {
    ASSERT_EQ(s.classification, CutClass::separating);
    EXPECT_GE(multistart_dist(link, s.cut_point, options).multiplicity(), 2u);
  }
}

TEST(SampleCutLocus, DeterministicAcrossRuns) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  SampleConfig config;
  config.feet = 4;
  config.dirs_per_foot = 2;
  config.seed = 9;
  const CutCloud a = sample_cut_locus(el, config);
  const CutCloud b = sample_cut_locus(el, config);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].rho, b.samples[i].rho);
    EXPECT_EQ(a.samples[i].cut_point.coords, b.samples[i].cut_point.coords);
  }
  EXPECT_EQ(a.unresolved.size(), b.unresolved.size());
}

TEST(Flows, MorseBottReachesEquatorOnSameMeridian) {
  const Submanifold eq(ManifoldId::sphere(2), EquatorSphere{1});
  const double phi = 0.4, colatitude = kPi / 3;
  const ManifoldPoint q{eq.ambient, vec({std::sin(colatitude) * std::cos(phi), std::sin(colatitude) * std::sin(phi),
                                         std::cos(colatitude)})};
  const FlowState s = morse_bott_flow(eq, q, 20.0);
  EXPECT_LE((s.position.coords - vec({std::cos(phi), std::sin(phi), 0})).norm(), 1e-8);
  EXPECT_NEAR(s.distance_to_N, dist_to(eq, s.position).distance, 1e-8);
}

TEST(Flows, FlowLineDecay) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  const ManifoldPoint q{el.ambient, vec({1.0, 2.5})};
  const double d = dist_to(el, q).distance;
  for (double t : {0.1, 0.5, 1.5}) {
    const double f = std::pow(dist_to(el, morse_bott_flow(el, q, t).position).distance, 2);
    EXPECT_NEAR(f / (d * d * std::exp(-4.0 * t)), 1.0, 1e-6);
  }
}

TEST(Flows, RetractEndsOnN) {
  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const ManifoldPoint q{link.ambient, rng.unit_vector(4)};
    if (separating_test(link, q).separating()) continue;
    EXPECT_LE(dist_to(link, retract_to_N(link, q, 1.0)).distance, 1e-8);
  }
}

TEST(Flows, PushToCutFollowsNormalLine) {
  const Submanifold on(ManifoldId::matrix_space(2), OrthogonalGroup{});
  const Mat a = diag(0.5, 0.8);
  const ManifoldPoint q = ManifoldPoint::from_matrix(on.ambient, a);
  const Vec dir = flatten(Mat(a - Mat::Identity(2, 2))).normalized();
  for (double s : {0.0, 0.3, 0.7, 1.0}) {
    const Vec p = flatten(push_to_cut(on, q, s).matrix()) - flatten(Mat(Mat::Identity(2, 2)));
    EXPECT_LE((p - p.dot(dir) * dir).norm(), 1e-9) << "s=" << s;
  }
  EXPECT_LE(std::abs(push_to_cut(on, q, 1.0).matrix().determinant()), 1e-6);
}

TEST(Flows, RejectDegenerateStartingPoints) {
  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  try {
    morse_bott_flow(link, ManifoldPoint{link.ambient, vec({.5, .5, .5, .5})}, 1.0);
    FAIL() << "expected OnCutLocus";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OnCutLocus);
  }
  try {
    morse_bott_flow(link, ManifoldPoint{link.ambient, vec({1, 0, 0, 0})}, 1.0);
    FAIL() << "expected OnSubmanifold";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OnSubmanifold);
  }
}

TEST(GradientCheck, ClosedFormsMatchFiniteDifferences) {
  const Submanifold eq(ManifoldId::sphere(2), EquatorSphere{1});
  Rng rng(44);
  for (int i = 0; i < 20; ++i) {
    const Vec x = rng.unit_vector(3);
    if (std::abs(x(2)) < 0.05 || std::abs(x(2)) > 0.95) continue;
    EXPECT_LE(gradient_check(eq, ManifoldPoint{eq.ambient, x}), 1e-4);
  }
  const Submanifold on(ManifoldId::matrix_space(2), OrthogonalGroup{});
  EXPECT_LE(gradient_check(on, ManifoldPoint::from_matrix(on.ambient, diag(2, 3))), 1e-5);
}

TEST(OneSidedProbe, EllipseSeparatingPointHasSlopeGap) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  const ManifoldPoint q{el.ambient, vec({0.5, 0})};
  const MinimizerSet m = dist_to(el, q);
  ASSERT_EQ(m.multiplicity(), 2u);
  const Vec incoming = (q.coords - m.minimizers.front().coords).normalized();
  const OneSidedProbe probe = onesided_derivative_probe(el, q, incoming);
  EXPECT_GT(probe.gap, 0.01);
  EXPECT_NEAR(probe.left_slope, 2.0 * m.distance, 1e-4);
}

TEST(OneSidedProbe, EllipseEndpointIsOnceButNotTwiceDifferentiable) {
  const Submanifold el(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
  const OneSidedProbe probe = onesided_derivative_probe(el, ManifoldPoint{el.ambient, vec({1.5, 0})}, vec({1, 0}));
  EXPECT_LE(std::abs(probe.gap), 1e-4);
  ASSERT_FALSE(probe.right_quadratic.empty());
  EXPECT_NEAR(probe.right_quadratic.back(), 1.0, 0.15);
  EXPECT_NEAR(probe.left_quadratic.back(), -1.0 / 3.0, 0.05);
}

TEST(NormalGeodesic, RecoversFootAndDirection) {
  const Submanifold eq(ManifoldId::sphere(2), EquatorSphere{1});
  const ManifoldPoint q{eq.ambient, vec({0.6, 0, 0.8})};
  const NormalGeodesic g = normal_geodesic(eq, q);
  EXPECT_LE((g.foot.coords - vec({1, 0, 0})).norm(), 1e-14);
  EXPECT_LE((g.direction.vec - vec({0, 0, 1})).norm(), 1e-14);
  EXPECT_NEAR(g.distance, std::acos(0.6), 1e-14);
}

}  // namespace
}  // namespace cutloci
