#include "cutloci_checks/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>

#include "cutloci/cutengine.hpp"
#include "cutloci/equivariant.hpp"
#include "cutloci/error.hpp"
#include "cutloci/groupgeo.hpp"
#include "cutloci/matfun.hpp"
#include "cutloci/parallel.hpp"
#include "cutloci/random.hpp"

namespace cutloci::checks {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240611;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// U diag(s) V^T with s uniform in [lo, hi]; det > 0 when `positive`.
Mat random_conditioned(Rng& rng, int n, double lo, double hi, bool positive) {
  const Mat u = random_orthogonal(rng, n);
  Mat v = random_orthogonal(rng, n);
  Vec s(n);
  for (int i = 0; i < n; ++i) s(i) = rng.uniform(lo, hi);
  if (positive && u.determinant() * v.determinant() < 0.0) v.col(0) = -v.col(0);
  return u * s.asDiagonal() * v.transpose();
}

Mat random_spd(Rng& rng, int n) {
  const Mat b = rng.gaussian(n, n);
  return b * b.transpose() + 0.5 * Mat::Identity(n, n);
}

Mat random_symmetric(Rng& rng, int n) {
  const Mat b = rng.gaussian(n, n);
  return (b + b.transpose()) / 2.0;
}

struct Max {
  double value = 0.0;
  void operator()(double x) {
    if (std::isnan(x) || x > value) value = std::isnan(x) ? std::numeric_limits<double>::infinity() : x;
  }
};

std::vector<Check> frechet_and_gradient() {
  std::vector<Check> out;
  Rng rng(kSeed + 5);
  Max frechet_fd, sylvester, grad_fd, grad_polar;
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 5;
    const Mat a = random_spd(rng, n);
    const Mat hm = random_symmetric(rng, n);
    const Mat x = matfun::frechet_sqrt(a, hm);
    const Mat fd = (matfun::sym_sqrt<double>(Mat(a + h * hm)) - matfun::sym_sqrt<double>(Mat(a - h * hm))) / (2.0 * h);
    frechet_fd((x - fd).norm() / x.norm());
    const Mat r = matfun::sym_sqrt<double>(a);
    sylvester((x * r + r * x - hm).norm() / hm.norm());
  }
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 3;
    const Mat a = random_conditioned(rng, n, 0.3, 3.0, false);
    const Mat hm = rng.gaussian(n, n);
    const Mat g = matfun::grad_trace_sqrt(a);
    const auto trace_sqrt = [](const Mat& m) { return matfun::sym_sqrt<double>(Mat(m.transpose() * m)).trace(); };
    const double fd = (trace_sqrt(a + h * hm) - trace_sqrt(a - h * hm)) / (2.0 * h);
    const double exact = (g.array() * hm.array()).sum();
    grad_fd(std::abs(exact - fd) / (g.norm() * hm.norm()));
    grad_polar((g - matfun::polar<double>(a).orthogonal_factor).norm());
  }
  out.push_back(check_at_most("frechet_sqrt.finite_difference_rel", frechet_fd.value, 1e-6));
  out.push_back(check_at_most("frechet_sqrt.sylvester_identity_rel", sylvester.value, 1e-10));
  out.push_back(check_at_most("grad_trace_sqrt.finite_difference_rel", grad_fd.value, 1e-6));
  out.push_back(check_at_most("grad_trace_sqrt.equals_polar_factor", grad_polar.value, 1e-10));
  return out;
}

std::vector<Check> hessian_checks() {
  std::vector<Check> out;
  Rng rng(kSeed + 55);
  for (int n : {2, 3}) {
    Max worst;
    for (int i = 0; i < 4; ++i) {
      const Mat q = i == 0 ? Mat(Mat::Identity(n, n)) : random_orthogonal(rng, n);
      const Mat hess = groupgeo::hessian_normal_check(q);
      worst((hess - 2.0 * Mat::Identity(hess.rows(), hess.cols())).cwiseAbs().maxCoeff());
    }
    out.push_back(check_at_most("hessian.O(" + std::to_string(n) + ").equals_2I", worst.value, 1e-3));
  }
  return out;
}

/// Directed check that all cut samples satisfy a predicate, plus sample counts.
void cloud_checks(std::vector<Check>& out, const std::string& prefix, const CutCloud& cloud, std::size_t expected) {
  out.push_back(check_at_least(prefix + ".resolved_samples", static_cast<double>(cloud.samples.size()),
                               static_cast<double>(expected)));
}

}  // namespace

Params parse_params(std::string_view text) {
  Params params;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::ParseError, "expected key=value in params, got '" + std::string(item) + "'");
    }
    params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return params;
}

std::vector<Check> sphere_joins() {
  std::vector<Check> out;
  const auto start = Clock::now();
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k <= n - 1; ++k) {
      const Submanifold sub(ManifoldId::sphere(n), EquatorSphere{k});
      SampleConfig config;
      config.feet = 32;
      config.dirs_per_foot = 64;
      config.seed = kSeed + static_cast<std::uint64_t>(10 * n + k);
      const CutCloud cloud = sample_cut_locus(sub, config);
      Max rho, head, tail;
      for (const CutSample& s : cloud.samples) {
        rho(std::abs(s.rho - kPi / 2.0));
        head(s.cut_point.coords.head(k + 1).norm());
        tail(std::abs(s.cut_point.coords.tail(n - k).norm() - 1.0));
      }
      const std::string prefix = "sphere_join.S" + std::to_string(n) + ".k" + std::to_string(k);
      cloud_checks(out, prefix, cloud, 2048);
      out.push_back(check_at_most(prefix + ".rho_minus_half_pi", rho.value, 1e-8));
      out.push_back(check_at_most(prefix + ".cut_point_head_norm", head.value, 1e-8));
      out.push_back(check_at_most(prefix + ".cut_point_tail_unit", tail.value, 1e-8));
    }
  }
  out.push_back(check_at_most("sphere_join.runtime_seconds", seconds_since(start), 10.0));
  return out;
}

std::vector<Check> point_cut_locus() {
  std::vector<Check> out;
  Rng rng(kSeed + 2);
  for (int n = 1; n <= 4; ++n) {
    const Vec p = rng.unit_vector(n + 1);
    const Submanifold sub(ManifoldId::sphere(n), FinitePoints{{p}});
    SampleConfig config;
    config.feet = 4;
    config.dirs_per_foot = 16;
    config.seed = kSeed + static_cast<std::uint64_t>(n);
    const CutCloud cloud = sample_cut_locus(sub, config);
    Max rho, antipode;
    for (const CutSample& s : cloud.samples) {
      rho(std::abs(s.rho - kPi));
      antipode((s.cut_point.coords + p).norm());
    }
    const std::string prefix = "point_cut.S" + std::to_string(n);
    cloud_checks(out, prefix, cloud, 64);
    out.push_back(check_at_most(prefix + ".rho_minus_pi", rho.value, 1e-9));
    out.push_back(check_at_most(prefix + ".cut_point_is_antipode", antipode.value, 1e-8));
  }
  for (int n = 2; n <= 3; ++n) {
    const Submanifold sub(ManifoldId::flat_torus(n), FinitePoints{{Vec::Constant(n, 0.5)}});
    SampleConfig config;
    config.feet = 4;
    config.dirs_per_foot = 64;
    config.seed = kSeed + 100 + static_cast<std::uint64_t>(n);
    const CutCloud cloud = sample_cut_locus(sub, config);
    Max boundary;
    for (const CutSample& s : cloud.samples) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x = s.cut_point.coords(i);
        best = std::min(best, std::min(std::abs(x), std::abs(1.0 - x)));
      }
      boundary(best);
    }
    const std::string prefix = "point_cut.T" + std::to_string(n);
    cloud_checks(out, prefix, cloud, 256);
    out.push_back(check_at_most(prefix + ".distance_to_domain_boundary", boundary.value, 1e-6));
  }
  return out;
}

std::vector<Check> orthogonal_oracle() {
  std::vector<Check> out;
  Rng rng(kSeed + 3);
  for (int n : {2, 3}) {
    const ManifoldId m = ManifoldId::matrix_space(n);
    const Submanifold sub(m, OrthogonalGroup{});
    std::vector<Mat> inputs;
    for (int i = 0; i < 100; ++i) inputs.push_back(rng.gaussian(n, n));
    std::vector<double> dist_gap(inputs.size()), min_gap(inputs.size()), closed_vs_formula(inputs.size());
    parallel_for(inputs.size(), [&](std::size_t i) {
      const ManifoldPoint q = ManifoldPoint::from_matrix(m, inputs[i]);
      const MinimizerSet closed = dist_to(sub, q);
      OracleOptions options;
      options.seed = kSeed + i;
      const MinimizerSet numeric = multistart_dist(sub, q, options);
      dist_gap[i] = std::abs(closed.distance - numeric.distance);
      const Mat polar = matfun::polar<double>(inputs[i]).orthogonal_factor;
      min_gap[i] = (numeric.minimizers.front().matrix() - polar).norm();
      // f(A) = n + tr(A^T A) - 2 tr sqrt(A^T A).
      const Mat& a = inputs[i];
      const double f = n + (a.transpose() * a).trace() - 2.0 * matfun::sym_sqrt<double>(Mat(a.transpose() * a)).trace();
      closed_vs_formula[i] = std::abs(closed.distance * closed.distance - f);
    });
    const std::string prefix = "orthogonal.O" + std::to_string(n);
    out.push_back(check_at_most(prefix + ".closed_vs_multistart_distance",
                                *std::max_element(dist_gap.begin(), dist_gap.end()), 1e-6));
    out.push_back(check_at_most(prefix + ".multistart_minimizer_vs_polar",
                                *std::max_element(min_gap.begin(), min_gap.end()), 1e-6));
    out.push_back(check_at_most(prefix + ".squared_distance_vs_trace_formula",
                                *std::max_element(closed_vs_formula.begin(), closed_vs_formula.end()), 1e-9));
  }
  // Rank-deficient inputs: the whole family U (I_k + C) V^T is equidistant.
  Max equidistant, orthogonal;
  double min_multiplicity = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 2;
    const int k = rng.integer(0, n - 1);
    const Mat u = random_orthogonal(rng, n);
    const Mat v = random_orthogonal(rng, n);
    Vec s = Vec::Zero(n);
    for (int j = 0; j < k; ++j) s(j) = rng.uniform(0.3, 3.0);
    const Mat a = u * s.asDiagonal() * v.transpose();
    const ManifoldId m = ManifoldId::matrix_space(n);
    const MinimizerSet ms = dist_to(Submanifold(m, OrthogonalGroup{}), ManifoldPoint::from_matrix(m, a));
    min_multiplicity = std::min(min_multiplicity, ms.saturated ? 1e9 : static_cast<double>(ms.multiplicity()));
    std::vector<Mat> members;
    for (const ManifoldPoint& p : ms.minimizers) members.push_back(p.matrix());
    // Independently sampled members from this SVD.
    for (int j = 0; j < 8; ++j) {
      Mat block = Mat::Identity(n, n);
      block.bottomRightCorner(n - k, n - k) = random_orthogonal(rng, n - k);
      members.push_back(u * block * v.transpose());
    }
    for (const Mat& b : members) {
      orthogonal((b.transpose() * b - Mat::Identity(n, n)).norm());
      equidistant(std::abs((a - b).norm() - ms.distance));
    }
  }
  out.push_back(check_at_most("orthogonal.singular.members_orthogonal", orthogonal.value, 1e-9));
  out.push_back(check_at_most("orthogonal.singular.members_equidistant", equidistant.value, 1e-9));
  out.push_back(check_at_least("orthogonal.singular.multiplicity", min_multiplicity, 2.0));
  return out;
}

std::vector<Check> flow_ode() {
  std::vector<Check> out;
  Rng rng(kSeed + 4);
  Max residual, gram;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 3;
    const Mat a = random_conditioned(rng, n, 0.3, 3.0, false);
    const double t = rng.uniform(0.0, 3.0);
    residual(groupgeo::flow_ode_residual(a, t));
    gram(groupgeo::flow_gram_defect(a, t));
  }
  out.push_back(check_at_most("flow.ode_residual", residual.value, 1e-7));
  out.push_back(check_at_most("flow.gram_identity", gram.value, 1e-9));
  Max ortho;
  Mat d23(2, 2);
  d23 << 2.0, 0.0, 0.0, 3.0;
  std::vector<Mat> inputs{d23};
  for (int i = 0; i < 20; ++i) inputs.push_back(random_conditioned(rng, 2 + i % 3, 0.5, 2.0, false));
  for (const Mat& a : inputs) {
    const Mat g = groupgeo::flow_to_orthogonal(a, 10.0);
    ortho((g.transpose() * g - Mat::Identity(a.rows(), a.cols())).norm());
  }
  out.push_back(check_at_most("flow.orthogonality_at_t10", ortho.value, 1e-8));
  out.push_back(check_at_most("flow.diag23_limit_is_identity",
                              (groupgeo::flow_to_orthogonal(d23, 10.0) - Mat::Identity(2, 2)).norm(), 1e-8));
  return out;
}

std::vector<Check> derivative_oracles() {
  std::vector<Check> out = frechet_and_gradient();
  for (Check& c : hessian_checks()) out.push_back(std::move(c));
  return out;
}

std::vector<Check> left_invariant_distance() {
  std::vector<Check> out;
  Rng rng(kSeed + 6);
  Max closed, length;
  std::vector<Mat> inputs;
  Mat d23(2, 2);
  d23 << 2.0, 0.0, 0.0, 3.0;
  inputs.push_back(d23);
  for (int i = 0; i < 30; ++i) inputs.push_back(random_conditioned(rng, 2 + i % 3, 0.3, 3.0, true));
  for (const Mat& a : inputs) {
    const int n = static_cast<int>(a.rows());
    const ManifoldId m = ManifoldId::glplus(n);
    const double d = dist_to(Submanifold(m, SpecialOrthogonal{}), ManifoldPoint::from_matrix(m, a)).distance;
    // sqrt(sum (log lambda_i)^2) with lambda_i the eigenvalues of sqrt(A^T A).
    const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(a.transpose() * a).eigenvalues();
    const double formula = std::sqrt((0.5 * ev.array().log()).square().sum());
    closed(std::abs(d - formula));
    length(std::abs(d - groupgeo::geodesic_to_SO_length(a)));
  }
  out.push_back(check_at_most("left_invariant.distance_vs_log_eigenvalues", closed.value, 1e-8));
  out.push_back(check_at_most("left_invariant.distance_vs_integrated_speed", length.value, 1e-8));
  Max speed;
  for (std::size_t i = 0; i < 5; ++i) speed(groupgeo::geodesic_to_SO_speed_variation(inputs[i]));
  out.push_back(check_at_most("left_invariant.constant_speed", speed.value, 1e-6));
  return out;
}

std::vector<Check> upq_structure() {
  std::vector<Check> out;
  Rng rng(kSeed + 7);
  Max membership, blocks, inverse, inverse_direct, round_trip, sqrt_member, series, unitary;
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 1}}) {
    for (int i = 0; i < 100; ++i) {
      const CMat a = groupgeo::random_upq(rng, p, q);
      const int size = p + q;
      membership(groupgeo::upq_membership(a, p, q));
      blocks(groupgeo::upq_block_identities(a, p, q).max());
      const CMat r = groupgeo::upq_inverse_closed_form(a, p, q);
      const CMat gram = a.adjoint() * a + CMat::Identity(size, size);
      inverse((gram * r - CMat::Identity(size, size)).norm());
      inverse_direct((r - gram.inverse()).norm());
      const groupgeo::UpqDecomposition dec = groupgeo::upq_decompose(a, p, q);
      round_trip((dec.unitary_part * matfun::mat_exp<Complex>(dec.n_part) - a).norm());
      CMat off = dec.unitary_part;
      off.topRightCorner(p, q).setZero();
      off.bottomLeftCorner(q, p).setZero();
      unitary(std::max((dec.unitary_part - off).norm(),
                       (dec.unitary_part.adjoint() * dec.unitary_part - CMat::Identity(size, size)).norm()));
      series((groupgeo::upq_n_part_series(a, p, q) - dec.n_part).norm());
      sqrt_member(groupgeo::upq_membership(matfun::sym_sqrt<Complex>(CMat(a.adjoint() * a)), p, q));
    }
  }
  out.push_back(check_at_most("upq.membership", membership.value, 1e-9));
  out.push_back(check_at_most("upq.block_identities", blocks.value, 1e-9));
  out.push_back(check_at_most("upq.closed_form_inverse", inverse.value, 1e-9));
  out.push_back(check_at_most("upq.closed_form_vs_direct_inverse", inverse_direct.value, 1e-9));
  out.push_back(check_at_most("upq.decomposition_round_trip", round_trip.value, 1e-9));
  out.push_back(check_at_most("upq.unitary_part_block_unitary", unitary.value, 1e-9));
  out.push_back(check_at_most("upq.block_series_vs_log", series.value, 1e-9));
  out.push_back(check_at_most("upq.sqrt_gram_membership", sqrt_member.value, 1e-8));
  Max boost;
  for (double r : {0.1, 1.0, 2.0}) boost(std::abs(groupgeo::dist_upq(groupgeo::boost_u11(r), 1, 1) - r * std::sqrt(2.0)));
  out.push_back(check_at_most("upq.boost_distance_r_sqrt2", boost.value, 1e-8));
  Max block_exp;
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}, std::pair{1, 3}}) {
    for (int i = 0; i < 20; ++i) {
      const CMat y = groupgeo::random_n_part(rng, p, q, rng.uniform(0.0, 2.0));
      block_exp((groupgeo::upq_block_exp(y, p, q) - matfun::mat_exp<Complex>(y)).norm());
    }
  }
  out.push_back(check_at_most("upq.block_exponential_vs_mat_exp", block_exp.value, 1e-10));
  return out;
}

std::vector<Check> ellipse_regularity() {
  std::vector<Check> out;
  const double a = 2.0, b = 1.0;
  const ManifoldId plane = ManifoldId::euclidean(2);
  const Submanifold sub(plane, Ellipse{a, b});
  double min_gap = std::numeric_limits<double>::infinity();
  for (double x : {-1.2, -0.5, 0.0, 0.5, 1.2}) {
    Vec q(2);
    q << x, 0.0;
    const ManifoldPoint point{plane, q};
    const MinimizerSet ms = dist_to(sub, point);
    // Arrive along the geodesic from the upper minimizer.
    const ManifoldPoint* foot = &ms.minimizers.front();
    for (const ManifoldPoint& m : ms.minimizers)
      if (m.coords(1) > foot->coords(1)) foot = &m;
    const Vec incoming = (q - foot->coords).normalized();
    min_gap = std::min(min_gap, onesided_derivative_probe(sub, point, incoming).gap);
  }
  out.push_back(check_at_least("ellipse.separating_slope_gap", min_gap, 0.01));
  Vec p0(2);
  p0 << (a * a - b * b) / a, 0.0;
  Vec axis(2);
  axis << 1.0, 0.0;
  const OneSidedProbe probe = onesided_derivative_probe(sub, ManifoldPoint{plane, p0}, axis);
  out.push_back(check_at_most("ellipse.P0.slope_agreement", std::abs(probe.gap), 1e-4));
  Max right, left;
  for (double c : probe.right_quadratic) right(std::abs(c - 1.0) / 1.0);
  for (double c : probe.left_quadratic) left(std::abs(c + 1.0 / 3.0) / (1.0 / 3.0));
  out.push_back(check_at_most("ellipse.P0.right_quadratic_rel_to_1", right.value, 0.15));
  out.push_back(check_at_most("ellipse.P0.left_quadratic_rel_to_minus_third", left.value, 0.15));
  return out;
}

std::vector<Check> morse_bott() {
  std::vector<Check> out;
  Rng rng(kSeed + 9);
  const ManifoldId s2 = ManifoldId::sphere(2);
  const Submanifold equator(s2, EquatorSphere{1});
  const ManifoldId m2 = ManifoldId::matrix_space(2);
  const Submanifold orth(m2, OrthogonalGroup{});
  std::vector<std::pair<const Submanifold*, ManifoldPoint>> cases;
  while (cases.size() < 100) {
    const Vec x = rng.unit_vector(3);
    if (std::abs(x(2)) < 0.05 || std::abs(x(2)) > 0.95) continue;
    cases.emplace_back(&equator, ManifoldPoint{s2, x});
  }
  for (int i = 0; i < 100; ++i)
    cases.emplace_back(&orth, ManifoldPoint::from_matrix(m2, random_conditioned(rng, 2, 0.3, 3.0, false)));
  Max sphere_grad, orth_grad, decay;
  for (const auto& [sub, q] : cases) {
    const double r = gradient_check(*sub, q);
    (sub == &equator ? sphere_grad : orth_grad)(r);
    const double d = dist_to(*sub, q).distance;
    for (double t : {0.25, 1.0, 2.0}) {
      const FlowState s = morse_bott_flow(*sub, q, t);
      const double f = std::pow(dist_to(*sub, s.position).distance, 2);
      const double expected = d * d * std::exp(-4.0 * t);
      decay(std::abs(f - expected) / expected);
    }
  }
  out.push_back(check_at_most("morse_bott.gradient.sphere_equator", sphere_grad.value, 1e-4));
  out.push_back(check_at_most("morse_bott.gradient.orthogonal2", orth_grad.value, 1e-4));
  out.push_back(check_at_most("morse_bott.flow_decay_rel", decay.value, 1e-6));
  return out;
}

std::vector<Check> hopf_link() {
  std::vector<Check> out;
  const Submanifold sub(ManifoldId::sphere(3), HopfLink{});
  SampleConfig config;
  config.feet = 32;
  config.dirs_per_foot = 64;
  config.seed = kSeed + 10;
  const CutCloud cloud = sample_cut_locus(sub, config);
  Max torus;
  double not_separating = 0.0, wrong_multiplicity = 0.0;
  for (const CutSample& s : cloud.samples) {
    torus(std::abs(s.cut_point.coords.head(2).norm() - std::sqrt(0.5)));
    torus(std::abs(s.cut_point.coords.tail(2).norm() - std::sqrt(0.5)));
    if (s.classification != CutClass::separating) not_separating += 1.0;
    if (s.multiplicity != 2 || s.saturated) wrong_multiplicity += 1.0;
  }
  cloud_checks(out, "hopf_link", cloud, 2048);
  out.push_back(check_at_most("hopf_link.clifford_torus_defect", torus.value, 1e-6));
  out.push_back(check_at_most("hopf_link.non_separating_samples", not_separating, 0.0));
  out.push_back(check_at_most("hopf_link.multiplicity_not_2", wrong_multiplicity, 0.0));
  return out;
}

std::vector<Check> equivariant_quotients() {
  std::vector<Check> out;
  Rng rng(kSeed + 11);
  const Vec p = rng.unit_vector(3);
  struct Case {
    std::string name;
    Submanifold sub;
    GroupAction action;
  };
  const ManifoldId s2 = ManifoldId::sphere(2), s3 = ManifoldId::sphere(3);
  std::vector<Case> cases{
      {"antipodal_point_pair", Submanifold(s2, FinitePoints{{p, -p}}), GroupAction::parse(s2, "antipodal")},
      {"hopf_equatorial_circle", Submanifold(s3, EquatorSphere{1}), GroupAction::parse(s3, "hopf")},
  };
  for (const Case& c : cases) {
    const std::string prefix = "equivariant." + c.name;
    std::vector<double> discrepancies;
    double slowest = 0.0;
    EquivarianceReport last;
    for (int samples : {250, 500, 1000, 2000}) {
      const auto start = Clock::now();
      last = equivariance_check(c.sub, c.action, samples, kSeed + 12);
      slowest = std::max(slowest, seconds_since(start));
      discrepancies.push_back(last.max_discrepancy());
    }
    out.push_back(check_at_most(prefix + ".max_discrepancy_2000", discrepancies.back(), 1e-3));
    // Non-increasing over the three doublings, up to a 1e-8 noise floor.
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < discrepancies.size(); ++i)
      worst_increase = std::max(worst_increase, discrepancies[i] - std::max(discrepancies[i - 1], 1e-8));
    out.push_back(check_at_most(prefix + ".increase_over_doublings", worst_increase, 0.0));
    out.push_back(check_at_most(prefix + ".slowest_run_seconds", slowest, 60.0));
    out.push_back(check_at_most(prefix + ".unresolved", static_cast<double>(last.unresolved), 0.0));
    if (c.action.kind == ActionKind::circle) {
      out.push_back(check_at_most(prefix + ".downstairs_rho_minus_half_pi",
                                  std::max(std::abs(last.min_rho_down - kPi / 2), std::abs(last.max_rho_down - kPi / 2)),
                                  1e-6));
    }
  }
  return out;
}

std::vector<Check> fermat(const Params& params) {
  std::vector<std::pair<int, int>> cases;  // (n, d)
  if (params.count("n") || params.count("d")) {
    const auto get = [&](const char* key, int fallback) {
      const auto it = params.find(key);
      if (it == params.end()) return fallback;
      try {
        return std::stoi(it->second);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, std::string("bad integer for ") + key + ": " + it->second);
      }
    };
    cases.emplace_back(get("n", 1), get("d", 2));
  } else {
    for (int d = 2; d <= 8; ++d) cases.emplace_back(1, d);
    for (int n = 2; n <= 3; ++n) cases.emplace_back(n, 2);
  }
  std::vector<Check> out;
  for (auto [n, d] : cases) {
    const FermatReport report = fermat_verify(d, n, 16, kSeed + 13);
    if (report.mode != "verification") {
      throw Error(ErrorCode::UnsupportedRegime, "n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                                                    " is exploratory only; use the explore command");
    }
    out.insert(out.end(), report.checks.begin(), report.checks.end());
  }
  return out;
}

std::vector<Check> matfun_contracts() {
  std::vector<Check> out;
  Rng rng(kSeed + 14);
  Max sqrt_sq, polar_rec, polar_orth, log_exp, exp_log, gregory_eigen;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 5;
    const Mat a = random_spd(rng, n);
    const Mat r = matfun::sym_sqrt<double>(a);
    sqrt_sq((r * r - a).norm() / a.norm());
    const Mat g = rng.gaussian(n, n);
    const auto pf = matfun::polar<double>(g);
    polar_rec((pf.orthogonal_factor * pf.psd_factor - g).norm() / g.norm());
    polar_orth((pf.orthogonal_factor.transpose() * pf.orthogonal_factor - Mat::Identity(n, n)).norm());
    const CMat h = [&] {
      const CMat c = rng.complex_gaussian(n, n);
      CMat x = (c + c.adjoint()) / 2.0;
      return CMat(x * (rng.uniform(0.1, 5.0) / x.norm()));
    }();
    const CMat e = matfun::mat_exp<Complex>(h);
    exp_log((matfun::principal_log<Complex>(e, matfun::LogMethod::eigen) - h).norm());
    const CMat spd = a.cast<Complex>() / a.norm() * 2.0 + CMat::Identity(n, n) * 0.5;
    const CMat l = matfun::principal_log<Complex>(spd, matfun::LogMethod::eigen);
    log_exp((matfun::mat_exp<Complex>(l) - spd).norm() / spd.norm());
    gregory_eigen((matfun::principal_log<Complex>(spd, matfun::LogMethod::gregory) - l).norm());
  }
  out.push_back(check_at_most("matfun.sqrt_squared_rel", sqrt_sq.value, 1e-10));
  out.push_back(check_at_most("matfun.polar_reconstruction_rel", polar_rec.value, 1e-10));
  out.push_back(check_at_most("matfun.polar_orthogonality", polar_orth.value, 1e-10));
  out.push_back(check_at_most("matfun.exp_of_log_rel", log_exp.value, 1e-9));
  out.push_back(check_at_most("matfun.log_of_exp", exp_log.value, 1e-9));
  out.push_back(check_at_most("matfun.gregory_vs_eigen_log", gregory_eigen.value, 1e-9));
  for (Check& c : frechet_and_gradient()) out.push_back(std::move(c));
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"matfun", "flows", "groupgeo", "cutlocus", "equivariant", "fermat", "all"};
  return names;
}

std::vector<Check> run_suite(std::string_view name, const Params& params) {
  std::vector<Check> out;
  const auto add = [&](std::vector<Check> more) { out.insert(out.end(), more.begin(), more.end()); };
  const bool all = name == "all";
  bool known = all;
  if (all || name == "matfun") {
    known = true;
    add(matfun_contracts());
  }
  if (all || name == "flows") {
    known = true;
    add(flow_ode());
    add(morse_bott());
  }
  if (all || name == "groupgeo") {
    known = true;
    add(orthogonal_oracle());
    add(hessian_checks());
    add(left_invariant_distance());
    add(upq_structure());
  }
  if (all || name == "cutlocus") {
    known = true;
    add(sphere_joins());
    add(point_cut_locus());
    add(ellipse_regularity());
    add(hopf_link());
  }
  if (all || name == "equivariant") {
    known = true;
    add(equivariant_quotients());
  }
  if (all || name == "fermat") {
    known = true;
    add(fermat(all ? Params{} : params));
  }
  if (!known) throw Error(ErrorCode::ParseError, "unknown suite '" + std::string(name) + "'");
  return out;
}

}  // namespace cutloci::checks
