#include <benchmark/benchmark.h>

#include "cutloci/cutengine.hpp"
#include "cutloci/equivariant.hpp"

namespace {

using namespace cutloci;

Submanifold make(int which) {
  switch (which) {
    case 0: return Submanifold(ManifoldId::sphere(3), EquatorSphere{1});
    case 1: return Submanifold(ManifoldId::sphere(3), HopfLink{});
    case 2: return Submanifold(ManifoldId::euclidean(2), Ellipse{2.0, 1.0});
    default: return Submanifold(ManifoldId::matrix_space(3), OrthogonalGroup{});
  }
}

void BM_DistTo(benchmark::State& state) {
  const Submanifold sub = make(static_cast<int>(state.range(0)));
  Rng rng(4);
  Vec q = rng.gaussian(sub.ambient.coord_size());
  if (sub.ambient.kind == ManifoldKind::sphere) q.normalize();
  const ManifoldPoint p{sub.ambient, q};
  for (auto _ : state) benchmark::DoNotOptimize(dist_to(sub, p));
  state.SetLabel(sub.to_string());
}
BENCHMARK(BM_DistTo)->DenseRange(0, 3);

void BM_MultistartDist(benchmark::State& state) {
  const Submanifold sub(ManifoldId::sphere(5), FermatLift{2});
  Rng rng(5);
  const ManifoldPoint p{sub.ambient, rng.unit_vector(6)};
  for (auto _ : state) benchmark::DoNotOptimize(multistart_dist(sub, p));
}
BENCHMARK(BM_MultistartDist)->Unit(benchmark::kMillisecond);

void BM_CutTime(benchmark::State& state) {
  const Submanifold sub = make(static_cast<int>(state.range(0)));
  Rng rng(6);
  const ManifoldPoint foot = sample_point(sub, rng);
  TangentVector v = unit_normal_sample(sub, foot, 1, 1).front();
  if (sub.ambient.kind == ManifoldKind::euclidean && v.vec.dot(foot.coords) > 0.0) v.vec = -v.vec;
  for (auto _ : state) benchmark::DoNotOptimize(cut_time(sub, v));
  state.SetLabel(sub.to_string());
}
BENCHMARK(BM_CutTime)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_SampleCutLocus(benchmark::State& state) {
  const Submanifold sub = make(static_cast<int>(state.range(0)));
  SampleConfig config;
  config.feet = 16;
  config.dirs_per_foot = 16;
  for (auto _ : state) benchmark::DoNotOptimize(sample_cut_locus(sub, config));
  state.SetItemsProcessed(state.iterations() * config.feet * config.dirs_per_foot);
  state.SetLabel(sub.to_string());
}
BENCHMARK(BM_SampleCutLocus)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_QuotientDistCircle(benchmark::State& state) {
  const auto s3 = ManifoldId::sphere(3);
  const GroupAction hopf = GroupAction::parse(s3, "hopf");
  Rng rng(7);
  const ManifoldPoint a{s3, rng.unit_vector(4)}, b{s3, rng.unit_vector(4)};
  for (auto _ : state) benchmark::DoNotOptimize(quotient_dist(hopf, a, b));
}
BENCHMARK(BM_QuotientDistCircle)->Unit(benchmark::kMicrosecond);

}  // namespace
