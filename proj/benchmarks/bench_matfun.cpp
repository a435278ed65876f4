#include <benchmark/benchmark.h>

#include "cutloci/groupgeo.hpp"
#include "cutloci/matfun.hpp"
#include "cutloci/random.hpp"

namespace {

using namespace cutloci;

Mat random_spd(int n) {
  Rng rng(1);
  const Mat b = rng.gaussian(n, n);
  return b * b.transpose() + Mat::Identity(n, n);
}

void BM_SymSqrt(benchmark::State& state) {
  const Mat a = random_spd(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(matfun::sym_sqrt<double>(a));
}
BENCHMARK(BM_SymSqrt)->Arg(2)->Arg(4)->Arg(8);

void BM_Polar(benchmark::State& state) {
  Rng rng(2);
  const Mat a = rng.gaussian(state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(matfun::polar<double>(a));
}
BENCHMARK(BM_Polar)->Arg(2)->Arg(4)->Arg(8);

void BM_PrincipalLog(benchmark::State& state) {
  const Mat a = random_spd(4);
  const auto method = state.range(0) == 0 ? matfun::LogMethod::eigen : matfun::LogMethod::gregory;
  for (auto _ : state) benchmark::DoNotOptimize(matfun::principal_log<double>(a, method));
}
BENCHMARK(BM_PrincipalLog)->Arg(0)->Arg(1)->ArgNames({"gregory"});

void BM_FrechetSqrt(benchmark::State& state) {
  const Mat a = random_spd(static_cast<int>(state.range(0)));
  const Mat h = random_spd(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(matfun::frechet_sqrt(a, h));
}
BENCHMARK(BM_FrechetSqrt)->Arg(2)->Arg(6);

void BM_UpqDecompose(benchmark::State& state) {
  Rng rng(3);
  const CMat a = groupgeo::random_upq(rng, 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(groupgeo::upq_decompose(a, 2, 1));
}
BENCHMARK(BM_UpqDecompose);

}  // namespace
