#include <benchmark/benchmark.h>

#include <cmath>

#include "cesaro/magnitude.hpp"
#include "cesaro/modulus.hpp"
#include "cesaro/rademacher.hpp"
#include "cesaro/rates.hpp"
#include "cesaro/sampling.hpp"
#include "cesaro/spaces.hpp"
#include "cesaro/verify.hpp"

namespace {

using namespace cesaro;

void BM_magnitude_mul(benchmark::State& state) {
  auto a = LeveledMagnitude::make(2, Branch::huge, 300.0);
  auto b = LeveledMagnitude::make(1, Branch::huge, 250.0);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_magnitude_mul);

void BM_magnitude_pow(benchmark::State& state) {
  auto a = LeveledMagnitude::from_double(3.7e9);
  for (auto _ : state) benchmark::DoNotOptimize(pow(a, 1.7e8));
}
BENCHMARK(BM_magnitude_pow);

void BM_rademacher_exhaustive(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  LpSpace s{8, 2.0};
  CounterRng rng(1, 0);
  std::vector<LpPoint> pts(n);
  for (auto& p : pts) p = sample_lp_ball(8, 2.0, 1.0, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(rademacher_moment_exact(s, pts, 2.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_rademacher_exhaustive)->DenseRange(8, 16, 4);

void BM_cesaro_step(benchmark::State& state) {
  LpSpace s{2, 2.0};
  MapDescriptor rot = rotation_map({1.0}, 2.0);
  long long n = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(cesaro_run(s, rot, {1.0, 0.0}, n, 0.0, 0, n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_cesaro_step)->Arg(1000)->Arg(100000);

void BM_gamma_inv_hilbert(benchmark::State& state) {
  DerivedModuli d(ModulusSpec::hilbert(), 2.0);
  double y = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.gamma_inv(y));
  }
}
BENCHMARK(BM_gamma_inv_hilbert);

void BM_rate_plan_const_table(benchmark::State& state) {
  ModulusSpec m = ModulusSpec::step_table({{2.0, 0.5}});
  for (auto _ : state)
    benchmark::DoNotOptimize(rate_plan(0.9, 1.0, m, 2.0, 3.0));
}
BENCHMARK(BM_rate_plan_const_table);

void BM_profile_extraction(benchmark::State& state) {
  double delta = 1.0 - std::sqrt(3.0) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(rademacher_profile(delta));
}
BENCHMARK(BM_profile_extraction);

}  // namespace

BENCHMARK_MAIN();
