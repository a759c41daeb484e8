#include <benchmark/benchmark.h>

#include <random>

#include "gjmslab/boundary.hpp"
#include "gjmslab/inequalities.hpp"
#include "gjmslab/scattering.hpp"

using namespace gjmslab;

static void BM_GammaRatio(benchmark::State& state) {
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_ratio_real(x + 40.5, x + 2.25));
    x = x < 10 ? x + 0.01 : 0.3;
  }
}
BENCHMARK(BM_GammaRatio);

static void BM_Hyp2f1(benchmark::State& state) {
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hyp2f1(1.3, -0.7, 2.5, z));
    z = z < 0.95 ? z + 0.01 : 0.1;
  }
}
BENCHMARK(BM_Hyp2f1);

static void BM_AnalyzeSynthesize(benchmark::State& state) {
  SphereGeometry geo(3);
  const int L = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  ZonalFunction f = random_band_limited(geo, L, rng);
  ZonalGrid grid = make_grid(geo, 2 * L + 2);
  for (auto _ : state) benchmark::DoNotOptimize(analyze(synthesize(f, grid), grid, geo, L));
  state.SetComplexityN(L);
}
BENCHMARK(BM_AnalyzeSynthesize)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_FunkHecke(benchmark::State& state) {
  SphereGeometry geo(3);
  for (auto _ : state)
    for (int l = 0; l <= 20; ++l) benchmark::DoNotOptimize(funk_hecke_power_kernel(geo, 1.3, l, 24));
}
BENCHMARK(BM_FunkHecke);

static void BM_SobolevDeficit(benchmark::State& state) {
  SphereGeometry geo(2);
  ZonalFunction f = extremal_profile(0.3, 1.3, geo);
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_deficit(f, 1.3).deficit);
}
BENCHMARK(BM_SobolevDeficit);

static void BM_CenterOfMass(benchmark::State& state) {
  SphereGeometry geo(1);
  std::mt19937_64 rng(2);
  ZonalFunction f = random_positive(geo, 6, rng);
  for (auto _ : state) benchmark::DoNotOptimize(normalize_center_of_mass(f, 1.8).a_star);
}
BENCHMARK(BM_CenterOfMass);

static void BM_StabilityBound(benchmark::State& state) {
  SphereGeometry geo(1);
  std::mt19937_64 rng(3);
  ZonalFunction f = random_positive(geo, 6, rng);
  for (auto _ : state) benchmark::DoNotOptimize(stability_bound(f, 1.8).lower_bound);
}
BENCHMARK(BM_StabilityBound);

static void BM_PoissonSeries(benchmark::State& state) {
  SphereGeometry geo(2);
  std::mt19937_64 rng(4);
  PoissonSolution sol(random_band_limited(geo, 10, rng), 1.3);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_eval_series(sol, {0.7, 0.3}));
}
BENCHMARK(BM_PoissonSeries);

static void BM_PoissonIntegral(benchmark::State& state) {
  SphereGeometry geo(2);
  std::mt19937_64 rng(4);
  PoissonSolution sol(random_band_limited(geo, 10, rng), 1.3);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_eval_integral(sol, {0.7, 0.3}));
}
BENCHMARK(BM_PoissonIntegral);

static void BM_ExtensionJet(benchmark::State& state) {
  SphereGeometry geo(3);
  std::mt19937_64 rng(5);
  ZonalFunction f = random_band_limited(geo, 10, rng);
  for (auto _ : state) benchmark::DoNotOptimize(extension_jet(f, 2.6, static_cast<int>(state.range(0))).max_abs());
}
BENCHMARK(BM_ExtensionJet)->Arg(10)->Arg(20);

static void BM_DirichletExtend(benchmark::State& state) {
  SphereGeometry geo(2);
  std::mt19937_64 rng(6);
  const double g = state.range(0) / 10.0;
  BoundaryData d = random_boundary_data(geo, g, 6, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_extend(d, g).max_abs());
}
BENCHMARK(BM_DirichletExtend)->Arg(13)->Arg(26)->Arg(34);

static void BM_DirichletForm(benchmark::State& state) {
  SphereGeometry geo(2);
  std::mt19937_64 rng(7);
  BallField U = make_field(random_boundary_data(geo, 2.6, 6, rng), 2.6);
  BallField V = make_field(random_boundary_data(geo, 2.6, 6, rng), 2.6);
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_form(U, V));
}
BENCHMARK(BM_DirichletForm);

static void BM_TraceDeficit(benchmark::State& state) {
  SphereGeometry geo(3);
  std::mt19937_64 rng(8);
  BoundaryData d = random_boundary_data(geo, 2.6, 6, rng);
  d.f2j[0] = random_positive(geo, 6, rng);
  for (auto _ : state) benchmark::DoNotOptimize(trace_deficit(d, 2.6, geo).deficit);
}
BENCHMARK(BM_TraceDeficit);

BENCHMARK_MAIN();
