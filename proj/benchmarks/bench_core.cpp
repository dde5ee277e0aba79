#include <benchmark/benchmark.h>

#include "dbarlab/harness.hpp"

using namespace dbarlab;

static void BM_Laplacian(benchmark::State& state) {
  auto g = make_grid(static_cast<int>(state.range(0)),
                     static_cast<int>(state.range(0)));
  ScalarField f = sample(g, [](double x, double y) {
    return std::sin(3 * x) * std::cos(2 * y) + std::cos(x + y);
  });
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(f));
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(128);

static void BM_PoissonSolve(benchmark::State& state) {
  auto g = make_grid(static_cast<int>(state.range(0)),
                     static_cast<int>(state.range(0)));
  ScalarField f = sample(g, [](double x, double y) {
    return std::sin(x) * std::cos(y) + std::sin(2 * y);
  });
  for (auto _ : state) benchmark::DoNotOptimize(poisson_solve(f));
}
BENCHMARK(BM_PoissonSolve)->Arg(64)->Arg(128);

static void BM_PsorSolve(benchmark::State& state) {
  auto g = make_grid(static_cast<int>(state.range(0)),
                     static_cast<int>(state.range(0)));
  Weight w = weight_from_catalog("siny", {}, g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_psor(w, 0.5));
}
BENCHMARK(BM_PsorSolve)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ZeroCurve(benchmark::State& state) {
  auto g = make_grid(static_cast<int>(state.range(0)),
                     static_cast<int>(state.range(0)));
  Weight w = weight_from_catalog("bump", {}, g);
  for (auto _ : state) benchmark::DoNotOptimize(extract_zero_curve(w));
}
BENCHMARK(BM_ZeroCurve)->Arg(128);

static void BM_Assemble(benchmark::State& state) {
  auto g = make_grid(static_cast<int>(state.range(0)),
                     static_cast<int>(state.range(0)));
  Weight w = weight_from_catalog("siny", {}, g);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(w, 0.1));
}
BENCHMARK(BM_Assemble)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_DenseSvdValues(benchmark::State& state) {
  auto g = make_grid(static_cast<int>(state.range(0)),
                     static_cast<int>(state.range(0)));
  Weight w = weight_from_catalog("siny", {}, g);
  OperatorMatrix m = assemble(w, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(dense_svd(m, /*with_vectors=*/false));
}
BENCHMARK(BM_DenseSvdValues)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
