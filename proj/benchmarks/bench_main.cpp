#include <benchmark/benchmark.h>

#include <cmath>

#include "gfrag/mellin.hpp"
#include "gfrag/pde.hpp"
#include "gfrag/series.hpp"

namespace {

const gfrag::InitialProfile kGauss = gfrag::LogGaussian{0.0, 0.1, 1.0};

void BM_SeriesEvalV(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const double x = std::pow(2.0, -t);
  for (auto _ : state) benchmark::DoNotOptimize(gfrag::series::eval_v(kGauss, 2.0, t, x));
}
BENCHMARK(BM_SeriesEvalV)->Arg(1)->Arg(10)->Arg(100);

void BM_SeriesNodes(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gfrag::series::eval_n_nodes(kGauss, 2.0, 64, -static_cast<std::int64_t>(count), count, 10.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SeriesNodes)->Arg(1024)->Arg(8192);

void BM_Rk4Step(benchmark::State& state) {
  const double L = std::log(2.0);
  auto grid = gfrag::pde::LogGrid::build(kGauss, 2.0, -static_cast<double>(state.range(0)) * L, 2.0, 64);
  gfrag::pde::Stepper stepper(grid.size());
  for (auto _ : state) {
    stepper.advance(grid, 0.01);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_Rk4Step)->Arg(50)->Arg(200);

void BM_InverseMellin(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gfrag::mellin::inverse_mellin_v(kGauss, 2.0, t, 0.5));
}
BENCHMARK(BM_InverseMellin)->Arg(1)->Arg(2);

void BM_AsymptoticPoisson(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gfrag::mellin::asymp_v_poisson(kGauss, 2.0, 25.0, std::pow(2.0, -25.0)));
}
BENCHMARK(BM_AsymptoticPoisson);

}  // namespace

BENCHMARK_MAIN();
