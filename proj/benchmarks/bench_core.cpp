#include <benchmark/benchmark.h>

#include "dens/asympt.hpp"
#include "dens/ell.hpp"
#include "dens/exact_kernel.hpp"
#include "dens/mcmc.hpp"
#include "dens/oracle.hpp"

namespace {

void BM_EllTableEqualAlpha(benchmark::State& state) {
  const auto alphas = dens::AlphaSpec::equal(0.25, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto table = dens::EllTable::build(alphas, 4 * static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_EllTableEqualAlpha)->Arg(32)->Arg(128)->Arg(512);

void BM_EllTableDistinctSeries(benchmark::State& state) {
  std::vector<double> vals;
  const int n = static_cast<int>(state.range(0));
  for (int k = 0; k < n; ++k) vals.push_back(0.1 + 0.8 * (k + 0.5) / n);
  const auto alphas = dens::AlphaSpec::from_values(vals);
  for (auto _ : state) {
    auto table = dens::EllTable::build(alphas, 6 * n);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_EllTableDistinctSeries)->Arg(8)->Arg(32)->Arg(80);

void BM_DensityProfile(benchmark::State& state) {
  const auto alphas = dens::AlphaSpec::equal(0.25, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto prof = dens::density_profile(alphas);
    benchmark::DoNotOptimize(prof);
  }
}
BENCHMARK(BM_DensityProfile)->Arg(64)->Arg(128);

void BM_KernelWindow(benchmark::State& state) {
  const auto alphas = dens::AlphaSpec::equal(0.25, 64);
  const int w = static_cast<int>(state.range(0));
  const dens::KernelWindow window{64, 64 + w, 64, 64 + w};
  for (auto _ : state) {
    auto table = dens::kernel_table(alphas, window);
    benchmark::DoNotOptimize(table);
  }
  state.SetComplexityN(w);
}
BENCHMARK(BM_KernelWindow)->Arg(8)->Arg(16)->Arg(32);

void BM_ResolventGrid(benchmark::State& state) {
  const dens::ResolventSolver solver(dens::AlphaSpec::from_values({0.2, 0.6}));
  std::vector<double> grid;
  const int m = static_cast<int>(state.range(0));
  for (int i = 0; i <= m; ++i) grid.push_back(0.05 + 4.0 * i / m);
  for (auto _ : state) {
    auto sols = solver.solve_grid(grid);
    benchmark::DoNotOptimize(sols);
  }
}
BENCHMARK(BM_ResolventGrid)->Arg(64)->Arg(256);

void BM_McmcSteps(benchmark::State& state) {
  const auto alphas = dens::AlphaSpec::equal(0.25, 32);
  for (auto _ : state) {
    dens::McmcOptions opts;
    opts.steps = state.range(0);
    opts.seed = 7;
    dens::McmcChain chain(alphas, opts);
    chain.run();
    benchmark::DoNotOptimize(chain.counts());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McmcSteps)->Arg(100000);

void BM_Enumeration(benchmark::State& state) {
  const auto alphas = dens::AlphaSpec::from_values({0.5, 0.25});
  for (auto _ : state) {
    dens::EnumerationOptions opts;
    opts.h_max = static_cast<int>(state.range(0));
    auto res = dens::enumerate_measure(alphas, opts);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_Enumeration)->Arg(40)->Arg(80);

}  // namespace

BENCHMARK_MAIN();
