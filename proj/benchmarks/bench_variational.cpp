#include <benchmark/benchmark.h>

#include <bosepath/gp.hpp>
#include <bosepath/hartree.hpp>
#include <bosepath/pair_kernel.hpp>

using namespace bosepath;

namespace {

void BM_GpMinimize1d(benchmark::State& state) {
  const auto trap = TrapPotential::harmonic();
  const auto grid = Grid::cartesian(1, static_cast<int>(state.range(0)), 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(gp_minimize(trap, 1.0, grid, 1e-8).energy);
}
BENCHMARK(BM_GpMinimize1d)->Arg(81)->Arg(161)->Arg(321)->Unit(benchmark::kMillisecond);

void BM_GpMinimizeRadial3d(benchmark::State& state) {
  const auto trap = TrapPotential::harmonic();
  const auto grid = Grid::radial(3, static_cast<int>(state.range(0)), 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(gp_minimize(trap, 1.0, grid, 1e-8).energy);
}
BENCHMARK(BM_GpMinimizeRadial3d)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PairKernelBuild(benchmark::State& state) {
  const auto v = RadialPairPotential::gaussian(1.0, 1.0);
  const auto grid = Grid::radial(2, static_cast<int>(state.range(0)), 7.0);
  for (auto _ : state) {
    PairKernel kernel(grid, v);
    benchmark::DoNotOptimize(kernel.entry(0, 0));
  }
}
BENCHMARK(BM_PairKernelBuild)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SymmetricHartree(benchmark::State& state) {
  const auto trap = TrapPotential::harmonic();
  const auto v = RadialPairPotential::gaussian(2.0, 1.0);
  const auto grid = Grid::cartesian(1, 161, 7.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hartree_minimize(n, trap, v, grid, 1e-8, true).energy_per_particle);
  }
}
BENCHMARK(BM_SymmetricHartree)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
