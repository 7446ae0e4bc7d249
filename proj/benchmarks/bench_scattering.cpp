#include <benchmark/benchmark.h>

#include <bosepath/scattering.hpp>

namespace {

void BM_ScatterSquareWell(benchmark::State& state) {
  const auto v = bosepath::RadialPairPotential::square_well(2.0, 1.0);
  bosepath::ScatteringOptions options;
  options.steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bosepath::scatter(v, 3, options).length);
}
BENCHMARK(BM_ScatterSquareWell)->Arg(5000)->Arg(20000)->Arg(80000);

void BM_Scatter2dGaussian(benchmark::State& state) {
  const auto v = bosepath::RadialPairPotential::gaussian(1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(bosepath::scatter(v, 2).length);
}
BENCHMARK(BM_Scatter2dGaussian);

}  // namespace
