#include <benchmark/benchmark.h>

#include <bosepath/bm.hpp>
#include <bosepath/ratefn.hpp>

using namespace bosepath;

namespace {

void BM_FreeEnergyCanonical(benchmark::State& state) {
  const auto trap = TrapPotential::harmonic();
  const auto v = RadialPairPotential::gaussian(1.0, 1.0);
  MonteCarloOptions options;
  options.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(free_energy_canonical(2, 1.0, 256, 2000, trap, v, 7, options).value);
  }
}
BENCHMARK(BM_FreeEnergyCanonical)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Cumulant(benchmark::State& state) {
  const auto grid = Grid::cartesian(1, static_cast<int>(state.range(0)), 8.0);
  TestFunction f{grid, std::vector<double>(grid->size())};
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double x = grid->position(k)[0];
    f.values[k] = -x * x;
  }
  for (auto _ : state) benchmark::DoNotOptimize(cumulant(f, 4.0).value);
}
BENCHMARK(BM_Cumulant)->Arg(81)->Arg(161)->Unit(benchmark::kMillisecond);

void BM_CumulantGradient(benchmark::State& state) {
  const auto grid = Grid::cartesian(1, 161, 8.0);
  TestFunction f{grid, std::vector<double>(grid->size())};
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double x = grid->position(k)[0];
    f.values[k] = -x * x;
  }
  for (auto _ : state) benchmark::DoNotOptimize(cumulant_gradient(f, 4.0).density);
}
BENCHMARK(BM_CumulantGradient)->Unit(benchmark::kMillisecond);

}  // namespace
