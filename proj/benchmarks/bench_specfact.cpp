#include <benchmark/benchmark.h>

#include "specfact/completion.hpp"
#include "specfact/recursion.hpp"
#include "specfact/verification.hpp"

namespace {

using namespace specfact;

void BM_Factorize(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const auto td = generate_test_density(r, 6, 11, 0.4, 512);
  for (auto _ : state) benchmark::DoNotOptimize(factorize(td.density));
}
BENCHMARK(BM_Factorize)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_Complete(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  std::vector<FourierSeries> phi;
  for (int j = 0; j < 2; ++j) {
    std::vector<Complex> c;
    for (int n = -order; n <= -1; ++n) c.emplace_back(0.3 / (1 - n), 0.1 * j);
    phi.emplace_back(-order, std::move(c));
  }
  const auto data = LastRowData::from_row(phi, FourierSeries(0, {1.0, 0.3}), order);
  for (auto _ : state) benchmark::DoNotOptimize(complete(data));
}
BENCHMARK(BM_Complete)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond);

void BM_GridTransform(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto td = generate_test_density(3, 4, 5, 0.4, k);
  for (auto _ : state) benchmark::DoNotOptimize(grid_to_coeffs(td.density, -(k / 2 - 1), k / 2));
}
BENCHMARK(BM_GridTransform)->RangeMultiplier(2)->Range(256, 2048);

}  // namespace

BENCHMARK_MAIN();
