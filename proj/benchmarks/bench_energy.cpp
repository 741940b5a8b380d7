#include <benchmark/benchmark.h>

#include "edclust/energy.hpp"
#include "edclust/rng.hpp"

namespace {

edclust::Sample draw(std::uint64_t stream, int n, int p) {
  edclust::PhiloxStream rng(99, stream);
  edclust::Sample s;
  s.values.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) s.values(i, j) = rng.next_normal();
  return s;
}

void BM_vstat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const edclust::Sample y = draw(0, n, p);
  const edclust::Sample z = draw(1, n, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(edclust::energy_distance_vstat(y, z));
  }
  state.SetItemsProcessed(state.iterations() * 3 * static_cast<std::int64_t>(n) * n);
}

void BM_quadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const edclust::Sample y = draw(0, n, 1);
  const edclust::Sample z = draw(1, n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(edclust::energy_distance_quadrature_1d(y, z));
  }
}

}  // namespace

BENCHMARK(BM_vstat)
    ->Args({200, 1})
    ->Args({200, 3})
    ->Args({1000, 1})
    ->Args({1000, 3})
    ->Args({4000, 1});
BENCHMARK(BM_quadrature)->Arg(20)->Arg(50);

BENCHMARK_MAIN();
