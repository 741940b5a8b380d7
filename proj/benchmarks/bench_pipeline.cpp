#include <benchmark/benchmark.h>

#include "edclust/baselines.hpp"
#include "edclust/embedding.hpp"
#include "edclust/hclust.hpp"
#include "edclust/rng.hpp"
#include "edclust/simgen.hpp"

namespace {

edclust::TimeSeriesPanel scenario_panel(edclust::Scenario scenario, int n) {
  edclust::SimSpec spec;
  spec.scenario = scenario;
  spec.n = n;
  spec.seed = 7;
  return edclust::build_experiment(spec).panel;
}

void BM_joint_matrix(benchmark::State& state) {
  const auto panel = scenario_panel(edclust::Scenario::Nonlinear16, 200);
  const int h = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(edclust::joint_dissimilarity_matrix(panel, h));
  }
}

void BM_baseline_matrix(benchmark::State& state) {
  const auto panel = scenario_panel(edclust::Scenario::Var40, 200);
  edclust::BaselineSpec spec;
  spec.method = state.range(0) == 0 ? edclust::BaselineMethod::Acf
                                    : edclust::BaselineMethod::IntegratedPeriodogram;
  for (auto _ : state) {
    benchmark::DoNotOptimize(edclust::baseline_dissimilarity_matrix(panel, spec));
  }
}

void BM_agglomerate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  edclust::PhiloxStream rng(4, 0);
  edclust::DissimilarityMatrix d;
  d.values = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) d.values(j, k) = d.values(k, j) = rng.next_double();
  for (auto _ : state) {
    benchmark::DoNotOptimize(edclust::agglomerate(d));
  }
}

void BM_periodogram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  edclust::PhiloxStream rng(5, 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = rng.next_normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(edclust::periodogram(x));
  }
}

}  // namespace

BENCHMARK(BM_joint_matrix)->Arg(0)->Arg(1)->Arg(2);
BENCHMARK(BM_baseline_matrix)->Arg(0)->Arg(1);
BENCHMARK(BM_agglomerate)->Arg(20)->Arg(100);
BENCHMARK(BM_periodogram)->Arg(1000)->Arg(100000);
