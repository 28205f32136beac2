#include <benchmark/benchmark.h>

#include "lgosc/pseudo_experiment.hpp"
#include "lgosc/selection.hpp"
#include "lgosc/synthetic.hpp"

namespace {

using namespace lgosc;

PhasedDataset dataset(int bins) {
  OscParams p;
  p.dm2 = 2.4e-3;
  p.sin2_2theta = 0.95;
  p.baseline_km = 735.0;
  SyntheticSpec spec;
  spec.bins = bins;
  spec.seed = 1;
  return attach_phases(generate_synthetic(p, spec), p);
}

void BM_SelectTuples(benchmark::State& state) {
  const PhasedDataset ds = dataset(static_cast<int>(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  std::size_t found = 0;
  for (auto _ : state) {
    auto tuples = select_ntuples(ds, n, 0.005);
    found = tuples.size();
    benchmark::DoNotOptimize(tuples);
  }
  state.counters["tuples"] = static_cast<double>(found);
}
BENCHMARK(BM_SelectTuples)->ArgsProduct({{30, 100}, {3, 4}})->Args({300, 3});

void BM_ClassicalNull(benchmark::State& state) {
  const PhasedDataset ds = dataset(30);
  const auto tuples = select_ntuples(ds, static_cast<int>(state.range(0)), 0.01);
  PseudoConfig cfg;
  cfg.replicas = 10'000;
  cfg.threads = 1;
  for (auto _ : state) {
    auto null = classical_null_distribution(ds, tuples, cfg);
    benchmark::DoNotOptimize(null);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.replicas));
  state.counters["tuples"] = static_cast<double>(tuples.size());
}
BENCHMARK(BM_ClassicalNull)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
