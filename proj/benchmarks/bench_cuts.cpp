#include <benchmark/benchmark.h>

#include <random>

#include "stab/cuts.hpp"
#include "stab/geom.hpp"

namespace {

// Random fractional point with full support; exercises the cut tree on dense graphs.
std::vector<double> dense_point(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.0, 2.0 / n);
  std::vector<double> x(stab::num_edges(n));
  for (double& v : x) v = w(rng);
  return x;
}

void BM_GomoryHu(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = stab::WeightedSupportGraph::from_edge_weights(dense_point(n, 1), n);
  for (auto _ : state) benchmark::DoNotOptimize(stab::gomory_hu(g));
}
BENCHMARK(BM_GomoryHu)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_SeparateBlossom(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = dense_point(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(stab::separate_blossom(x, n));
}
BENCHMARK(BM_SeparateBlossom)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_SeparateConnectivity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = dense_point(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(stab::separate_connectivity(x, n));
}
BENCHMARK(BM_SeparateConnectivity)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace
