#include <benchmark/benchmark.h>

#include "stab/solve.hpp"

namespace {

using stab::LineFamily;
using stab::Problem;

void BM_IteratedRounding(benchmark::State& state) {
  const auto problem = static_cast<Problem>(state.range(1));
  const stab::Instance inst = stab::gen_random(static_cast<int>(state.range(0)), 1000, 21);
  for (auto _ : state)
    benchmark::DoNotOptimize(stab::iterated_rounding(inst, problem, LineFamily::AxisParallel).k);
}
BENCHMARK(BM_IteratedRounding)
    ->Args({10, static_cast<int>(Problem::Matching)})
    ->Args({16, static_cast<int>(Problem::Matching)})
    ->Args({10, static_cast<int>(Problem::SpanningTree)})
    ->Unit(benchmark::kMillisecond);

void BM_BranchAndBound(benchmark::State& state) {
  const auto problem = static_cast<Problem>(state.range(1));
  const stab::Instance inst = stab::gen_random(static_cast<int>(state.range(0)), 1000, 22);
  stab::BnbOptions opt;
  opt.depth_first = state.range(2) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(stab::branch_and_bound(inst, problem, LineFamily::General, opt).k);
}
BENCHMARK(BM_BranchAndBound)
    ->Args({10, static_cast<int>(Problem::Matching), 0})
    ->Args({10, static_cast<int>(Problem::Matching), 1})
    ->Args({8, static_cast<int>(Problem::SpanningTree), 0})
    ->Unit(benchmark::kMillisecond);

void BM_MinLengthMatching(benchmark::State& state) {
  const stab::Instance inst = stab::gen_random(static_cast<int>(state.range(0)), 1000, 23);
  for (auto _ : state) benchmark::DoNotOptimize(stab::min_length_matching(inst, stab::Metric::Euclidean));
}
BENCHMARK(BM_MinLengthMatching)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
