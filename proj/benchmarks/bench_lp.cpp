#include <benchmark/benchmark.h>

#include "stab/instance.hpp"
#include "stab/models.hpp"

namespace {

using stab::LineFamily;
using stab::Problem;

void BM_MatchingRelaxation(benchmark::State& state) {
  const stab::Instance inst = stab::gen_random(static_cast<int>(state.range(0)), 1000, 11);
  for (auto _ : state) {
    stab::StabModel m = stab::build_matching_model(inst, LineFamily::AxisParallel);
    benchmark::DoNotOptimize(stab::solve_relaxation(m).k_frac);
  }
}
BENCHMARK(BM_MatchingRelaxation)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_TreeRelaxation(benchmark::State& state) {
  const stab::Instance inst = stab::gen_random(static_cast<int>(state.range(0)), 1000, 12);
  for (auto _ : state) {
    stab::StabModel m = stab::build_tree_model(inst, LineFamily::General);
    benchmark::DoNotOptimize(stab::solve_relaxation(m).k_frac);
  }
}
BENCHMARK(BM_TreeRelaxation)->Arg(10)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_ExactCertification(benchmark::State& state) {
  const stab::Instance inst = stab::gen_random(static_cast<int>(state.range(0)), 1000, 13);
  stab::StabModel m = stab::build_matching_model(inst, LineFamily::General);
  const stab::RelaxationResult r = stab::solve_relaxation(m);
  for (auto _ : state) benchmark::DoNotOptimize(stab::certify_relaxation(m, r));
}
BENCHMARK(BM_ExactCertification)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
