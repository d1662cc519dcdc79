#include <benchmark/benchmark.h>

#include "qfactor/harness.hpp"

using namespace qfactor;

namespace {

Qubo safe_qubo(long long n) {
  ProblemSpec spec{n, 4, 4, ObjectiveVariant::EQ2};
  MultilinearPoly obj = build_objective(spec);
  return quadratize(obj, PenaltyWeight{safe_penalty_bound(obj)});
}

void BM_BuildObjective(benchmark::State& state) {
  ProblemSpec spec{899, 4, 4, ObjectiveVariant::EQ2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_objective(spec));
  }
}
BENCHMARK(BM_BuildObjective);

void BM_Quadratize(benchmark::State& state) {
  ProblemSpec spec{899, 4, 4, ObjectiveVariant::EQ2};
  MultilinearPoly obj = build_objective(spec);
  PenaltyWeight s{safe_penalty_bound(obj)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadratize(obj, s));
  }
}
BENCHMARK(BM_Quadratize);

void BM_ExactSolve20Vars(benchmark::State& state) {
  ProblemSpec spec{15, 4, 4, ObjectiveVariant::EQ2};
  Qubo q = safe_qubo(15);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_exact(q, spec));
  }
}
BENCHMARK(BM_ExactSolve20Vars);

void BM_Degrade(benchmark::State& state) {
  Qubo q = safe_qubo(899);
  HardwareModel hw;
  hw.chain_length = 2;
  hw.param_chain = 100000;
  hw.noise_sigma = 0.01;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(degrade(q, hw, seed++));
  }
}
BENCHMARK(BM_Degrade);

void BM_AnnealSample(benchmark::State& state) {
  ProblemSpec spec{15, 4, 4, ObjectiveVariant::EQ2};
  Qubo q = safe_qubo(15);
  AnnealSchedule sched;
  sched.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_sa(q, spec, sched, 1));
    sched.seed++;
  }
}
BENCHMARK(BM_AnnealSample);

void BM_DegradedEnergy(benchmark::State& state) {
  Qubo q = safe_qubo(91);
  HardwareModel hw;
  hw.chain_length = 2;
  hw.param_chain = 100000000;
  DegradedQubo d = degrade(q, hw, 0);
  std::vector<std::uint8_t> s(d.num_physical(), 0);
  for (int i = 0; i < d.num_physical(); i += 3) s[i] = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.energy(s));
  }
}
BENCHMARK(BM_DegradedEnergy);

}  // namespace

BENCHMARK_MAIN();
