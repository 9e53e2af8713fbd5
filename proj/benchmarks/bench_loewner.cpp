#include <benchmark/benchmark.h>

#include <vector>

#include "loewner/exact_maps.hpp"
#include "loewner/flow.hpp"
#include "loewner/traces.hpp"

using namespace loewner;

namespace {

const Scenario kCaseI = Scenario::theorem_one(2.5, 1.0, 3.0);
const Scenario kCaseIII = Scenario::theorem_one(2.0, 1.0, 3.0);
const Scenario kSqrt = Scenario::theorem_two(3.0, 1.0, 3.0);

void BM_EvolveForward(benchmark::State& state) {
  const DrivingSchedule s = kCaseI.schedule();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_forward({1.0, 1.0}, s, 3.0));
  }
}
BENCHMARK(BM_EvolveForward);

void BM_Thm1Solve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(thm1_solve({1.0, 1.0}, 3.0, kCaseI));
  }
}
BENCHMARK(BM_Thm1Solve);

void BM_Thm2Solve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(thm2_solve({1.0, 1.0}, 3.0, kSqrt));
  }
}
BENCHMARK(BM_Thm2Solve);

void BM_Thm1Trace(benchmark::State& state) {
  const Scenario& sc = state.range(0) == 0 ? kCaseI : kCaseIII;
  const auto times = refined_times(1.0, 3.0, 400, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(thm1_trace_at(sc, {}, times));
  }
}
BENCHMARK(BM_Thm1Trace)->Arg(0)->Arg(1);

void BM_Thm2Trace(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(thm2_trace(kSqrt, 400));
  }
}
BENCHMARK(BM_Thm2Trace);

void BM_TraceNumeric(benchmark::State& state) {
  const DrivingSchedule s = kCaseI.schedule();
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_numeric(s, 2.0));
  }
}
BENCHMARK(BM_TraceNumeric);

}  // namespace

BENCHMARK_MAIN();
