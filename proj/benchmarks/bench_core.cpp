#include <benchmark/benchmark.h>

#include "liouville/conditions.hpp"
#include "liouville/harness.hpp"
#include "liouville/simulator.hpp"

using namespace liouville;

namespace {

ProblemSpec spec(const char* g, int m, int n) {
  ProblemSpec s;
  s.m = m;
  s.n = n;
  s.g = Nonlinearity::parse(g);
  return s;
}

void BM_ClassifyPower(benchmark::State& state) {
  ProblemSpec s = spec("zeta^2", 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(classify(s));
}
BENCHMARK(BM_ClassifyPower);

void BM_ClassifyLogPower(benchmark::State& state) {
  ProblemSpec s = spec("zeta*ln(2+zeta)^3", 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(classify(s));
}
BENCHMARK(BM_ClassifyLogPower);

void BM_BigG(benchmark::State& state) {
  Nonlinearity g = Nonlinearity::parse("zeta^3");
  for (auto _ : state) benchmark::DoNotOptimize(big_G(g, 2, 0.01));
}
BENCHMARK(BM_BigG);

void BM_InverseG(benchmark::State& state) {
  ProblemSpec s = spec("zeta*ln(2+zeta)^3", 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(g_inverse_of_G(s, 10.0));
}
BENCHMARK(BM_InverseG);

void BM_SimulateBlowUp(benchmark::State& state) {
  ProblemSpec s = spec("zeta^2", static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_radial(s, 1.0, 100.0));
}
BENCHMARK(BM_SimulateBlowUp)->Arg(2)->Arg(4);

void BM_VerifyExample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_counterexample(1, 3, 2.0, 1.0, std::nullopt, {}));
}
BENCHMARK(BM_VerifyExample);

void BM_DoublingSequence(benchmark::State& state) {
  ProblemSpec s = spec("zeta^2", 2, 3);
  RadialProfile p = integrate_radial(s, 1.0, 100.0);
  const double r = 0.25 * p.r_end();
  for (auto _ : state) benchmark::DoNotOptimize(doubling_sequence(p, s, r));
}
BENCHMARK(BM_DoublingSequence);

}  // namespace
BENCHMARK_MAIN();
