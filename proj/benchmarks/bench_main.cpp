#include <benchmark/benchmark.h>

#include "max2csp/exact.hpp"
#include "max2csp/gaussian.hpp"
#include "max2csp/generators.hpp"
#include "max2csp/rounding.hpp"
#include "max2csp/sdp.hpp"

namespace max2csp {
namespace {

void BM_Tail(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian::tail(t));
    t = t > 8.0 ? -2.0 : t + 0.001;
  }
}
BENCHMARK(BM_Tail);

void BM_InvTail(benchmark::State& state) {
  double p = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian::inv_tail(p));
    p = p > 0.99 ? 1e-6 : p * 1.01;
  }
}
BENCHMARK(BM_InvTail);

void BM_Solve2Lin(benchmark::State& state) {
  const int R = static_cast<int>(state.range(0));
  const AtomicInstance atomic = normalize(gen_2lin(30, R, 120, 1));
  SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(solve(atomic, cfg).report.objective);
}
BENCHMARK(BM_Solve2Lin)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ShortlistTrial(benchmark::State& state) {
  const int R = static_cast<int>(state.range(0));
  const AtomicInstance atomic = normalize(gen_2lin(30, R, 120, 1));
  const SolveResult r = solve(atomic, SolverConfig{});
  const ShortlistRounder rounder(r.solution);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rounder.round(rng));
}
BENCHMARK(BM_ShortlistTrial)->Arg(4)->Arg(16)->Arg(32);

void BM_NaiveTrial(benchmark::State& state) {
  const AtomicInstance atomic = normalize(gen_2lin(30, 8, 120, 1));
  const SolveResult r = solve(atomic, SolverConfig{});
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(naive_round(r.solution, rng));
}
BENCHMARK(BM_NaiveTrial);

void BM_BruteForce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = gen_random_2csp(n, 3, 3 * n, 0.4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force(inst).value);
}
BENCHMARK(BM_BruteForce)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace max2csp

BENCHMARK_MAIN();
