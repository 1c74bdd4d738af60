// Hot paths under the battery: transition products with big-integer
// growth, lattice normal forms, exact measure solves, the full criteria
// battery, and interval enclosures.

#include <benchmark/benchmark.h>

#include <random>

#include "cantor/catalog.hpp"
#include "cantor/lattice.hpp"
#include "cantor/measure.hpp"
#include "cantor/spectra.hpp"
#include "cantor/tower.hpp"

using namespace cantor;

namespace {

Tower fib(int levels) { return catalog_tower("fibonacci", levels); }

void BM_TransitionProduct(benchmark::State& state) {
  int depth = int(state.range(0));
  Tower t = fib(depth);
  for (auto _ : state) {
    Tower fresh = fib(depth);  // defeat the product cache
    benchmark::DoNotOptimize(fresh.product(depth, 1));
  }
}
BENCHMARK(BM_TransitionProduct)->Arg(32)->Arg(128)->Arg(512);

void BM_HermiteForm(benchmark::State& state) {
  int n = int(state.range(0));
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-30, 30);
  IntMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hnf(m));
}
BENCHMARK(BM_HermiteForm)->Arg(4)->Arg(8)->Arg(16);

void BM_SmithForm(benchmark::State& state) {
  int n = int(state.range(0));
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-30, 30);
  IntMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(snf(m));
}
BENCHMARK(BM_SmithForm)->Arg(4)->Arg(8);

void BM_ExactMeasure(benchmark::State& state) {
  Tower t = catalog_tower("sturmian-cf:1,2,3", int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ExactMeasure::compute(t));
}
BENCHMARK(BM_ExactMeasure)->Arg(8)->Arg(16);

void BM_EigenBattery(benchmark::State& state) {
  int n = int(state.range(0));
  Tower t = fib(n + 2);
  ExactMeasure mu = ExactMeasure::compute(t);
  FieldElement alpha(NumberField::sqrt_field(Int(5)), {Rat(-1, 2), Rat(1, 2)});
  EigenParams p;
  p.m = 2;
  p.N = n;
  for (auto _ : state) benchmark::DoNotOptimize(eigen_verdict(t, mu, alpha, p));
}
BENCHMARK(BM_EigenBattery)->Arg(15)->Arg(30);

void BM_MeasureEnclosure(benchmark::State& state) {
  Tower t = fib(int(state.range(0)));
  Rat eps(1, 1000000);
  for (auto _ : state) benchmark::DoNotOptimize(measure_enclosure(t, 1, eps));
}
BENCHMARK(BM_MeasureEnclosure)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
