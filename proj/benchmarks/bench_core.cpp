#include <benchmark/benchmark.h>

#include "cms/asymptotics.hpp"
#include "cms/builtins.hpp"
#include "cms/densusp.hpp"
#include "cms/flow.hpp"

using namespace cms;

namespace {

ConvexCombination half_half() {
  ShiftSpec s = full_shift();
  return ConvexCombination({{Rational(1, 2), PeriodicMeasure::from_cycle(s, Word{1})},
                            {Rational(1, 2), PeriodicMeasure::from_cycle(s, Word{2})}});
}

void BM_EnumerateLoops(benchmark::State& st) {
  ShiftSpec spec = finite_full_shift(4);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_loops(spec, 1, static_cast<std::size_t>(st.range(0)), 1u << 20, 4));
}
BENCHMARK(BM_EnumerateLoops)->Arg(4)->Arg(6)->Arg(8);

void BM_Entropy(benchmark::State& st) {
  ShiftSpec spec = finite_full_shift(5);
  for (auto _ : st) benchmark::DoNotOptimize(gurevich_entropy_estimate(spec, 1, 1, static_cast<std::size_t>(st.range(0)), 5));
}
BENCHMARK(BM_Entropy)->Arg(12)->Arg(48);

void BM_MetricD(benchmark::State& st) {
  ShiftSpec spec = full_shift();
  ConvexCombination a = half_half();
  ConvexCombination b = ConvexCombination::single(PeriodicMeasure::from_cycle(spec, Word{1, 2, 3}));
  for (auto _ : st) benchmark::DoNotOptimize(metric_d(a, b, static_cast<std::size_t>(st.range(0)), spec));
}
BENCHMARK(BM_MetricD)->Arg(20)->Arg(200);

void BM_CylinderLimit(benchmark::State& st) {
  ShiftSpec spec = full_shift();
  MeasureSequence seq(
      [spec](std::size_t n) { return ConvexCombination::single(PeriodicMeasure::from_cycle(spec, Word{1, n + 1})); },
      "pairs");
  auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(cylinder_limit(seq, 2, static_cast<Symbol>(n), n, Rational(1, 1000)));
}
BENCHMARK(BM_CylinderLimit)->Arg(50)->Arg(200);

void BM_Densusp(benchmark::State& st) {
  ShiftSpec spec = full_shift();
  RoofFunction tau = RoofFunction::log1p();
  ConvexCombination target = half_half();
  Rational eps = pow2(-static_cast<long>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(densusp_approximate(target, tau, eps, spec));
}
BENCHMARK(BM_Densusp)->Arg(8)->Arg(12);

void BM_EscapeLoopFamily(benchmark::State& st) {
  ShiftSpec spec = make_builtin("loop_family:n");
  for (auto _ : st) {
    benchmark::DoNotOptimize(escape_sequence(spec, 1, static_cast<std::size_t>(st.range(0)), EscapeCaps{Symbol(1) << 30, 32, 1024, 2'000'000}));
  }
}
BENCHMARK(BM_EscapeLoopFamily)->Arg(100)->Arg(400);

}  // namespace
BENCHMARK_MAIN();
