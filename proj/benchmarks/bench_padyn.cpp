#include <benchmark/benchmark.h>

#include <random>

#include "padyn/census.hpp"
#include "padyn/conjugacy.hpp"
#include "padyn/infinity.hpp"

using namespace padyn;

namespace {

PadicNumber I(long n, Prime p, long T = 64) { return PadicNumber::from_integer(n, p, T); }

void BM_PadicMultiply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const long T = state.range(0);
  const auto x = PadicNumber::random_unit_scaled(5, 0, T, rng);
  const auto y = PadicNumber::random_unit_scaled(5, 1, T, rng);
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_PadicMultiply)->Arg(64)->Arg(256)->Arg(1024);

void BM_MthRoot(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const long m = state.range(0);
  const auto u = PadicNumber::random_unit_scaled(7, 0, 64, rng);
  const auto b = [&] {
    PadicNumber r = u;
    for (long i = 1; i < m; ++i) r = r * u;
    return r;
  }();
  for (auto _ : state) benchmark::DoNotOptimize(mth_root(b, m));
}
BENCHMARK(BM_MthRoot)->Arg(2)->Arg(3)->Arg(5);

void BM_FlowIterate(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const FlowMap F(3, state.range(0), I(1, 3));
  const auto x = PadicNumber::random_unit_scaled(3, F.first_circle(), 64, rng);
  const auto z = PadicNumber::random_unit_scaled(3, 0, 64, rng);
  for (auto _ : state) benchmark::DoNotOptimize(flow_iterate(F, z, x));
}
BENCHMARK(BM_FlowIterate)->DenseRange(1, 3);

void BM_CensusOracle(benchmark::State& state) {
  const FlowMap F(2, 2, I(1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(census_oracle(F, state.range(0)));
}
BENCHMARK(BM_CensusOracle)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_RingMatching(benchmark::State& state) {
  const auto X = RingProfile::parse("geom(4/5,5,1)"), Y = RingProfile::parse("geom(4/5,5,2)");
  for (auto _ : state) benchmark::DoNotOptimize(RingMatching(X, Y, state.range(0)).target_depth());
}
BENCHMARK(BM_RingMatching)->Arg(50)->Arg(200);

void BM_ConjugacyEval(benchmark::State& state) {
  const ConjugacyMap H = build_conjugacy(FlowMap(5, 1, I(1, 5)), FlowMap(5, 2, I(1, 5)), 12);
  std::mt19937_64 rng(4);
  const auto x = PadicNumber::random_unit_scaled(5, H.source_offset + 6, 64, rng);
  for (auto _ : state) benchmark::DoNotOptimize(h_eval(H, x));
}
BENCHMARK(BM_ConjugacyEval);

void BM_HHatRun(benchmark::State& state) {
  const Germ f = PerturbedMap(3, 1, I(1, 3, 48), I(1, 3, 48));
  GFunction G = [&](const PadicNumber& e) { return g_closed(f, e); };
  const auto eta0 = PadicNumber::from_rational(mpq_class(1, 9), 3, 48);
  for (auto _ : state) benchmark::DoNotOptimize(hhat_run(G, eta0, I(1, 3, 48), 3, state.range(0)));
}
BENCHMARK(BM_HHatRun)->Arg(27)->Arg(243)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
