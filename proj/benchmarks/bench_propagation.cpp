#include "qfel/highgain.hpp"
#include "qfel/lowgain.hpp"
#include "qfel/semiclassical.hpp"

#include <benchmark/benchmark.h>

namespace {

// Dicke ladder at the second resonance, fixed length grid, N electrons.
void dicke(benchmark::State& state, qfel::DickeMethod method) {
  const long electrons = state.range(0);
  const qfel::HighGainModel model(qfel::FelParams::high_gain(0.25, 2, electrons / 10, electrons),
                                  qfel::HighGainVariant::full_second_order);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_dicke(model, 30.0, 61, method));
  state.SetComplexityN(electrons);
}

void BM_DickeEigen(benchmark::State& state) { dicke(state, qfel::DickeMethod::eigen); }
void BM_DickeChebyshev(benchmark::State& state) { dicke(state, qfel::DickeMethod::chebyshev); }

void low_gain(benchmark::State& state, qfel::LowGainEngine engine) {
  const qfel::FelParams p = qfel::FelParams::low_gain(0.25, 2);
  const qfel::LowGainModel model(p, qfel::LowGainVariant::full_hamiltonian);
  const auto start = qfel::LadderState::momentum_eigenstate(2, p.truncation);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(model, start, 60.0, 241, engine));
}

void BM_LowGainExact(benchmark::State& state) { low_gain(state, qfel::LowGainEngine::exact); }
void BM_LowGainMagnus(benchmark::State& state) { low_gain(state, qfel::LowGainEngine::magnus); }

void BM_Semiclassical(benchmark::State& state) {
  const auto p = qfel::FelParams::high_gain(0.25, 2, 1'000, 10'000);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_semiclassical(p, 60.0, 601));
}

}  // namespace

BENCHMARK(BM_DickeEigen)->RangeMultiplier(2)->Range(128, 2048)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_DickeChebyshev)->RangeMultiplier(2)->Range(128, 16384)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_LowGainExact)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LowGainMagnus)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Semiclassical)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
