#include <cmath>
#include <filesystem>
#include <vector>

#include <benchmark/benchmark.h>

#include "jostlab/jost.hpp"
#include "jostlab/potentials.hpp"
#include "jostlab/special_functions.hpp"
#include "jostlab/spectral.hpp"
#include "jostlab/verification.hpp"

using namespace jostlab;

namespace {

const PotentialSpec kGauss(Gaussian{-3.0, 1.0});

void BM_ReducedPairSeries(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reduced_pair(l, Complex{2.0, 0.5}, 3.0));
}
BENCHMARK(BM_ReducedPairSeries)->Arg(0)->Arg(3)->Arg(10);

void BM_ReducedPairClosed(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reduced_pair(l, Complex{9.0, 0.5}, 15.0));
}
BENCHMARK(BM_ReducedPairClosed)->Arg(0)->Arg(3)->Arg(10);

void BM_JostPair(benchmark::State& state) {
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jost_pair(1, {Complex{1.0, -0.3}, Sheet::II}, kGauss, tol));
}
BENCHMARK(BM_JostPair)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_PhaseShiftScan(benchmark::State& state) {
  std::vector<double> ks(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = 0.1 + 4.9 * double(i) / double(ks.size() - 1);
  for (auto _ : state) benchmark::DoNotOptimize(phase_shift_scan(0, kGauss, ks, 1e-10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PhaseShiftScan)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FindResonances(benchmark::State& state) {
  const PotentialSpec spec = load_spec(std::filesystem::path(JOSTLAB_CONFIG_DIR) / "barrier.cfg");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_resonances(0, spec, {0.1, 10.0, -3.0, -0.01}, n, n));
}
BENCHMARK(BM_FindResonances)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_MonodromyLoop(benchmark::State& state) {
  const double R = choose_cutoff(kGauss, 1e-12);
  for (auto _ : state) benchmark::DoNotOptimize(monodromy_loop(0, kGauss, 0.0, 0.5, 64, R, 1e-12));
}
BENCHMARK(BM_MonodromyLoop)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
