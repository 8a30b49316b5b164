// Serial reference vs OpenMP kernel, per kernel. The Arg is the thread count
// handed to the parallel version; the serial runs ignore it.

#include <benchmark/benchmark.h>

#include "hsg/circuit.hpp"
#include "hsg/cyclecover.hpp"
#include "hsg/mmtensor.hpp"
#include "hsg/pitgen.hpp"

namespace {

using namespace hsg;

ProjectionCheck projection_case(int jobs) {
  return ProjectionCheck{{3, 3, 3, 3, 3}, {15, 15, 14}, 64, kDefaultPrime, 1, true, jobs};
}

void BM_ProjectionSerial(benchmark::State& st) {
  const auto check = projection_case(1);
  for (auto _ : st) benchmark::DoNotOptimize(verify_projection_identity_serial(check));
}
void BM_ProjectionParallel(benchmark::State& st) {
  const auto check = projection_case(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(verify_projection_identity(check));
}

// Identically zero, so every grid point is visited.
Circuit zero_circuit() { return difference(power_sum(4, 6), power_sum(4, 6)); }

void BM_GridSerial(benchmark::State& st) {
  const Circuit c = zero_circuit();
  for (auto _ : st) benchmark::DoNotOptimize(grid_search_serial(c, 9, kDefaultBudget));
}
void BM_GridParallel(benchmark::State& st) {
  const Circuit c = zero_circuit();
  for (auto _ : st) benchmark::DoNotOptimize(grid_search(c, 9, kDefaultBudget, static_cast<int>(st.range(0))));
}

void BM_RandomPitSerial(benchmark::State& st) {
  const Circuit c = zero_circuit();
  const RandomPitConfig cfg{2000, kDefaultPrime, 3, 1};
  for (auto _ : st) benchmark::DoNotOptimize(pit_randomized_serial(c, cfg));
}
void BM_RandomPitParallel(benchmark::State& st) {
  const Circuit c = zero_circuit();
  const RandomPitConfig cfg{2000, kDefaultPrime, 3, static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(pit_randomized(c, cfg));
}

void BM_DecompositionSerial(benchmark::State& st) {
  const auto d = trivial_decomposition(4, 4, 4);
  const auto t = mm_tensor(4, 4, 4);
  for (auto _ : st) benchmark::DoNotOptimize(verify_decomposition_serial(d, t));
}
void BM_DecompositionParallel(benchmark::State& st) {
  const auto d = trivial_decomposition(4, 4, 4);
  const auto t = mm_tensor(4, 4, 4);
  for (auto _ : st) benchmark::DoNotOptimize(verify_decomposition(d, t, static_cast<int>(st.range(0))));
}

BENCHMARK(BM_ProjectionSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectionParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomPitSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomPitParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecompositionSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecompositionParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
