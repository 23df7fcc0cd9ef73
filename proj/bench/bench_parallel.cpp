// Serial reference vs OpenMP kernels on a desk-scale region.
//
//   irscov_bench --benchmark_filter=Region

#include <benchmark/benchmark.h>
#include <omp.h>

#include "irscov/harness.hpp"
#include "irscov/walra.hpp"

using namespace irscov;

namespace {

struct Fixture {
  ScenarioConfig cfg;
  Region region;
  std::vector<ReflectionVector> training;
  std::vector<MeasurementSet> sets;

  explicit Fixture(Index k0) {
    cfg = desk_preset();
    region = build_region(cfg, 1, k0 * k0);
    training = draw_training_vectors(256, cfg.N, cfg.b, 1);
    sets = region_measurements(cfg, region, 1, 256);
  }
};

const Fixture& fixture(Index k0) {
  static const Fixture f3(3);
  static const Fixture f6(6);
  return k0 == 3 ? f3 : f6;
}

void BM_MeasurementsSerial(benchmark::State& state) {
  const auto& f = fixture(state.range(0));
  for (auto _ : state) {
    auto sets = simulate_measurements_serial(f.region.locations, f.training, f.cfg.ofdm(), f.cfg.J, 1, Fidelity::Waveform);
    benchmark::DoNotOptimize(sets);
  }
}

void BM_MeasurementsParallel(benchmark::State& state) {
  const auto& f = fixture(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto sets = simulate_measurements(f.region.locations, f.training, f.cfg.ofdm(), f.cfg.J, 1, Fidelity::Waveform);
    benchmark::DoNotOptimize(sets);
  }
}

void BM_RegionSerial(benchmark::State& state) {
  const auto& f = fixture(state.range(0));
  const auto policy = RankPolicy::parse("true-rank");
  for (auto _ : state) {
    auto est = estimate_region_serial(f.sets, f.cfg.walra(), policy, f.region.true_ranks);
    benchmark::DoNotOptimize(est);
  }
}

void BM_RegionParallel(benchmark::State& state) {
  const auto& f = fixture(state.range(0));
  const auto policy = RankPolicy::parse("true-rank");
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto est = estimate_region(f.sets, f.cfg.walra(), policy, f.region.true_ranks);
    benchmark::DoNotOptimize(est);
  }
}

} // namespace

BENCHMARK(BM_MeasurementsSerial)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeasurementsParallel)->ArgsProduct({{3, 6}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RegionSerial)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegionParallel)->ArgsProduct({{3, 6}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
