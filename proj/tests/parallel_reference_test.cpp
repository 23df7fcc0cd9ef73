// The OpenMP kernels must agree bit-for-bit with their serial references
// whatever the thread count.

#include <gtest/gtest.h>

#include <omp.h>

#include "irscov/harness.hpp"
#include "irscov/walra.hpp"

using namespace irscov;

namespace {

struct ThreadGuard {
  int saved = omp_get_max_threads();
  explicit ThreadGuard(int n) { omp_set_num_threads(n); }
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

ScenarioConfig small_scenario(int b) {
  ScenarioConfig c = desk_preset();
  c.b = b;
  return c;
}

void expect_same_sets(const std::vector<MeasurementSet>& a, const std::vector<MeasurementSet>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_EQ(a[k].entries.size(), b[k].entries.size());
    for (std::size_t t = 0; t < a[k].entries.size(); ++t) {
      EXPECT_EQ(a[k].entries[t].t, b[k].entries[t].t);
      EXPECT_EQ(a[k].entries[t].q, b[k].entries[t].q);
    }
  }
}

} // namespace

TEST(ParallelReference, Measurements) {
  for (Fidelity f : {Fidelity::Moment, Fidelity::Waveform}) {
    const auto cfg = small_scenario(2);
    const auto region = build_region(cfg, 4, 9);
    const auto training = draw_training_vectors(96, cfg.N, cfg.b, 4);
    const auto serial = simulate_measurements_serial(region.locations, training, cfg.ofdm(), cfg.J, 4, f);
    for (int threads : {1, 2, 4}) {
      ThreadGuard g(threads);
      expect_same_sets(simulate_measurements(region.locations, training, cfg.ofdm(), cfg.J, 4, f), serial);
    }
  }
}

TEST(ParallelReference, RegionEstimate) {
  for (int b : {1, 2}) {
    const auto cfg = small_scenario(b);
    const auto region = build_region(cfg, 6, 9);
    const auto sets = region_measurements(cfg, region, 6, 128);
    for (const char* p : {"auto", "true-rank", "fixed:3"}) {
      const auto policy = RankPolicy::parse(p);
      const auto serial = estimate_region_serial(sets, cfg.walra(), policy, region.true_ranks);
      for (int threads : {1, 3}) {
        ThreadGuard g(threads);
        const auto par = estimate_region(sets, cfg.walra(), policy, region.true_ranks);
        EXPECT_EQ(par.d_used, serial.d_used) << p;
        EXPECT_EQ(par.mean_raw, serial.mean_raw) << p << " b=" << b;
        EXPECT_EQ(par.mean_psd, serial.mean_psd) << p << " b=" << b;
        for (std::size_t k = 0; k < sets.size(); ++k) EXPECT_EQ(par.per_location[k].phi_trace, serial.per_location[k].phi_trace);
      }
    }
  }
}

TEST(ParallelReference, ErrorsSurfaceFromWorkers) {
  const auto cfg = small_scenario(2);
  const auto region = build_region(cfg, 2, 4);
  const auto sets = region_measurements(cfg, region, 2, 32);
  ThreadGuard g(2);
  EXPECT_THROW(estimate_region(sets, cfg.walra(), RankPolicy::parse("true-rank"), {1, 2}), ConfigError);
}

TEST(ParallelReference, CoverageSweepAcrossThreads) {
  auto cfg = small_scenario(2);
  cfg.T_p = {64, 128};
  cfg.seeds = {5};
  cfg.eval_realizations = 20;
  std::string one, many;
  {
    ThreadGuard g(1);
    one = results_csv(run_coverage_sweep(cfg));
  }
  {
    ThreadGuard g(4);
    many = results_csv(run_coverage_sweep(cfg));
  }
  EXPECT_EQ(one, many);
}
