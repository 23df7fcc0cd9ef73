#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irscov/channel_model.hpp"
#include "irscov/measurement.hpp"
#include "irscov/walra.hpp"

namespace irscov {

/// Experiment scenario. JSON field names match the member names except
/// channel_profile, D_policy and T_p (see serialization.hpp).
struct ScenarioConfig {
  std::string preset = "desk";
  Index N = 16;
  Index M = 32;
  int b = 2;
  std::vector<Index> K0{3};
  std::vector<Index> T_p{32, 64, 96, 128, 192, 256};
  Index J = 8;
  double P0 = 1.0;
  double sigma2 = 1e-15;
  double rho = 10.0;
  Index I = 20;
  double epsilon = 0.005;
  std::string D_policy = "auto";
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  MultipathProfile channel_profile;
  Index eval_realizations = 100;
  Fidelity fidelity = Fidelity::Moment;
  Index restarts = 16;

  OfdmConfig ofdm() const { return {M, P0, sigma2, b, N}; }
  WalraConfig walra() const;
  void validate() const;
};

ScenarioConfig desk_preset();
ScenarioConfig paper_preset();
ScenarioConfig preset_by_name(const std::string& name);

struct ResultRecord {
  Index t_p = 0;
  std::string method;
  std::string metric;
  double value = 0.0;
  std::int64_t seed = 0; // -1 marks an aggregate over all seeds
};

struct ExperimentResult {
  std::string kind; // "estimation" | "coverage"
  ScenarioConfig config;
  std::vector<ResultRecord> records;
  std::map<std::string, double> timings; // seconds, not part of the CSV
  std::string version;

  /// Records in (t_p, method, metric, seed) order.
  void sort_records();
  std::optional<double> find(Index t_p, const std::string& method, const std::string& metric,
                             std::int64_t seed = -1) const;
};

/// Sampled locations of one seed: shared BS-IRS link, IRS-receiver link per
/// grid point.
struct Region {
  std::vector<LocationTruth> locations;
  std::vector<Index> true_ranks;
};

Region build_region(const ScenarioConfig& cfg, std::uint64_t seed, Index K);

/// Mean autocorrelation over cfg.eval_realizations independent locations
/// (same BS-IRS link, separate IRS-receiver streams).
CMatrix evaluation_mean(const ScenarioConfig& cfg, std::uint64_t seed);

/// Measurement sets of the first t_p training vectors at every location.
std::vector<MeasurementSet> region_measurements(const ScenarioConfig& cfg, const Region& region,
                                                std::uint64_t seed, Index t_p);

/// Estimation error sweep over T_p for the D = M, TRUE-RANK and AUTO policies.
ExperimentResult run_estimation_sweep(const ScenarioConfig& cfg);

/// Average channel power gain sweep over T_p for the requested methods
/// (subset of WALRA, UB, RMS, CSM, ACSM).
ExperimentResult run_coverage_sweep(const ScenarioConfig& cfg, const std::vector<std::string>& methods = {
                                                                    "WALRA", "UB", "RMS", "CSM", "ACSM"});

enum class ResultFormat { Csv, Json };

/// CSV: header t_p,method,metric,value,seed then one row per record, plus a
/// JSON sidecar at path + ".json" holding config and metadata. JSON: the
/// whole result at path.
void emit_results(const ExperimentResult& result, const std::string& path, ResultFormat format);

std::string results_csv(const ExperimentResult& result);

std::string library_version();

} // namespace irscov
