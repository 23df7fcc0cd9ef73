// irscov: channel generation, measurement simulation, autocorrelation
// estimation, reflection optimization and experiment sweeps.
//
// Exit codes: 0 success, 1 validation error (bad flags, config or input
// files), 2 runtime error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "irscov/harness.hpp"
#include "irscov/reflection.hpp"
#include "irscov/serialization.hpp"
#include "irscov/walra.hpp"

namespace {

using namespace irscov;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string preset = "desk";
  bool preset_given = false;
  int threads = 0;
};

ScenarioConfig resolve_config(const GlobalOptions& g) {
  ScenarioConfig cfg = preset_by_name(g.preset);
  if (!g.config_path.empty()) {
    const Json j = read_json_file(g.config_path);
    // a preset named inside the file is the base unless --preset overrides it
    if (!g.preset_given && j.contains("preset")) cfg = preset_by_name(j.at("preset").get<std::string>());
    cfg = config_from_json(j, cfg);
  }
  if (g.seed) cfg.seeds = {*g.seed};
  cfg.validate();
  return cfg;
}

std::string summary(const ScenarioConfig& c) {
  std::string k_list;
  for (std::size_t i = 0; i < c.K0.size(); ++i) k_list += (i ? "," : "") + std::to_string(c.K0[i] * c.K0[i]);
  std::string tp_list;
  for (std::size_t i = 0; i < c.T_p.size(); ++i) tp_list += (i ? "," : "") + std::to_string(c.T_p[i]);
  return "preset=" + c.preset + " N=" + std::to_string(c.N) + " M=" + std::to_string(c.M) +
         " L=" + std::to_string(c.channel_profile.cascaded_taps()) + " b=" + std::to_string(c.b) + " K=[" + k_list +
         "] T_p=[" + tp_list + "] J=" + std::to_string(c.J) + " I=" + std::to_string(c.I) +
         " eval_realizations=" + std::to_string(c.eval_realizations) + " D_policy=" + c.D_policy;
}

std::string out_or(const GlobalOptions& g, const std::string& fallback) { return g.out.empty() ? fallback : g.out; }

std::vector<MeasurementSet> load_sets(const Json& j) {
  std::vector<MeasurementSet> sets;
  if (j.contains("sets")) {
    for (const auto& s : j.at("sets")) sets.push_back(measurement_from_json(s));
  } else {
    sets.push_back(measurement_from_json(j));
  }
  return sets;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS wideband coverage: autocorrelation estimation from power measurements"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON scenario config")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "experiment seed (replaces the config's seed list)");
  app.add_option("--out", g.out, "output path");
  auto* preset_opt = app.add_option("--preset", g.preset, "desk|paper")->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--threads", g.threads, "worker threads (0 = auto)")->check(CLI::NonNegativeNumber);

  auto* gen_channels = app.add_subcommand("gen-channels", "write cascaded channels of the sampled locations");
  Index channel_k0 = 0;
  gen_channels->add_option("--k0", channel_k0, "grid side (default: first K0 of the config)");

  auto* gen_meas = app.add_subcommand("gen-measurements", "simulate power measurements at every sampled location");
  Index meas_tp = 0;
  gen_meas->add_option("--tp", meas_tp, "number of training reflections (default: largest T_p)");

  auto* estimate = app.add_subcommand("estimate", "estimate one location's autocorrelation from a measurement file");
  std::string est_input;
  Index est_location = 0;
  std::string est_policy;
  estimate->add_option("--input", est_input, "measurement JSON (single set or gen-measurements output)")->required();
  estimate->add_option("--location", est_location, "location index inside a multi-location file");
  estimate->add_option("--D", est_policy, "auto | true-rank | fixed:<d> (default: config D_policy)");

  auto* optimize = app.add_subcommand("optimize", "optimize the reflection vector for a stored estimate");
  std::string opt_input;
  optimize->add_option("--input", opt_input, "estimate JSON (R_psd or R) or matrix JSON")->required();

  auto* sweep_error = app.add_subcommand("sweep-error", "estimation error versus T_p for D = M, TRUE-RANK, AUTO");
  auto* sweep_cov = app.add_subcommand("sweep-coverage", "average channel power gain versus T_p");
  std::vector<std::string> methods{"WALRA", "UB", "RMS", "CSM", "ACSM"};
  sweep_cov->add_option("--methods", methods, "subset of WALRA UB RMS CSM ACSM");
  std::string format = "csv";
  for (auto* sc : {sweep_error, sweep_cov}) {
    sc->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  }
  auto* show = app.add_subcommand("show-config", "print the resolved scenario configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }
  g.preset_given = preset_opt->count() > 0;
  if (g.threads > 0) omp_set_num_threads(g.threads);

  try {
    const ScenarioConfig cfg = resolve_config(g);
    std::cerr << "config: " << summary(cfg) << "\n";
    const std::uint64_t seed = cfg.seeds.front();

    if (*show) {
      std::cout << summary(cfg) << "\n" << config_to_json(cfg).dump(2) << "\n";
      return 0;
    }
    if (*gen_channels) {
      const Index k0 = channel_k0 > 0 ? channel_k0 : cfg.K0.front();
      const Region region = build_region(cfg, seed, k0 * k0);
      Json locs = Json::array();
      for (std::size_t k = 0; k < region.locations.size(); ++k) {
        locs.push_back(channel_snapshot_to_json(region.locations[k].channel, region.locations[k].R, region.true_ranks[k]));
      }
      const Json out{{"seed", seed}, {"config", config_to_json(cfg)}, {"locations", locs}};
      write_text_file(out_or(g, "channels.json"), out.dump(2) + "\n");
      return 0;
    }
    if (*gen_meas) {
      const Index t_p = meas_tp > 0 ? meas_tp : cfg.T_p.back();
      const Region region = build_region(cfg, seed, cfg.K0.front() * cfg.K0.front());
      const auto sets = region_measurements(cfg, region, seed, t_p);
      Json arr = Json::array();
      for (std::size_t k = 0; k < sets.size(); ++k) {
        Json s = measurement_to_json(sets[k]);
        s["true_rank"] = region.true_ranks[k];
        arr.push_back(std::move(s));
      }
      const Json out{{"seed", seed}, {"fidelity", to_string(cfg.fidelity)}, {"sets", arr}};
      write_text_file(out_or(g, "measurements.json"), out.dump() + "\n");
      return 0;
    }
    if (*estimate) {
      const Json j = read_json_file(est_input);
      const auto sets = load_sets(j);
      if (est_location < 0 || est_location >= static_cast<Index>(sets.size())) {
        throw ConfigError("location " + std::to_string(est_location) + " not present in " + est_input);
      }
      const auto& set = sets[static_cast<std::size_t>(est_location)];
      set.validate();
      if ((g.preset_given || !g.config_path.empty()) && set.ofdm.N != cfg.N) {
        throw DimensionMismatch("measurement file has N=" + std::to_string(set.ofdm.N) + " but the config has N=" +
                                std::to_string(cfg.N));
      }
      const RankPolicy policy = RankPolicy::parse(est_policy.empty() ? cfg.D_policy : est_policy);
      std::vector<Index> ranks;
      if (policy.kind == RankPolicy::Kind::TrueRank) {
        const Json& sj = j.contains("sets") ? j.at("sets").at(static_cast<std::size_t>(est_location)) : j;
        if (!sj.contains("true_rank")) throw ConfigError("TRUE-RANK policy needs a 'true_rank' field in the measurement file");
        ranks.push_back(sj.at("true_rank").get<Index>());
      }
      WalraConfig wcfg = cfg.walra();
      wcfg.max_rank = set.ofdm.M;
      wcfg.mode = mode_for_bits(set.ofdm.b);
      const auto est = estimate_region_serial({set}, wcfg, policy, ranks);
      write_text_file(out_or(g, "estimate.json"), estimate_to_json(est.per_location.front(), est.d_used.front()).dump(2) + "\n");
      return 0;
    }
    if (*optimize) {
      const Json j = read_json_file(opt_input);
      const CMatrix R = j.contains("rows") ? matrix_from_json(j) : estimate_matrix_from_json(j);
      if (R.rows() != cfg.N && (g.preset_given || !g.config_path.empty())) {
        throw DimensionMismatch("estimate is " + std::to_string(R.rows()) + "x" + std::to_string(R.rows()) +
                                " but the config has N=" + std::to_string(cfg.N));
      }
      const auto report = optimize_reflection(R, cfg.b, cfg.restarts, seed);
      write_text_file(out_or(g, "reflection.json"), report_to_json(report).dump(2) + "\n");
      std::cout << reflection_to_csv(report.v_opt) << "\n";
      return 0;
    }
    const ResultFormat fmt = format == "json" ? ResultFormat::Json : ResultFormat::Csv;
    if (*sweep_error) {
      const auto result = run_estimation_sweep(cfg);
      emit_results(result, out_or(g, format == "json" ? "estimation.json" : "estimation.csv"), fmt);
      return 0;
    }
    if (*sweep_cov) {
      const auto result = run_coverage_sweep(cfg, methods);
      emit_results(result, out_or(g, format == "json" ? "coverage.json" : "coverage.csv"), fmt);
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
