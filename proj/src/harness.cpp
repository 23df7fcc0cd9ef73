#include "irscov/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <tuple>

#include "irscov/reflection.hpp"
#include "irscov/serialization.hpp"

#ifndef IRSCOV_VERSION
#define IRSCOV_VERSION "0.1.0"
#endif
#ifndef IRSCOV_GIT_REV
#define IRSCOV_GIT_REV "unknown"
#endif

namespace irscov {

std::string library_version() { return std::string("irscov ") + IRSCOV_VERSION + " (" + IRSCOV_GIT_REV + ")"; }

WalraConfig ScenarioConfig::walra() const {
  WalraConfig w;
  w.rho = rho;
  w.iterations = I;
  w.rank = 1;
  w.max_rank = M;
  w.epsilon = epsilon;
  w.mode = mode_for_bits(b);
  w.project_psd = true;
  return w;
}

void ScenarioConfig::validate() const {
  ofdm().validate();
  if (K0.empty()) throw ConfigError("K0 must list at least one grid side");
  for (Index k : K0) {
    if (k < 1) throw ConfigError("K0 entries must be >= 1");
  }
  if (T_p.empty()) throw ConfigError("T_p sweep must not be empty");
  for (std::size_t i = 0; i < T_p.size(); ++i) {
    if (T_p[i] < 1) throw ConfigError("T_p entries must be >= 1");
    if (i > 0 && T_p[i] <= T_p[i - 1]) throw ConfigError("T_p sweep must be strictly increasing");
  }
  if (J < 1) throw ConfigError("J must be >= 1");
  if (I < 1) throw ConfigError("I must be >= 1");
  if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (eval_realizations < 1) throw ConfigError("eval_realizations must be >= 1");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  channel_profile.validate();
  if (channel_profile.cascaded_taps() > M) {
    throw ConfigError("cascaded tap count L=" + std::to_string(channel_profile.cascaded_taps()) +
                      " exceeds M=" + std::to_string(M));
  }
  RankPolicy::parse(D_policy);
}

ScenarioConfig desk_preset() {
  ScenarioConfig c;
  c.preset = "desk";
  // -125 dB cascaded path gain puts sigma2 = -120 dBm at a ~1% measurement
  // noise level for P0 = 30 dBm, N = 16.
  c.channel_profile.path_gain_db = -125.0;
  return c;
}

ScenarioConfig paper_preset() {
  ScenarioConfig c;
  c.preset = "paper";
  c.N = 64;
  c.M = 128;
  c.K0 = {3, 9};
  c.T_p = {100, 200, 300, 400, 600, 800, 1000};
  c.eval_realizations = 500;
  c.channel_profile.bs_irs_taps = 13;
  c.channel_profile.irs_rx_taps = 100; // L = 112
  c.channel_profile.bs_irs_paths = 2;
  c.channel_profile.min_paths = 2;
  c.channel_profile.max_paths = 10; // cascaded paths in [4, 20]
  c.channel_profile.decay = 30.0;
  c.channel_profile.path_gain_db = -130.0;
  return c;
}

ScenarioConfig preset_by_name(const std::string& name) {
  if (name == "desk") return desk_preset();
  if (name == "paper") return paper_preset();
  throw ConfigError("unknown preset '" + name + "' (expected desk|paper)");
}

void ExperimentResult::sort_records() {
  std::sort(records.begin(), records.end(), [](const ResultRecord& a, const ResultRecord& b) {
    return std::tie(a.t_p, a.method, a.metric, a.seed) < std::tie(b.t_p, b.method, b.metric, b.seed);
  });
}

std::optional<double> ExperimentResult::find(Index t_p, const std::string& method, const std::string& metric,
                                             std::int64_t seed) const {
  for (const auto& r : records) {
    if (r.t_p == t_p && r.method == method && r.metric == metric && r.seed == seed) return r.value;
  }
  return std::nullopt;
}

Region build_region(const ScenarioConfig& cfg, std::uint64_t seed, Index K) {
  Region region;
  region.locations.resize(static_cast<std::size_t>(K));
  region.true_ranks.resize(static_cast<std::size_t>(K));
#pragma omp parallel for schedule(static)
  for (long k = 0; k < static_cast<long>(K); ++k) {
    const auto [g, r] = generate_location_channels(seed, static_cast<std::uint64_t>(k), cfg.N, cfg.channel_profile);
    auto& loc = region.locations[static_cast<std::size_t>(k)];
    loc.channel = cascade(g, r);
    loc.R = autocorrelation(loc.channel);
    region.true_ranks[static_cast<std::size_t>(k)] = numerical_rank(loc.R);
  }
  return region;
}

CMatrix evaluation_mean(const ScenarioConfig& cfg, std::uint64_t seed) {
  const LinkTaps g = generate_bs_irs_link(seed, cfg.N, cfg.channel_profile);
  std::vector<CMatrix> rs(static_cast<std::size_t>(cfg.eval_realizations));
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(rs.size()); ++i) {
    auto eng = make_stream(seed, StreamTag::EvalLocation, {static_cast<std::uint64_t>(i)});
    const LinkTaps r = generate_irs_rx_link(eng, cfg.N, cfg.channel_profile);
    rs[static_cast<std::size_t>(i)] = autocorrelation(cascade(g, r));
  }
  CMatrix mean = CMatrix::Zero(cfg.N, cfg.N);
  for (const auto& r : rs) mean += r;
  return mean / static_cast<double>(rs.size());
}

std::vector<MeasurementSet> region_measurements(const ScenarioConfig& cfg, const Region& region,
                                                std::uint64_t seed, Index t_p) {
  const auto training = draw_training_vectors(t_p, cfg.N, cfg.b, seed);
  return simulate_measurements(region.locations, training, cfg.ofdm(), cfg.J, seed, cfg.fidelity);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string tagged(const std::string& method, const ScenarioConfig& cfg, Index k0) {
  if (cfg.K0.size() == 1) return method;
  return method + "/K=" + std::to_string(k0 * k0);
}

// Mean and standard error over seeds for every (t_p, method, metric).
void append_aggregates(ExperimentResult& result) {
  std::map<std::tuple<Index, std::string, std::string>, std::vector<double>> groups;
  for (const auto& r : result.records) {
    if (r.seed >= 0) groups[{r.t_p, r.method, r.metric}].push_back(r.value);
  }
  for (const auto& [key, values] : groups) {
    const auto& [t_p, method, metric] = key;
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
      if (std::isfinite(v)) {
        sum += v;
        ++count;
      }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double mean = count ? sum / static_cast<double>(count) : nan;
    double se = count ? 0.0 : nan;
    if (count > 1) {
      double ss = 0.0;
      for (double v : values) {
        if (std::isfinite(v)) ss += (v - mean) * (v - mean);
      }
      se = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
    }
    result.records.push_back({t_p, method, metric, mean, -1});
    result.records.push_back({t_p, method, metric + "_se", se, -1});
  }
}

CMatrix comparison_target(const CMatrix& R, int b) {
  if (b == 1) return R.real().cast<Complex>();
  return R;
}

} // namespace

ExperimentResult run_estimation_sweep(const ScenarioConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.kind = "estimation";
  result.config = cfg;
  result.version = library_version();
  const WalraConfig wcfg = cfg.walra();

  const std::vector<std::pair<std::string, RankPolicy>> policies{
      {"D=M", {RankPolicy::Kind::Fixed, cfg.M}},
      {"TRUE-RANK", {RankPolicy::Kind::TrueRank, 1}},
      {"AUTO", {RankPolicy::Kind::Auto, 1}},
  };

  for (const auto seed : cfg.seeds) {
    for (const Index k0 : cfg.K0) {
      const Region region = build_region(cfg, seed, k0 * k0);
      for (const Index t_p : cfg.T_p) {
        const auto sets = region_measurements(cfg, region, seed, t_p);
        for (const auto& [name, policy] : policies) {
          const auto start = Clock::now();
          const auto est = estimate_region(sets, wcfg, policy, region.true_ranks);
          result.timings["estimation/" + name] += seconds_since(start);

          double err = 0.0;
          double d_sum = 0.0;
          for (std::size_t k = 0; k < sets.size(); ++k) {
            err += relative_error(est.per_location[k].R, comparison_target(region.locations[k].R, cfg.b));
            d_sum += static_cast<double>(est.d_used[k]);
          }
          const double K = static_cast<double>(sets.size());
          const auto method = tagged(name, cfg, k0);
          const auto s = static_cast<std::int64_t>(seed);
          result.records.push_back({t_p, method, "rel_error", err / K, s});
          if (policy.kind == RankPolicy::Kind::Auto) result.records.push_back({t_p, method, "d_stop", d_sum / K, s});
        }
      }
    }
  }
  append_aggregates(result);
  result.sort_records();
  return result;
}

ExperimentResult run_coverage_sweep(const ScenarioConfig& cfg, const std::vector<std::string>& methods) {
  cfg.validate();
  for (const auto& m : methods) {
    if (m != "WALRA" && m != "UB" && m != "RMS" && m != "CSM" && m != "ACSM") {
      throw ConfigError("unknown coverage method '" + m + "'");
    }
  }
  const auto wants = [&](const char* m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };

  ExperimentResult result;
  result.kind = "coverage";
  result.config = cfg;
  result.version = library_version();
  const WalraConfig wcfg = cfg.walra();
  const RankPolicy policy = RankPolicy::parse(cfg.D_policy);
  const OfdmConfig ofdm = cfg.ofdm();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (const auto seed : cfg.seeds) {
    const auto s = static_cast<std::int64_t>(seed);
    auto start = Clock::now();
    const CMatrix eval_mean = evaluation_mean(cfg, seed);
    double ub_gain = nan;
    if (wants("UB")) ub_gain = optimize_reflection(eval_mean, cfg.b, cfg.restarts, seed).objective;
    result.timings["coverage/UB"] += seconds_since(start);

    for (const Index k0 : cfg.K0) {
      const Region region = build_region(cfg, seed, k0 * k0);
      for (const Index t_p : cfg.T_p) {
        const auto sets = region_measurements(cfg, region, seed, t_p);
        const auto gain_of = [&](const ReflectionVector& v) { return quadratic_form(eval_mean, v.value()); };
        const auto record = [&](const char* m, double value) {
          result.records.push_back({t_p, tagged(m, cfg, k0), "avg_gain", value, s});
        };

        if (wants("UB")) record("UB", ub_gain);
        if (wants("WALRA")) {
          start = Clock::now();
          const auto est = estimate_region(sets, wcfg, policy, region.true_ranks);
          const auto report = optimize_reflection(est.mean_psd, cfg.b, cfg.restarts, seed);
          result.timings["coverage/WALRA"] += seconds_since(start);
          record("WALRA", gain_of(report.v_opt));
        }
        if (wants("RMS")) record("RMS", gain_of(rms_select(sets)));
        if (wants("CSM")) {
          try {
            record("CSM", gain_of(benchmark_csm(sets)));
          } catch (const EmptyConditionCell&) {
            record("CSM", nan);
          }
        }
        if (wants("ACSM")) {
          const PowerProbe probe = [&](const ReflectionVector& v, std::uint64_t idx) {
            RVector q(static_cast<Index>(region.locations.size()));
            for (std::size_t k = 0; k < region.locations.size(); ++k) {
              q(static_cast<Index>(k)) = measure_entry(region.locations[k], v, ofdm, cfg.J, seed, k, idx,
                                                       cfg.fidelity, StreamTag::AcsmNoise);
            }
            return q;
          };
          try {
            const auto v = benchmark_acsm(sets.front().training, power_matrix(sets), cfg.b, probe, {2, seed});
            record("ACSM", gain_of(v));
          } catch (const EmptyConditionCell&) {
            record("ACSM", nan);
          }
        }
      }
    }
  }
  append_aggregates(result);
  result.sort_records();
  return result;
}

std::string results_csv(const ExperimentResult& result) {
  std::string out = "t_p,method,metric,value,seed\n";
  char buf[64];
  for (const auto& r : result.records) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), r.value);
    out += std::to_string(r.t_p);
    out += ',';
    out += r.method;
    out += ',';
    out += r.metric;
    out += ',';
    out.append(buf, res.ptr);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

void emit_results(const ExperimentResult& result, const std::string& path, ResultFormat format) {
  if (format == ResultFormat::Csv) {
    write_text_file(path, results_csv(result));
    write_text_file(path + ".json", result_to_json(result).dump(2) + "\n");
  } else {
    write_text_file(path, result_to_json(result).dump(2) + "\n");
  }
}

} // namespace irscov
