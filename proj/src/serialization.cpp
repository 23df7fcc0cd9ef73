#include "irscov/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace irscov {

Json matrix_to_json(const CMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Index>(re.size()) != rows || static_cast<Index>(im.size()) != rows) {
    throw DimensionMismatch("matrix JSON row count does not match 'rows'");
  }
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& rr = re.at(static_cast<std::size_t>(i));
    const auto& ri = im.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(rr.size()) != cols || static_cast<Index>(ri.size()) != cols) {
      throw DimensionMismatch("matrix JSON column count does not match 'cols'");
    }
    for (Index c = 0; c < cols; ++c) {
      m(i, c) = Complex(rr.at(static_cast<std::size_t>(c)).get<double>(), ri.at(static_cast<std::size_t>(c)).get<double>());
    }
  }
  return m;
}

Json reflection_to_json(const ReflectionVector& v) { return v.phases(); }

ReflectionVector reflection_from_json(const Json& j, int bits) {
  return ReflectionVector(j.get<std::vector<int>>(), bits);
}

std::string reflection_to_csv(const ReflectionVector& v) {
  std::string out;
  for (Index n = 0; n < v.size(); ++n) {
    if (n) out += ',';
    out += std::to_string(v.phase(n));
  }
  return out;
}

Json channel_snapshot_to_json(const CascadedChannel& h, const CMatrix& R, Index true_rank) {
  return {{"L", h.L()}, {"N", h.N()}, {"H", matrix_to_json(h.H)}, {"R", matrix_to_json(R)}, {"true_rank", true_rank}};
}

CascadedChannel channel_from_json(const Json& j) { return {matrix_from_json(j.at("H"))}; }

Json measurement_to_json(const MeasurementSet& set) {
  Json training = Json::array();
  for (const auto& v : set.training) training.push_back(reflection_to_json(v));
  Json q = Json::array();
  Json t = Json::array();
  for (const auto& e : set.entries) {
    t.push_back(e.t);
    q.push_back(e.q);
  }
  return {{"location", set.location}, {"N", set.ofdm.N},        {"M", set.ofdm.M},
          {"b", set.ofdm.b},          {"P0", set.ofdm.P0},      {"sigma2", set.ofdm.sigma2},
          {"J", set.J},               {"training", training}, {"t", t},
          {"q", q}};
}

MeasurementSet measurement_from_json(const Json& j) {
  MeasurementSet set;
  set.location = j.value("location", Index{0});
  set.ofdm.N = j.at("N").get<Index>();
  set.ofdm.M = j.at("M").get<Index>();
  set.ofdm.b = j.at("b").get<int>();
  set.ofdm.P0 = j.at("P0").get<double>();
  set.ofdm.sigma2 = j.at("sigma2").get<double>();
  set.J = j.at("J").get<Index>();
  for (const auto& v : j.at("training")) set.training.push_back(reflection_from_json(v, set.ofdm.b));
  const auto q = j.at("q").get<std::vector<double>>();
  std::vector<Index> t;
  if (j.contains("t")) {
    t = j.at("t").get<std::vector<Index>>();
  } else {
    for (std::size_t i = 0; i < q.size(); ++i) t.push_back(static_cast<Index>(i));
  }
  if (t.size() != q.size()) throw DimensionMismatch("measurement JSON: 't' and 'q' differ in length");
  for (std::size_t i = 0; i < q.size(); ++i) set.entries.push_back({t[i], q[i]});
  return set;
}

Json estimate_to_json(const WalraResult& r, Index d_stop) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r.R, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::reverse(ev.begin(), ev.end());
  return {{"N", r.R.rows()},
          {"rank", r.rank},
          {"d_stop", d_stop},
          {"R", matrix_to_json(r.R)},
          {"R_psd", matrix_to_json(r.R_psd)},
          {"eigenvalues", ev},
          {"phi_trace", r.phi_trace}};
}

CMatrix estimate_matrix_from_json(const Json& j, bool psd) {
  if (psd && j.contains("R_psd")) return matrix_from_json(j.at("R_psd"));
  return matrix_from_json(j.at("R"));
}

Json report_to_json(const OptimizationReport& r) {
  return {{"method", r.method},
          {"bits", r.v_opt.bits()},
          {"v_opt", reflection_to_json(r.v_opt)},
          {"v_opt_csv", reflection_to_csv(r.v_opt)},
          {"objective", r.objective},
          {"restarts", r.restarts},
          {"sweeps", r.sweeps},
          {"objective_trace", r.objective_trace}};
}

Json profile_to_json(const MultipathProfile& p) {
  return {{"bs_irs_taps", p.bs_irs_taps},
          {"irs_rx_taps", p.irs_rx_taps},
          {"bs_irs_paths", p.bs_irs_paths},
          {"min_paths", p.min_paths},
          {"max_paths", p.max_paths},
          {"decay", p.decay},
          {"path_gain_db", p.path_gain_db},
          {"region_u", p.region_u},
          {"region_w", p.region_w},
          {"dominant_spread", p.dominant_spread},
          {"scatter_spread", p.scatter_spread},
          {"dominant_fraction", p.dominant_fraction},
          {"bs_u", p.bs_u},
          {"bs_w", p.bs_w},
          {"bs_spread", p.bs_spread}};
}

namespace {

template <typename T>
void take(const Json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys{
      "preset", "N",       "M",        "b",          "K0",    "T_p",
      "J",      "P0",      "sigma2",   "rho",        "I",     "epsilon",
      "D_policy", "seeds", "channel_profile", "eval_realizations", "fidelity", "restarts"};
  return keys;
}

} // namespace

MultipathProfile profile_from_json(const Json& j, MultipathProfile p) {
  take(j, "bs_irs_taps", p.bs_irs_taps);
  take(j, "irs_rx_taps", p.irs_rx_taps);
  take(j, "bs_irs_paths", p.bs_irs_paths);
  take(j, "min_paths", p.min_paths);
  take(j, "max_paths", p.max_paths);
  take(j, "decay", p.decay);
  take(j, "path_gain_db", p.path_gain_db);
  take(j, "region_u", p.region_u);
  take(j, "region_w", p.region_w);
  take(j, "dominant_spread", p.dominant_spread);
  take(j, "scatter_spread", p.scatter_spread);
  take(j, "dominant_fraction", p.dominant_fraction);
  take(j, "bs_u", p.bs_u);
  take(j, "bs_w", p.bs_w);
  take(j, "bs_spread", p.bs_spread);
  return p;
}

Json config_to_json(const ScenarioConfig& c) {
  return {{"preset", c.preset},
          {"N", c.N},
          {"M", c.M},
          {"b", c.b},
          {"K0", c.K0},
          {"T_p", c.T_p},
          {"J", c.J},
          {"P0", c.P0},
          {"sigma2", c.sigma2},
          {"rho", c.rho},
          {"I", c.I},
          {"epsilon", c.epsilon},
          {"D_policy", c.D_policy},
          {"seeds", c.seeds},
          {"channel_profile", profile_to_json(c.channel_profile)},
          {"eval_realizations", c.eval_realizations},
          {"fidelity", to_string(c.fidelity)},
          {"restarts", c.restarts}};
}

ScenarioConfig config_from_json(const Json& j, ScenarioConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    const auto& keys = known_config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown config field '" + key + "'");
  }
  try {
    take(j, "preset", c.preset);
    take(j, "N", c.N);
    take(j, "M", c.M);
    take(j, "b", c.b);
    if (j.contains("K0")) {
      c.K0 = j.at("K0").is_array() ? j.at("K0").get<std::vector<Index>>() : std::vector<Index>{j.at("K0").get<Index>()};
    }
    take(j, "T_p", c.T_p);
    take(j, "J", c.J);
    take(j, "P0", c.P0);
    take(j, "sigma2", c.sigma2);
    take(j, "rho", c.rho);
    take(j, "I", c.I);
    take(j, "epsilon", c.epsilon);
    take(j, "D_policy", c.D_policy);
    take(j, "seeds", c.seeds);
    if (j.contains("channel_profile")) c.channel_profile = profile_from_json(j.at("channel_profile"), c.channel_profile);
    take(j, "eval_realizations", c.eval_realizations);
    if (j.contains("fidelity")) c.fidelity = parse_fidelity(j.at("fidelity").get<std::string>());
    take(j, "restarts", c.restarts);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

Json result_to_json(const ExperimentResult& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"t_p", rec.t_p}, {"method", rec.method}, {"metric", rec.metric}, {"value", rec.value}, {"seed", rec.seed}});
  }
  return {{"kind", r.kind}, {"version", r.version}, {"config", config_to_json(r.config)}, {"records", records}, {"timings", r.timings}};
}

ExperimentResult result_from_json(const Json& j) {
  ExperimentResult r;
  r.kind = j.at("kind").get<std::string>();
  r.version = j.value("version", std::string{});
  r.config = config_from_json(j.at("config"), ScenarioConfig{});
  for (const auto& rec : j.at("records")) {
    ResultRecord out;
    out.t_p = rec.at("t_p").get<Index>();
    out.method = rec.at("method").get<std::string>();
    out.metric = rec.at("metric").get<std::string>();
    // NaN is written as null by the JSON encoder
    out.value = rec.at("value").is_null() ? std::numeric_limits<double>::quiet_NaN() : rec.at("value").get<double>();
    out.seed = rec.at("seed").get<std::int64_t>();
    r.records.push_back(std::move(out));
  }
  if (j.contains("timings")) r.timings = j.at("timings").get<std::map<std::string, double>>();
  return r;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace irscov
