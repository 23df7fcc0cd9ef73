#include "irscov/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace irscov {

Fidelity parse_fidelity(const std::string& s) {
  if (s == "moment") return Fidelity::Moment;
  if (s == "waveform") return Fidelity::Waveform;
  throw ConfigError("unknown fidelity mode '" + s + "' (expected moment|waveform)");
}

std::string to_string(Fidelity f) { return f == Fidelity::Moment ? "moment" : "waveform"; }

RVector MeasurementSet::powers() const {
  RVector q = RVector::Zero(static_cast<Index>(training.size()));
  for (const auto& e : entries) q(e.t) = e.q;
  return q;
}

void MeasurementSet::validate() const {
  ofdm.validate();
  if (J < 1) throw ConfigError("J must be >= 1");
  if (entries.size() != training.size()) {
    throw DimensionMismatch("measurement set has " + std::to_string(entries.size()) + " entries but " +
                            std::to_string(training.size()) + " training vectors");
  }
  std::vector<char> seen(training.size(), 0);
  for (const auto& e : entries) {
    if (e.t < 0 || e.t >= static_cast<Index>(training.size()) || seen[static_cast<std::size_t>(e.t)]) {
      throw DimensionMismatch("measurement entries must cover each training index exactly once");
    }
    seen[static_cast<std::size_t>(e.t)] = 1;
    if (!(e.q >= 0.0)) throw ConfigError("measured power must be finite and >= 0");
  }
  for (const auto& v : training) {
    if (v.size() != ofdm.N) {
      throw DimensionMismatch("training vector has " + std::to_string(v.size()) + " elements, expected N=" +
                              std::to_string(ofdm.N));
    }
    if (v.bits() != ofdm.b) throw DimensionMismatch("training vector bit width does not match b");
  }
}

std::vector<ReflectionVector> draw_training_vectors(Index t_p, Index n, int bits, std::uint64_t seed) {
  if (t_p < 1) throw ConfigError("T_p must be >= 1");
  std::vector<ReflectionVector> out;
  out.reserve(static_cast<std::size_t>(t_p));
  for (Index t = 0; t < t_p; ++t) {
    auto eng = make_stream(seed, StreamTag::Training, {static_cast<std::uint64_t>(t)});
    std::uniform_int_distribution<int> dist(0, (1 << bits) - 1);
    std::vector<int> phases(static_cast<std::size_t>(n));
    for (auto& p : phases) p = dist(eng);
    out.emplace_back(std::move(phases), bits);
  }
  return out;
}

double measure_power(const CMatrix& r, const ReflectionVector& v, const OfdmConfig& cfg, Index J,
                     Engine& eng) {
  if (J < 1) throw ConfigError("J must be >= 1");
  if (r.rows() != v.size() || r.cols() != v.size()) {
    throw DimensionMismatch("autocorrelation is " + std::to_string(r.rows()) + "x" + std::to_string(r.cols()) +
                            " but reflection vector has " + std::to_string(v.size()) + " elements");
  }
  const double gain = std::max(quadratic_form(r, v.value()), 0.0);
  const double signal = cfg.P0 * gain;
  const double m = static_cast<double>(cfg.M);
  const double mean = m * cfg.sigma2;
  const double var = (m * cfg.sigma2 * cfg.sigma2 + 2.0 * cfg.sigma2 * signal) / static_cast<double>(J);
  if (var == 0.0) return signal + mean;

  std::normal_distribution<double> nd(mean, std::sqrt(var));
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double q = signal + nd(eng);
    if (q >= 0.0) return q;
  }
  return 0.0;
}

double measure_power_waveform(const CascadedChannel& h, const ReflectionVector& v, const OfdmConfig& cfg,
                              Index J, Engine& eng) {
  if (J < 1) throw ConfigError("J must be >= 1");
  if (h.N() != v.size()) throw DimensionMismatch("channel and reflection vector disagree on N");
  const CVector hf = cfr(h, v, cfg.M);
  const double amp = std::sqrt(cfg.P0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  double total = 0.0;
  for (Index i = 0; i < J; ++i) {
    for (Index m = 0; m < cfg.M; ++m) {
      const Complex s = std::polar(amp, phase(eng));
      const Complex z = cfg.sigma2 > 0.0 ? complex_gaussian(eng, cfg.sigma2) : Complex{};
      total += std::norm(hf(m) * s + z);
    }
  }
  return total / static_cast<double>(J);
}

double measure_entry(const LocationTruth& loc, const ReflectionVector& v, const OfdmConfig& cfg, Index J,
                     std::uint64_t seed, std::uint64_t location, std::uint64_t t, Fidelity fidelity,
                     StreamTag tag) {
  auto eng = make_stream(seed, tag, {location, t});
  if (fidelity == Fidelity::Waveform) return measure_power_waveform(loc.channel, v, cfg, J, eng);
  return measure_power(loc.R, v, cfg, J, eng);
}

namespace {

std::vector<MeasurementSet> empty_sets(const std::vector<LocationTruth>& locations,
                                       const std::vector<ReflectionVector>& training, const OfdmConfig& cfg,
                                       Index J) {
  cfg.validate();
  if (J < 1) throw ConfigError("J must be >= 1");
  for (const auto& loc : locations) {
    if (loc.R.rows() != cfg.N) throw DimensionMismatch("location autocorrelation does not match N");
  }
  for (const auto& v : training) {
    if (v.size() != cfg.N) throw DimensionMismatch("training vector length does not match N");
  }
  std::vector<MeasurementSet> sets(locations.size());
  for (std::size_t k = 0; k < sets.size(); ++k) {
    sets[k].location = static_cast<Index>(k);
    sets[k].J = J;
    sets[k].ofdm = cfg;
    sets[k].training = training;
    sets[k].entries.resize(training.size());
  }
  return sets;
}

} // namespace

std::vector<MeasurementSet> simulate_measurements(const std::vector<LocationTruth>& locations,
                                                  const std::vector<ReflectionVector>& training,
                                                  const OfdmConfig& cfg, Index J, std::uint64_t seed,
                                                  Fidelity fidelity) {
  auto sets = empty_sets(locations, training, cfg, J);
  const auto K = static_cast<long>(locations.size());
  const auto T = static_cast<long>(training.size());
#pragma omp parallel for collapse(2) schedule(static)
  for (long k = 0; k < K; ++k) {
    for (long t = 0; t < T; ++t) {
      const double q = measure_entry(locations[static_cast<std::size_t>(k)], training[static_cast<std::size_t>(t)],
                                     cfg, J, seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(t),
                                     fidelity);
      sets[static_cast<std::size_t>(k)].entries[static_cast<std::size_t>(t)] = {t, q};
    }
  }
  return sets;
}

std::vector<MeasurementSet> simulate_measurements_serial(const std::vector<LocationTruth>& locations,
                                                         const std::vector<ReflectionVector>& training,
                                                         const OfdmConfig& cfg, Index J,
                                                         std::uint64_t seed, Fidelity fidelity) {
  auto sets = empty_sets(locations, training, cfg, J);
  for (std::size_t k = 0; k < locations.size(); ++k) {
    for (std::size_t t = 0; t < training.size(); ++t) {
      const double q = measure_entry(locations[k], training[t], cfg, J, seed, k, t, fidelity);
      sets[k].entries[t] = {static_cast<Index>(t), q};
    }
  }
  return sets;
}

} // namespace irscov
