#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irscov/channel_model.hpp"
#include "irscov/reflection_vector.hpp"
#include "irscov/rng.hpp"

namespace irscov {

enum class Fidelity {
  Moment,   // q = P0 tr(R V) + Zbar, Zbar drawn from its first two moments
  Waveform, // per-subcarrier signal + noise synthesis over J symbols
};

Fidelity parse_fidelity(const std::string& s);
std::string to_string(Fidelity f);

struct MeasurementEntry {
  Index t = 0;
  double q = 0.0; // averaged receive power [W]
};

/// Averaged power measurements at one location under shared training
/// reflections.
struct MeasurementSet {
  Index location = 0;
  Index J = 1;
  OfdmConfig ofdm;
  std::vector<ReflectionVector> training;
  std::vector<MeasurementEntry> entries;

  Index size() const { return static_cast<Index>(entries.size()); }
  /// Entries reordered by t into a dense vector of q values.
  RVector powers() const;
  void validate() const;
};

/// T_p i.i.d. uniform codebook draws. Vector t depends only on (seed, t), so
/// the first T_p vectors of a longer draw are identical.
std::vector<ReflectionVector> draw_training_vectors(Index t_p, Index n, int bits, std::uint64_t seed);

/// Moment mode. Zbar has mean M sigma2 and variance
/// (M sigma2^2 + 2 sigma2 P0 tr(R V)) / J; draws making q < 0 are rejected.
double measure_power(const CMatrix& r, const ReflectionVector& v, const OfdmConfig& cfg, Index J,
                     Engine& eng);

/// Waveform mode. Symbols are sqrt(P0) with uniform random phase.
double measure_power_waveform(const CascadedChannel& h, const ReflectionVector& v,
                              const OfdmConfig& cfg, Index J, Engine& eng);

/// Ground truth of one sampled location as seen by the measurement layer.
struct LocationTruth {
  CascadedChannel channel;
  CMatrix R;
};

/// Measurements for every (location, training vector) pair. The noise of
/// entry (k, t) comes from the stream keyed by (seed, k, t).
/// OpenMP-parallel over the (k, t) grid.
std::vector<MeasurementSet> simulate_measurements(const std::vector<LocationTruth>& locations,
                                                  const std::vector<ReflectionVector>& training,
                                                  const OfdmConfig& cfg, Index J, std::uint64_t seed,
                                                  Fidelity fidelity);

/// Serial reference of simulate_measurements; identical output.
std::vector<MeasurementSet> simulate_measurements_serial(const std::vector<LocationTruth>& locations,
                                                         const std::vector<ReflectionVector>& training,
                                                         const OfdmConfig& cfg, Index J,
                                                         std::uint64_t seed, Fidelity fidelity);

/// Single measurement of entry (k, t) with its own stream.
double measure_entry(const LocationTruth& loc, const ReflectionVector& v, const OfdmConfig& cfg, Index J,
                     std::uint64_t seed, std::uint64_t location, std::uint64_t t, Fidelity fidelity,
                     StreamTag tag = StreamTag::Noise);

} // namespace irscov
