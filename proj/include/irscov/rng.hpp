#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "irscov/types.hpp"

namespace irscov {

// Stream tags keep independent consumers of one experiment seed apart.
enum class StreamTag : std::uint64_t {
  BsIrsLink = 1,
  IrsRxLink = 2,
  Training = 3,
  Noise = 4,
  EvalLocation = 5,
  Optimizer = 6,
  Acsm = 7,
  AcsmNoise = 8,
};

using Engine = std::mt19937_64;

/// Engine seeded from (seed, tag, keys...). Streams depend only on the key
/// tuple, never on the order in which threads request them.
Engine make_stream(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> keys = {});

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
Complex complex_gaussian(Engine& eng, double variance);

} // namespace irscov
