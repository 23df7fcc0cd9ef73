#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "irscov/types.hpp"

namespace irscov {

/// Codebook value e^{j*index*2pi/2^bits}. Indices 0, 2^b/4, 2^b/2, 3*2^b/4
/// map to exactly 1, j, -1, -j.
Complex codebook_value(int index, int bits);

/// IRS reflection vector stored as codebook indices.
class ReflectionVector {
public:
  ReflectionVector() = default;
  ReflectionVector(std::vector<int> phases, int bits);

  static ReflectionVector all_ones(Index n, int bits) {
    return ReflectionVector(std::vector<int>(static_cast<std::size_t>(n), 0), bits);
  }

  int bits() const { return bits_; }
  int levels() const { return 1 << bits_; }
  Index size() const { return static_cast<Index>(phases_.size()); }
  const std::vector<int>& phases() const { return phases_; }
  int phase(Index n) const { return phases_[static_cast<std::size_t>(n)]; }
  void set_phase(Index n, int index);

  CVector value() const;

  friend bool operator==(const ReflectionVector&, const ReflectionVector&) = default;

private:
  std::vector<int> phases_;
  int bits_ = 1;
};

/// v^H A v for Hermitian A (real part; the imaginary part is round-off).
double quadratic_form(const CMatrix& a, const CVector& v);

} // namespace irscov
