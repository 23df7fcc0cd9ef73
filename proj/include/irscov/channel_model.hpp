#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "irscov/reflection_vector.hpp"
#include "irscov/rng.hpp"
#include "irscov/types.hpp"

namespace irscov {

struct OfdmConfig {
  Index M = 32;          // subcarriers
  double P0 = 1.0;       // per-subcarrier transmit power [W]
  double sigma2 = 1e-15; // per-subcarrier noise power [W]
  int b = 2;             // phase-shift bits
  Index N = 16;          // IRS elements

  void validate() const;
};

/// One propagation path of a link: delay tap, complex gain and the direction
/// cosines (u, w) of its planar-array response at the IRS.
struct PathSpec {
  Index tap = 0;
  Complex gain{1.0, 0.0};
  double u = 0.0;
  double w = 0.0;
};

/// Per-element tap matrix of one link. Column n holds the taps seen by
/// element n; rows are delay taps.
struct LinkTaps {
  CMatrix taps;
  Index paths = 0;

  Index tap_count() const { return taps.rows(); }
  Index elements() const { return taps.cols(); }
};

struct CascadedChannel {
  CMatrix H; // L x N

  Index L() const { return H.rows(); }
  Index N() const { return H.cols(); }
};

/// Synthetic multipath profile standing in for ray-traced channels.
/// Path gains are circular Gaussian with an exponential power-delay profile
/// exp(-tap / decay); the BS-IRS link is shared by every location.
struct MultipathProfile {
  Index bs_irs_taps = 3;  // L_g
  Index irs_rx_taps = 6;  // L_r
  Index bs_irs_paths = 2;
  Index min_paths = 2;    // IRS-receiver paths per location, inclusive range
  Index max_paths = 6;
  double decay = 2.0;     // taps
  double path_gain_db = 0.0;
  // Direction cosines of the region as seen from the IRS, and the spread
  // of the dominant path around it. Scattered paths are drawn with
  // scatter_spread.
  double region_u = 0.35;
  double region_w = -0.2;
  double dominant_spread = 0.04;
  double scatter_spread = 0.5;
  double dominant_fraction = 0.6; // share of link power on the dominant path
  double bs_u = -0.3;
  double bs_w = 0.1;
  double bs_spread = 0.05;

  Index cascaded_taps() const { return bs_irs_taps + irs_rx_taps - 1; }
  void validate() const;
};

/// Rows x cols of the planar array used for N elements: the most square
/// factorization with rows <= cols.
std::pair<Index, Index> array_shape(Index n);

/// Deterministic tap construction from explicit paths.
LinkTaps taps_from_paths(Index n_elements, Index tap_count, const std::vector<PathSpec>& paths);

/// BS-IRS taps (shared, depends only on seed) and IRS-receiver taps for
/// location k.
std::pair<LinkTaps, LinkTaps> generate_location_channels(std::uint64_t seed, std::uint64_t location,
                                                         Index n_elements,
                                                         const MultipathProfile& profile);

LinkTaps generate_bs_irs_link(std::uint64_t seed, Index n_elements, const MultipathProfile& profile);

/// One IRS-receiver link drawn from eng. Callers key the engine by location.
LinkTaps generate_irs_rx_link(Engine& eng, Index n_elements, const MultipathProfile& profile);

/// Per-element linear convolution, L = L_g + L_r - 1.
CascadedChannel cascade(const LinkTaps& g, const LinkTaps& r);

/// R = H^H H, exactly Hermitian.
CMatrix autocorrelation(const CascadedChannel& h);

/// Unitary M-point DFT of the zero-padded CIR H*v. Throws PadError if L > M.
CVector cfr(const CascadedChannel& h, const CVector& v, Index M);
CVector cfr(const CascadedChannel& h, const ReflectionVector& v, Index M);

/// Number of eigenvalues above rel_tol * lambda_max.
Index numerical_rank(const CMatrix& hermitian, double rel_tol = 1e-9);

} // namespace irscov
