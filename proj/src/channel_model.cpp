#include "irscov/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace irscov {

void OfdmConfig::validate() const {
  if (M < 1) throw ConfigError("M must be >= 1");
  if (N < 1) throw ConfigError("N must be >= 1");
  if (!(P0 > 0.0)) throw ConfigError("P0 must be > 0");
  if (!(sigma2 >= 0.0)) throw ConfigError("sigma2 must be >= 0");
  if (b < 1 || b > 16) throw ConfigError("b must be in [1, 16]");
}

void MultipathProfile::validate() const {
  if (bs_irs_taps < 1 || irs_rx_taps < 1) throw InvalidProfile("tap counts must be >= 1");
  if (!(decay > 0.0)) throw InvalidProfile("power-delay decay must be > 0");
  if (bs_irs_paths < 1 || bs_irs_paths > bs_irs_taps) {
    throw InvalidProfile("bs_irs_paths must be in [1, bs_irs_taps]");
  }
  if (min_paths < 1 || max_paths > irs_rx_taps || min_paths > max_paths) {
    throw InvalidProfile("IRS-receiver path range must satisfy 1 <= min_paths <= max_paths <= irs_rx_taps");
  }
  if (!(dominant_fraction > 0.0 && dominant_fraction <= 1.0)) {
    throw InvalidProfile("dominant_fraction must be in (0, 1]");
  }
  if (dominant_spread < 0.0 || scatter_spread < 0.0 || bs_spread < 0.0) {
    throw InvalidProfile("angular spreads must be >= 0");
  }
}

std::pair<Index, Index> array_shape(Index n) {
  Index rows = static_cast<Index>(std::sqrt(static_cast<double>(n)));
  while (rows > 1 && n % rows != 0) --rows;
  rows = std::max<Index>(rows, 1);
  return {rows, n / rows};
}

LinkTaps taps_from_paths(Index n_elements, Index tap_count, const std::vector<PathSpec>& paths) {
  if (n_elements < 1 || tap_count < 1) throw InvalidProfile("link needs >= 1 element and >= 1 tap");
  const auto [rows, cols] = array_shape(n_elements);
  LinkTaps link{CMatrix::Zero(tap_count, n_elements), static_cast<Index>(paths.size())};
  for (const auto& p : paths) {
    if (p.tap < 0 || p.tap >= tap_count) throw InvalidProfile("path tap outside the link's tap range");
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) {
        const double arg = std::numbers::pi * (static_cast<double>(c) * p.u + static_cast<double>(r) * p.w);
        link.taps(p.tap, r * cols + c) += p.gain * std::polar(1.0, arg);
      }
    }
  }
  return link;
}

namespace {

double clamp_cosine(double x) { return std::clamp(x, -1.0, 1.0); }

std::vector<PathSpec> draw_paths(Engine& eng, Index count, Index taps, double decay, double power,
                                 double dominant_fraction, double u0, double w0, double dominant_spread,
                                 double scatter_spread) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<Index> tap_dist(0, taps - 1);

  std::vector<PathSpec> paths(static_cast<std::size_t>(count));
  // dominant path: first tap, fixed magnitude, random phase
  const double dominant_power = count == 1 ? power : power * dominant_fraction;
  paths[0].tap = 0;
  paths[0].gain = std::polar(std::sqrt(dominant_power), phase(eng));
  paths[0].u = clamp_cosine(u0 + dominant_spread * nd(eng));
  paths[0].w = clamp_cosine(w0 + dominant_spread * nd(eng));

  if (count > 1) {
    std::vector<double> weight(paths.size(), 0.0);
    double total = 0.0;
    for (std::size_t p = 1; p < paths.size(); ++p) {
      paths[p].tap = tap_dist(eng);
      weight[p] = std::exp(-static_cast<double>(paths[p].tap) / decay);
      total += weight[p];
    }
    const double scattered_power = power - dominant_power;
    for (std::size_t p = 1; p < paths.size(); ++p) {
      paths[p].gain = complex_gaussian(eng, scattered_power * weight[p] / total);
      paths[p].u = clamp_cosine(u0 + scatter_spread * nd(eng));
      paths[p].w = clamp_cosine(w0 + scatter_spread * nd(eng));
    }
  }
  return paths;
}

} // namespace

LinkTaps generate_bs_irs_link(std::uint64_t seed, Index n_elements, const MultipathProfile& profile) {
  profile.validate();
  auto eng = make_stream(seed, StreamTag::BsIrsLink);
  const auto paths = draw_paths(eng, profile.bs_irs_paths, profile.bs_irs_taps, profile.decay, 1.0,
                                profile.dominant_fraction, profile.bs_u, profile.bs_w, profile.bs_spread,
                                profile.scatter_spread);
  return taps_from_paths(n_elements, profile.bs_irs_taps, paths);
}

LinkTaps generate_irs_rx_link(Engine& eng, Index n_elements, const MultipathProfile& profile) {
  profile.validate();
  std::uniform_int_distribution<Index> count_dist(profile.min_paths, profile.max_paths);
  const Index count = count_dist(eng);
  const double power = std::pow(10.0, profile.path_gain_db / 10.0);
  const auto paths = draw_paths(eng, count, profile.irs_rx_taps, profile.decay, power,
                                profile.dominant_fraction, profile.region_u, profile.region_w,
                                profile.dominant_spread, profile.scatter_spread);
  return taps_from_paths(n_elements, profile.irs_rx_taps, paths);
}

std::pair<LinkTaps, LinkTaps> generate_location_channels(std::uint64_t seed, std::uint64_t location,
                                                         Index n_elements,
                                                         const MultipathProfile& profile) {
  auto g = generate_bs_irs_link(seed, n_elements, profile);
  auto eng = make_stream(seed, StreamTag::IrsRxLink, {location});
  auto r = generate_irs_rx_link(eng, n_elements, profile);
  return {std::move(g), std::move(r)};
}

CascadedChannel cascade(const LinkTaps& g, const LinkTaps& r) {
  if (g.elements() != r.elements()) {
    throw DimensionMismatch("cascade: BS-IRS link has " + std::to_string(g.elements()) +
                            " elements, IRS-receiver link has " + std::to_string(r.elements()));
  }
  const Index lg = g.tap_count();
  const Index lr = r.tap_count();
  CascadedChannel out{CMatrix::Zero(lg + lr - 1, g.elements())};
  for (Index n = 0; n < g.elements(); ++n) {
    for (Index i = 0; i < lg; ++i) {
      const Complex gi = g.taps(i, n);
      if (gi == Complex{}) continue;
      for (Index j = 0; j < lr; ++j) out.H(i + j, n) += gi * r.taps(j, n);
    }
  }
  return out;
}

CMatrix autocorrelation(const CascadedChannel& h) {
  CMatrix r = h.H.adjoint() * h.H;
  return 0.5 * (r + r.adjoint());
}

CVector cfr(const CascadedChannel& h, const CVector& v, Index M) {
  if (h.L() > M) {
    throw PadError("cascaded channel has " + std::to_string(h.L()) + " taps but only " +
                   std::to_string(M) + " subcarriers");
  }
  if (v.size() != h.N()) throw DimensionMismatch("reflection vector length does not match N");
  const CVector cir = h.H * v;
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  CVector out(M);
  for (Index m = 0; m < M; ++m) {
    Complex acc{};
    for (Index l = 0; l < cir.size(); ++l) {
      // reduce the exponent modulo M before forming the angle
      const auto e = static_cast<double>((m * l) % M);
      acc += cir(l) * std::polar(1.0, -2.0 * std::numbers::pi * e / static_cast<double>(M));
    }
    out(m) = scale * acc;
  }
  return out;
}

CVector cfr(const CascadedChannel& h, const ReflectionVector& v, Index M) { return cfr(h, v.value(), M); }

Index numerical_rank(const CMatrix& hermitian, double rel_tol) {
  if (hermitian.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > rel_tol * top) ++rank;
  }
  return rank;
}

} // namespace irscov
