#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "irscov/measurement.hpp"
#include "irscov/types.hpp"

namespace irscov {

enum class WalraMode {
  Complex, // b >= 2: full Hermitian estimate, D eigen-directions
  Real,    // b == 1: real symmetric estimate of Re(R), 2D eigen-directions
};

inline WalraMode mode_for_bits(int b) { return b == 1 ? WalraMode::Real : WalraMode::Complex; }

struct WalraConfig {
  double rho = 10.0;
  Index iterations = 20; // I
  Index rank = 1;        // D, ignored by progressive_refine
  Index max_rank = 32;   // hard stop of progressive refinement (M)
  double epsilon = 0.005;
  WalraMode mode = WalraMode::Complex;
  bool project_psd = true;

  void validate() const;
};

/// Measurement operator shared by every location that used the same
/// training reflections: C = P0 [coords(V_1) ... coords(V_Tp)] and a
/// factorization of the Tp x Tp Woodbury core (I/rho + C^T C).
class SensingOperator {
public:
  SensingOperator(const std::vector<ReflectionVector>& training, double P0, double rho);

  Index n() const { return n_; }
  Index dim() const { return C_.rows(); }
  Index measurements() const { return C_.cols(); }
  double rho() const { return rho_; }
  const RMatrix& C() const { return C_; }

  /// Upsilon x = (I + rho C C^T)^{-1} x = x - C (I/rho + C^T C)^{-1} C^T x
  RMatrix apply_upsilon(const RMatrix& x) const;
  /// (I - Upsilon) x
  RMatrix apply_complement(const RMatrix& x) const;

private:
  Index n_;
  double rho_;
  RMatrix C_;
  Eigen::LDLT<RMatrix> core_;
};

/// Per-location data for the closed-form updates.
struct SensingCache {
  std::shared_ptr<const SensingOperator> op;
  RVector beta; // q - M sigma2
  RVector chi;  // rho Upsilon C beta
};

SensingCache build_sensing_cache(std::shared_ptr<const SensingOperator> op, const RVector& q,
                                 const OfdmConfig& cfg);
SensingCache build_sensing_cache(const MeasurementSet& set, double rho);

struct ClosedFormResult {
  RVector w;
  RVector mu;
  CMatrix R;
  double phi = 0.0;
};

/// Exact minimizer over (w, mu) of ||w - Phi mu||^2 + rho ||C^T w - beta||^2
/// for fixed orthonormal X (columns x_l, Phi_l = coords(x_l x_l^H)). An
/// empty or all-zero X gives mu = 0 and w = chi.
ClosedFormResult closed_form_update(const SensingCache& cache, const CMatrix& X);

/// Penalized distance ||R - X diag(mu) X^H||_F^2 + rho ||C^T w - beta||^2.
double penalized_distance(const SensingCache& cache, const RVector& w, const CMatrix& X, const RVector& mu);

struct WalraResult {
  CMatrix R;        // final iterate, Hermitian, possibly indefinite
  CMatrix R_psd;    // nearest PSD matrix (equals R when projection is off)
  RVector mu;
  CMatrix X;
  std::vector<double> phi_trace;
  Index rank = 0;   // D used
};

enum class EigenOrder { Value, Magnitude };

/// Eigenvectors of the `count` leading eigenvalues (by value or by |value|).
/// REAL mode decomposes Re(R) and returns real vectors.
CMatrix top_eigenvectors(const CMatrix& R, Index count, WalraMode mode, EigenOrder order = EigenOrder::Value);

/// Columns of X for rank D: D (Complex) or 2D (Real), capped at N.
Index basis_columns(Index D, Index n, WalraMode mode);

/// Eigenvalue clipping onto the PSD cone.
CMatrix project_psd(const CMatrix& R);

/// Alternating minimization from X = 0.
WalraResult walra(const SensingCache& cache, const WalraConfig& cfg);

/// Same iteration started from a given basis instead of X = 0.
WalraResult walra_from(const SensingCache& cache, const WalraConfig& cfg, const CMatrix& X_init);

struct RefineResult {
  WalraResult estimate;
  Index d_stop = 0;
  std::vector<double> relative_changes; // ||R_D - R_{D-1}|| / ||R_{D-1}|| per step
};

/// Runs W-ALRA for D = 1, 2, ... warm-starting each D from the previous
/// estimate until consecutive estimates differ by less than epsilon.
RefineResult progressive_refine(const SensingCache& cache, const WalraConfig& cfg);

struct RankPolicy {
  enum class Kind { Fixed, TrueRank, Auto };
  Kind kind = Kind::Auto;
  Index fixed = 1;

  static RankPolicy parse(const std::string& s);
  std::string label() const;
};

struct RegionEstimate {
  std::vector<WalraResult> per_location;
  std::vector<Index> d_used;
  CMatrix mean_raw;
  CMatrix mean_psd;
};

/// Independent estimation at every location. true_ranks is required for
/// RankPolicy::TrueRank. OpenMP-parallel over locations.
RegionEstimate estimate_region(const std::vector<MeasurementSet>& sets, const WalraConfig& cfg,
                               const RankPolicy& policy, const std::vector<Index>& true_ranks = {});

/// Serial reference of estimate_region.
RegionEstimate estimate_region_serial(const std::vector<MeasurementSet>& sets, const WalraConfig& cfg,
                                      const RankPolicy& policy, const std::vector<Index>& true_ranks = {});

/// ||A - B||_F / ||B||_F
double relative_error(const CMatrix& estimate, const CMatrix& truth);

} // namespace irscov
