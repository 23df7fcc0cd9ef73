#include "irscov/walra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "irscov/hermitian_space.hpp"

namespace irscov {

namespace {

// Eigenvalues of the mu normal matrix below this fraction of the largest are
// dropped in the pseudo-inverse.
constexpr double kPinvTolerance = 1e-10;

} // namespace

void WalraConfig::validate() const {
  if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
  if (iterations < 1) throw ConfigError("iteration count I must be >= 1");
  if (rank < 1) throw ConfigError("rank D must be >= 1");
  if (max_rank < 1) throw ConfigError("maximum rank must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
}

SensingOperator::SensingOperator(const std::vector<ReflectionVector>& training, double P0, double rho)
    : n_(0), rho_(rho) {
  if (training.empty()) throw ConfigError("sensing operator needs at least one training vector");
  if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
  n_ = training.front().size();
  C_.resize(n_ * n_, static_cast<Index>(training.size()));
  for (std::size_t t = 0; t < training.size(); ++t) {
    if (training[t].size() != n_) throw DimensionMismatch("training vectors disagree on N");
    C_.col(static_cast<Index>(t)) = P0 * rank_one_coords(training[t].value());
  }
  RMatrix core = C_.transpose() * C_;
  core.diagonal().array() += 1.0 / rho_;
  core_.compute(core);
  if (core_.info() != Eigen::Success) throw SingularCore("Woodbury core factorization failed");
}

RMatrix SensingOperator::apply_complement(const RMatrix& x) const {
  return C_ * core_.solve(C_.transpose() * x);
}

RMatrix SensingOperator::apply_upsilon(const RMatrix& x) const { return x - apply_complement(x); }

SensingCache build_sensing_cache(std::shared_ptr<const SensingOperator> op, const RVector& q,
                                 const OfdmConfig& cfg) {
  if (q.size() != op->measurements()) {
    throw DimensionMismatch("got " + std::to_string(q.size()) + " measurements for " +
                            std::to_string(op->measurements()) + " training vectors");
  }
  if (op->n() != cfg.N) throw DimensionMismatch("sensing operator N does not match configuration");
  SensingCache cache;
  cache.beta = q.array() - static_cast<double>(cfg.M) * cfg.sigma2;
  cache.chi = op->rho() * op->apply_upsilon(op->C() * cache.beta);
  cache.op = std::move(op);
  return cache;
}

SensingCache build_sensing_cache(const MeasurementSet& set, double rho) {
  set.validate();
  auto op = std::make_shared<const SensingOperator>(set.training, set.ofdm.P0, rho);
  return build_sensing_cache(std::move(op), set.powers(), set.ofdm);
}

namespace {

RMatrix basis_coords(const CMatrix& X) {
  const Index n = X.rows();
  RMatrix phi(n * n, X.cols());
  for (Index l = 0; l < X.cols(); ++l) phi.col(l) = rank_one_coords(X.col(l));
  return phi;
}

double fit_term(const SensingCache& cache, const RVector& w) {
  return cache.op->rho() * (cache.op->C().transpose() * w - cache.beta).squaredNorm();
}

} // namespace

ClosedFormResult closed_form_update(const SensingCache& cache, const CMatrix& X) {
  const auto& op = *cache.op;
  if (X.cols() > 0 && X.rows() != op.n()) throw DimensionMismatch("basis rows do not match N");

  ClosedFormResult out;
  out.mu = RVector::Zero(X.cols());
  if (X.cols() == 0 || X.norm() == 0.0) {
    out.w = cache.chi;
  } else {
    const RMatrix phi = basis_coords(X);
    const RMatrix comp = op.apply_complement(phi); // (I - Upsilon) Phi
    RMatrix normal = phi.transpose() * comp;
    normal = 0.5 * (normal + normal.transpose()).eval();
    const RVector rhs = phi.transpose() * cache.chi;

    Eigen::SelfAdjointEigenSolver<RMatrix> es(normal);
    const RVector& ev = es.eigenvalues();
    const double top = ev.maxCoeff();
    if (!std::isfinite(top) || top <= 1e-14 * phi.squaredNorm()) {
      throw SingularCore("pseudo-inverse of the mu normal matrix collapsed; the basis is invisible to the measurements");
    }
    const RVector proj = es.eigenvectors().transpose() * rhs;
    RVector scaled = RVector::Zero(ev.size());
    for (Index i = 0; i < ev.size(); ++i) {
      if (ev(i) > kPinvTolerance * top) scaled(i) = proj(i) / ev(i);
    }
    out.mu = es.eigenvectors() * scaled;
    out.w = phi * out.mu - comp * out.mu + cache.chi;
    out.phi = (out.w - phi * out.mu).squaredNorm();
  }
  if (X.cols() == 0 || X.norm() == 0.0) out.phi = out.w.squaredNorm();
  out.phi += fit_term(cache, out.w);
  out.R = map_from_coords(out.w);
  return out;
}

double penalized_distance(const SensingCache& cache, const RVector& w, const CMatrix& X, const RVector& mu) {
  RVector g = RVector::Zero(w.size());
  for (Index l = 0; l < X.cols(); ++l) g += mu(l) * rank_one_coords(X.col(l));
  return (w - g).squaredNorm() + fit_term(cache, w);
}

Index basis_columns(Index D, Index n, WalraMode mode) {
  const Index cols = mode == WalraMode::Real ? 2 * D : D;
  return std::min(cols, n);
}

static std::vector<Index> eigen_order(const RVector& ev, EigenOrder order) {
  std::vector<Index> idx(ev.size());
  for (Index i = 0; i < ev.size(); ++i) idx[i] = ev.size() - 1 - i;
  if (order == EigenOrder::Magnitude)
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  return idx;
}

CMatrix top_eigenvectors(const CMatrix& R, Index count, WalraMode mode, EigenOrder order) {
  const Index n = R.rows();
  count = std::min(count, n);
  CMatrix X(n, count);
  if (mode == WalraMode::Real) {
    const RMatrix sym = 0.5 * (R.real() + R.real().transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(sym);
    const auto idx = eigen_order(es.eigenvalues(), order);
    for (Index l = 0; l < count; ++l) X.col(l) = es.eigenvectors().col(idx[l]).cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
    const auto idx = eigen_order(es.eigenvalues(), order);
    for (Index l = 0; l < count; ++l) X.col(l) = es.eigenvectors().col(idx[l]);
  }
  return X;
}

CMatrix project_psd(const CMatrix& R) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
  const RVector clipped = es.eigenvalues().cwiseMax(0.0);
  CMatrix out = es.eigenvectors() * clipped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

WalraResult walra_from(const SensingCache& cache, const WalraConfig& cfg, const CMatrix& X_init) {
  cfg.validate();
  const Index n = cache.op->n();
  const Index cols = basis_columns(cfg.rank, n, cfg.mode);

  auto step = closed_form_update(cache, X_init);
  WalraResult res;
  res.rank = cfg.rank;
  res.X = X_init;
  res.phi_trace.reserve(static_cast<std::size_t>(cfg.iterations + 1));
  res.phi_trace.push_back(step.phi);

  for (Index i = 1; i <= cfg.iterations; ++i) {
    CMatrix X = top_eigenvectors(step.R, cols, cfg.mode);
    auto next = closed_form_update(cache, X);
    // An indefinite iterate can make the largest-value basis go uphill. The
    // largest-magnitude basis is the best rank-D fit, so it never does.
    if (next.phi > step.phi) {
      CMatrix Xm = top_eigenvectors(step.R, cols, cfg.mode, EigenOrder::Magnitude);
      auto alt = closed_form_update(cache, Xm);
      if (alt.phi < next.phi) {
        next = std::move(alt);
        X = std::move(Xm);
      }
    }
    step = std::move(next);
    if (!std::isfinite(step.phi)) throw NonFiniteIterate("penalized distance became non-finite at iteration " + std::to_string(i));
    res.X = std::move(X);
    res.phi_trace.push_back(step.phi);
  }
  res.mu = std::move(step.mu);
  res.R = std::move(step.R);
  res.R_psd = cfg.project_psd ? project_psd(res.R) : res.R;
  return res;
}

WalraResult walra(const SensingCache& cache, const WalraConfig& cfg) {
  return walra_from(cache, cfg, CMatrix(cache.op->n(), 0));
}

RefineResult progressive_refine(const SensingCache& cache, const WalraConfig& cfg) {
  cfg.validate();
  WalraConfig step_cfg = cfg;
  step_cfg.rank = 1;
  RefineResult out;
  WalraResult prev = walra(cache, step_cfg);

  for (Index D = 2; D <= cfg.max_rank; ++D) {
    step_cfg.rank = D;
    const CMatrix X0 = top_eigenvectors(prev.R, basis_columns(D, cache.op->n(), cfg.mode), cfg.mode);
    WalraResult cur = walra_from(cache, step_cfg, X0);
    const double base = prev.R.norm();
    const double diff = (cur.R - prev.R).norm();
    const double change = base > 0.0 ? diff / base : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    out.relative_changes.push_back(change);
    if (change < cfg.epsilon) {
      out.estimate = std::move(cur);
      out.d_stop = D;
      return out;
    }
    prev = std::move(cur);
  }
  out.estimate = std::move(prev);
  out.d_stop = cfg.max_rank;
  return out;
}

RankPolicy RankPolicy::parse(const std::string& s) {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "auto") return {Kind::Auto, 1};
  if (lower == "true-rank" || lower == "true_rank") return {Kind::TrueRank, 1};
  for (const std::string prefix : {"fixed:", "d="}) {
    if (lower.rfind(prefix, 0) == 0) {
      try {
        const long d = std::stol(lower.substr(prefix.size()));
        if (d >= 1) return {Kind::Fixed, static_cast<Index>(d)};
      } catch (const std::exception&) {
      }
      break;
    }
  }
  throw ConfigError("unknown D policy '" + s + "' (expected auto | true-rank | fixed:<d>)");
}

std::string RankPolicy::label() const {
  switch (kind) {
  case Kind::Auto: return "AUTO";
  case Kind::TrueRank: return "TRUE-RANK";
  case Kind::Fixed: return "D=" + std::to_string(fixed);
  }
  return "?";
}

namespace {

struct RegionJob {
  std::shared_ptr<const SensingOperator> op;
  std::vector<SensingCache> caches;
};

RegionJob prepare_region(const std::vector<MeasurementSet>& sets, const WalraConfig& cfg,
                         const RankPolicy& policy, const std::vector<Index>& true_ranks) {
  cfg.validate();
  if (sets.empty()) throw ConfigError("no locations to estimate");
  if (policy.kind == RankPolicy::Kind::TrueRank && true_ranks.size() != sets.size()) {
    throw ConfigError("TRUE-RANK policy needs one true rank per location");
  }
  const auto& ref = sets.front();
  ref.validate();
  for (const auto& s : sets) {
    s.validate();
    if (!(s.training == ref.training)) throw DimensionMismatch("locations do not share training vectors");
    if (s.ofdm.N != ref.ofdm.N || s.ofdm.M != ref.ofdm.M || s.ofdm.P0 != ref.ofdm.P0 ||
        s.ofdm.sigma2 != ref.ofdm.sigma2) {
      throw DimensionMismatch("locations disagree on OFDM configuration");
    }
  }
  RegionJob job;
  job.op = std::make_shared<const SensingOperator>(ref.training, ref.ofdm.P0, cfg.rho);
  for (const auto& s : sets) job.caches.push_back(build_sensing_cache(job.op, s.powers(), s.ofdm));
  return job;
}

void estimate_location(const RegionJob& job, std::size_t k, const WalraConfig& cfg, const RankPolicy& policy,
                       const std::vector<Index>& true_ranks, RegionEstimate& out) {
  WalraConfig local = cfg;
  switch (policy.kind) {
  case RankPolicy::Kind::Auto: {
    auto refined = progressive_refine(job.caches[k], local);
    out.d_used[k] = refined.d_stop;
    out.per_location[k] = std::move(refined.estimate);
    return;
  }
  case RankPolicy::Kind::TrueRank: local.rank = std::max<Index>(true_ranks[k], 1); break;
  case RankPolicy::Kind::Fixed: local.rank = policy.fixed; break;
  }
  out.d_used[k] = local.rank;
  out.per_location[k] = walra(job.caches[k], local);
}

void finish_region(RegionEstimate& out) {
  const Index n = out.per_location.front().R.rows();
  out.mean_raw = CMatrix::Zero(n, n);
  out.mean_psd = CMatrix::Zero(n, n);
  for (const auto& r : out.per_location) {
    out.mean_raw += r.R;
    out.mean_psd += r.R_psd;
  }
  const double inv = 1.0 / static_cast<double>(out.per_location.size());
  out.mean_raw *= inv;
  out.mean_psd *= inv;
}

} // namespace

RegionEstimate estimate_region(const std::vector<MeasurementSet>& sets, const WalraConfig& cfg,
                               const RankPolicy& policy, const std::vector<Index>& true_ranks) {
  const auto job = prepare_region(sets, cfg, policy, true_ranks);
  RegionEstimate out;
  out.per_location.resize(sets.size());
  out.d_used.resize(sets.size());
  const auto K = static_cast<long>(sets.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < K; ++k) {
    try {
      estimate_location(job, static_cast<std::size_t>(k), cfg, policy, true_ranks, out);
    } catch (...) {
#pragma omp critical(irscov_region_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  finish_region(out);
  return out;
}

RegionEstimate estimate_region_serial(const std::vector<MeasurementSet>& sets, const WalraConfig& cfg,
                                      const RankPolicy& policy, const std::vector<Index>& true_ranks) {
  const auto job = prepare_region(sets, cfg, policy, true_ranks);
  RegionEstimate out;
  out.per_location.resize(sets.size());
  out.d_used.resize(sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) estimate_location(job, k, cfg, policy, true_ranks, out);
  finish_region(out);
  return out;
}

double relative_error(const CMatrix& estimate, const CMatrix& truth) {
  const double base = truth.norm();
  if (base == 0.0) return estimate.norm();
  return (estimate - truth).norm() / base;
}

} // namespace irscov
