#include "irscov/reflection.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "irscov/hermitian_space.hpp"
#include "irscov/rng.hpp"

namespace irscov {

Complex codebook_value(int index, int bits) {
  const int levels = 1 << bits;
  index = ((index % levels) + levels) % levels;
  // exact values on the quarter points
  if (index == 0) return {1.0, 0.0};
  if (levels % 4 == 0) {
    const int q = levels / 4;
    if (index == q) return {0.0, 1.0};
    if (index == 2 * q) return {-1.0, 0.0};
    if (index == 3 * q) return {0.0, -1.0};
  } else if (levels == 2 && index == 1) {
    return {-1.0, 0.0};
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * index / levels);
}

ReflectionVector::ReflectionVector(std::vector<int> phases, int bits) : phases_(std::move(phases)), bits_(bits) {
  if (bits < 1 || bits > 16) throw ConfigError("phase bits must be in [1, 16]");
  for (int p : phases_) {
    if (p < 0 || p >= levels()) throw ConfigError("phase index outside the codebook");
  }
}

void ReflectionVector::set_phase(Index n, int index) {
  if (index < 0 || index >= levels()) throw ConfigError("phase index outside the codebook");
  phases_[static_cast<std::size_t>(n)] = index;
}

CVector ReflectionVector::value() const {
  CVector v(size());
  for (Index n = 0; n < size(); ++n) v(n) = codebook_value(phase(n), bits_);
  return v;
}

double quadratic_form(const CMatrix& a, const CVector& v) { return v.dot(a * v).real(); }

ReflectionVector quantize_phases(const CVector& x, int bits) {
  const int levels = 1 << bits;
  const double step = 2.0 * std::numbers::pi / levels;
  std::vector<int> idx(static_cast<std::size_t>(x.size()));
  for (Index n = 0; n < x.size(); ++n) {
    const auto k = static_cast<long>(std::lround(std::arg(x(n)) / step));
    idx[static_cast<std::size_t>(n)] = static_cast<int>(((k % levels) + levels) % levels);
  }
  return ReflectionVector(std::move(idx), bits);
}

namespace {

struct AscentRun {
  ReflectionVector v;
  double objective = 0.0;
  Index sweeps = 0;
  std::vector<double> trace;
};

AscentRun coordinate_ascent(const CMatrix& R, ReflectionVector v, const std::vector<Complex>& codebook) {
  const Index n = R.rows();
  CVector value = v.value();
  CVector u = R * value;
  AscentRun run;
  double f = value.dot(u).real();
  run.trace.push_back(f);

  bool changed = true;
  while (changed) {
    changed = false;
    ++run.sweeps;
    for (Index e = 0; e < n; ++e) {
      const Complex c = u(e) - R(e, e) * value(e);
      const double current = (std::conj(value(e)) * c).real();
      int best = v.phase(e);
      double best_score = current;
      const double tol = 1e-12 * std::abs(c);
      for (int i = 0; i < static_cast<int>(codebook.size()); ++i) {
        const double score = (std::conj(codebook[static_cast<std::size_t>(i)]) * c).real();
        if (score > best_score + tol) {
          best = i;
          best_score = score;
        }
      }
      if (best != v.phase(e)) {
        const Complex delta = codebook[static_cast<std::size_t>(best)] - value(e);
        u += R.col(e) * delta;
        value(e) = codebook[static_cast<std::size_t>(best)];
        v.set_phase(e, best);
        f += 2.0 * (best_score - current);
        changed = true;
      }
      run.trace.push_back(f);
    }
  }
  run.objective = quadratic_form(R, value);
  run.v = std::move(v);
  return run;
}

} // namespace

OptimizationReport optimize_reflection(const CMatrix& R_in, int bits, Index restarts, std::uint64_t seed) {
  if (R_in.rows() < 1 || R_in.rows() != R_in.cols()) throw NonHermitianInput("autocorrelation must be square with N >= 1");
  if (!is_hermitian(R_in)) throw NonHermitianInput("autocorrelation is not Hermitian");
  if (bits < 1 || bits > 16) throw ConfigError("phase bits must be in [1, 16]");
  restarts = std::max<Index>(restarts, 1);
  const CMatrix R = 0.5 * (R_in + R_in.adjoint());
  const Index n = R.rows();

  std::vector<Complex> codebook;
  for (int i = 0; i < (1 << bits); ++i) codebook.push_back(codebook_value(i, bits));

  OptimizationReport best;
  best.method = "coordinate-ascent";
  best.restarts = restarts;
  bool have = false;
  for (Index r = 0; r < restarts; ++r) {
    ReflectionVector start;
    if (r == 0) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
      start = quantize_phases(es.eigenvectors().col(n - 1), bits);
    } else {
      auto eng = make_stream(seed, StreamTag::Optimizer, {static_cast<std::uint64_t>(r)});
      std::uniform_int_distribution<int> dist(0, (1 << bits) - 1);
      std::vector<int> idx(static_cast<std::size_t>(n));
      for (auto& i : idx) i = dist(eng);
      start = ReflectionVector(std::move(idx), bits);
    }
    auto run = coordinate_ascent(R, std::move(start), codebook);
    if (!have || run.objective > best.objective) {
      best.v_opt = std::move(run.v);
      best.objective = run.objective;
      best.sweeps = run.sweeps;
      best.objective_trace = std::move(run.trace);
      have = true;
    }
  }
  return best;
}

double average_gain(const ReflectionVector& v, const std::vector<CMatrix>& R_list) {
  if (R_list.empty()) throw ConfigError("average_gain needs at least one autocorrelation matrix");
  CMatrix mean = CMatrix::Zero(R_list.front().rows(), R_list.front().cols());
  for (const auto& r : R_list) {
    if (r.rows() != v.size() || r.cols() != v.size()) throw DimensionMismatch("average_gain: dimension mismatch");
    mean += r;
  }
  mean /= static_cast<double>(R_list.size());
  return quadratic_form(mean, v.value());
}

ReflectionVector benchmark_rms(const GainOracle& oracle, Index t_p, Index n, int bits, std::uint64_t seed) {
  const auto candidates = draw_training_vectors(t_p, n, bits, seed);
  std::size_t best = 0;
  double best_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < candidates.size(); ++t) {
    const double g = oracle(candidates[t]);
    if (g > best_gain) {
      best_gain = g;
      best = t;
    }
  }
  return candidates[best];
}

RMatrix power_matrix(const std::vector<MeasurementSet>& sets) {
  if (sets.empty()) throw ConfigError("no measurement sets");
  const auto T = static_cast<Index>(sets.front().training.size());
  RMatrix q(static_cast<Index>(sets.size()), T);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (static_cast<Index>(sets[k].training.size()) != T) throw DimensionMismatch("locations disagree on T_p");
    q.row(static_cast<Index>(k)) = sets[k].powers().transpose();
  }
  return q;
}

ReflectionVector rms_select(const std::vector<MeasurementSet>& sets) {
  const RMatrix q = power_matrix(sets);
  const RVector avg = q.colwise().mean().transpose();
  Index best = 0;
  for (Index t = 1; t < avg.size(); ++t) {
    if (avg(t) > avg(best)) best = t;
  }
  return sets.front().training[static_cast<std::size_t>(best)];
}

RMatrix conditional_means(const std::vector<ReflectionVector>& training, const RMatrix& q_kt,
                          const std::vector<Index>& elements) {
  if (training.empty()) throw ConfigError("conditional means need at least one training vector");
  if (q_kt.cols() != static_cast<Index>(training.size())) {
    throw DimensionMismatch("power matrix has " + std::to_string(q_kt.cols()) + " columns for " +
                            std::to_string(training.size()) + " training vectors");
  }
  const int levels = training.front().levels();
  const RVector column_sum = q_kt.colwise().sum().transpose();
  const auto per_t = static_cast<double>(q_kt.rows());

  RMatrix means = RMatrix::Constant(training.front().size(), levels, std::numeric_limits<double>::quiet_NaN());
  for (Index n : elements) {
    RVector sum = RVector::Zero(levels);
    RVector count = RVector::Zero(levels);
    for (std::size_t t = 0; t < training.size(); ++t) {
      const int i = training[t].phase(n);
      sum(i) += column_sum(static_cast<Index>(t));
      count(i) += per_t;
    }
    for (int i = 0; i < levels; ++i) {
      if (count(i) == 0.0) {
        throw EmptyConditionCell("no samples with element " + std::to_string(n) + " at codebook index " +
                                 std::to_string(i) + "; T_p is too small for conditional means");
      }
      means(n, i) = sum(i) / count(i);
    }
  }
  return means;
}

namespace {

void apply_csm(ReflectionVector& v, const RMatrix& means, const std::vector<Index>& elements) {
  for (Index n : elements) {
    int best = 0;
    for (int i = 1; i < means.cols(); ++i) {
      if (means(n, i) > means(n, best)) best = i;
    }
    v.set_phase(n, best);
  }
}

std::vector<Index> range_indices(Index begin, Index end) {
  std::vector<Index> out;
  for (Index i = begin; i < end; ++i) out.push_back(i);
  return out;
}

} // namespace

ReflectionVector benchmark_csm(const std::vector<ReflectionVector>& training, const RMatrix& q_kt, int bits) {
  if (training.empty()) throw ConfigError("CSM needs training data");
  const Index n = training.front().size();
  const auto all = range_indices(0, n);
  const RMatrix means = conditional_means(training, q_kt, all);
  auto v = ReflectionVector::all_ones(n, bits);
  apply_csm(v, means, all);
  return v;
}

ReflectionVector benchmark_csm(const std::vector<MeasurementSet>& sets) {
  return benchmark_csm(sets.front().training, power_matrix(sets), sets.front().ofdm.b);
}

ReflectionVector benchmark_acsm(const std::vector<ReflectionVector>& training, const RMatrix& q_kt, int bits,
                                const PowerProbe& probe, const AcsmOptions& opts) {
  if (opts.stages < 1) throw ConfigError("ACSM needs at least one stage");
  if (opts.stages == 1) return benchmark_csm(training, q_kt, bits);

  const auto T = static_cast<Index>(training.size());
  const Index stage1 = (T + 1) / 2;
  const std::vector<ReflectionVector> head(training.begin(), training.begin() + stage1);
  ReflectionVector v = benchmark_csm(head, q_kt.leftCols(stage1), bits);

  const Index n = v.size();
  const Index budget = T - stage1;
  const Index probes_a = budget / 2;
  const std::array<std::vector<Index>, 2> halves{range_indices(0, n / 2), range_indices(n / 2, n)};
  const std::array<Index, 2> probes{probes_a, budget - probes_a};

  std::uint64_t probe_index = 0;
  for (std::size_t h = 0; h < 2; ++h) {
    const auto& free = halves[h];
    if (free.empty() || probes[h] == 0) continue;
    std::vector<ReflectionVector> vecs;
    RMatrix q;
    for (Index j = 0; j < probes[h]; ++j, ++probe_index) {
      auto eng = make_stream(opts.seed, StreamTag::Acsm, {probe_index});
      std::uniform_int_distribution<int> dist(0, (1 << bits) - 1);
      ReflectionVector trial = v;
      for (Index e : free) trial.set_phase(e, dist(eng));
      const RVector powers = probe(trial, probe_index);
      if (q.size() == 0) q.resize(powers.size(), probes[h]);
      if (powers.size() != q.rows()) throw DimensionMismatch("probe returned inconsistent location counts");
      q.col(j) = powers;
      vecs.push_back(std::move(trial));
    }
    apply_csm(v, conditional_means(vecs, q, free), free);
  }
  return v;
}

} // namespace irscov
