#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "irscov/measurement.hpp"
#include "irscov/reflection_vector.hpp"
#include "irscov/types.hpp"

namespace irscov {

struct OptimizationReport {
  ReflectionVector v_opt;
  double objective = 0.0; // v^H R v
  std::string method;
  Index restarts = 0;
  Index sweeps = 0;        // coordinate sweeps of the winning restart
  std::vector<double> objective_trace; // after every single-element update of the winning restart
};

/// Nearest codebook index to each entry's phase.
ReflectionVector quantize_phases(const CVector& x, int bits);

/// Discrete-phase maximization of v^H R v. Restart 0 starts from the
/// quantized principal eigenvector, the rest from random codebook vectors;
/// each runs cyclic exact coordinate ascent until a full sweep changes
/// nothing. Returns the best restart (earliest on ties).
OptimizationReport optimize_reflection(const CMatrix& R, int bits, Index restarts, std::uint64_t seed);

/// v^H mean(R_list) v. Throws ConfigError for an empty list.
double average_gain(const ReflectionVector& v, const std::vector<CMatrix>& R_list);

/// Measured average gain of one candidate vector.
using GainOracle = std::function<double(const ReflectionVector&)>;

/// Random-max sampling with an explicit oracle: T_p random draws, the
/// largest oracle value wins (earliest on ties).
ReflectionVector benchmark_rms(const GainOracle& oracle, Index t_p, Index n, int bits, std::uint64_t seed);

/// Random-max sampling on already recorded data: candidates[t] scored by
/// mean over locations of q_{k,t}.
ReflectionVector rms_select(const std::vector<MeasurementSet>& sets);

/// Conditional sample means: means(n, i) is the mean of every q_{k,t} with
/// v_{t,n} == index i. Throws EmptyConditionCell if a cell has no samples.
RMatrix conditional_means(const std::vector<ReflectionVector>& training, const RMatrix& q_kt,
                          const std::vector<Index>& elements);

/// Stacks per-location powers into a K x T_p matrix.
RMatrix power_matrix(const std::vector<MeasurementSet>& sets);

/// Conditional sample mean selection. Ties go to the lowest codebook index.
ReflectionVector benchmark_csm(const std::vector<MeasurementSet>& sets);
ReflectionVector benchmark_csm(const std::vector<ReflectionVector>& training, const RMatrix& q_kt, int bits);

/// Re-collects K powers (one per sampled location) for a probe vector.
/// probe_index distinguishes successive probes so noise streams differ.
using PowerProbe = std::function<RVector(const ReflectionVector&, std::uint64_t probe_index)>;

struct AcsmOptions {
  Index stages = 2;
  std::uint64_t seed = 0;
};

/// Two-stage adaptive CSM. With stages == 1 this is benchmark_csm on the
/// full record. Otherwise stage 1 runs CSM on the first ceil(T_p/2) records;
/// stage 2 splits elements into halves A = [0, N/2) and B, re-collects
/// floor(T_p/4) probes with B fixed and A random, applies CSM to A, then
/// spends the remaining probes on B with A fixed.
ReflectionVector benchmark_acsm(const std::vector<ReflectionVector>& training, const RMatrix& q_kt, int bits,
                                const PowerProbe& probe, const AcsmOptions& opts);

} // namespace irscov
