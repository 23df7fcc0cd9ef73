#pragma once

// Random instance generators and brute-force oracles shared by the unit and
// acceptance suites. Nothing here calls into the code paths it is used to
// check.

#include <cstdint>
#include <random>
#include <vector>

#include "irscov/channel_model.hpp"
#include "irscov/measurement.hpp"
#include "irscov/reflection_vector.hpp"
#include "irscov/types.hpp"

namespace irscov::testing {

using TestEngine = std::mt19937_64;

CVector random_complex(Index n, TestEngine& eng);
CMatrix random_complex_matrix(Index rows, Index cols, TestEngine& eng);
CMatrix random_hermitian(Index n, TestEngine& eng);
/// Sum of `rank` random rank-one terms h h^H.
CMatrix random_psd(Index n, Index rank, TestEngine& eng);
CMatrix random_real_psd(Index n, Index rank, TestEngine& eng);

/// sum_ij A_ij B_ji
Complex trace_product(const CMatrix& a, const CMatrix& b);

/// Direct-sum linear convolution.
CVector naive_convolution(const CVector& a, const CVector& b);

/// Unnormalized DFT matrix scaled by 1/sqrt(M), built entry by entry.
CMatrix unitary_dft_matrix(Index M);

/// Column t = P0 * vec(V_t) using the documented coordinate layout, built
/// from the matrix entries of v v^H.
RMatrix sensing_matrix_oracle(const std::vector<ReflectionVector>& training, double P0);

/// Coordinates of a Hermitian matrix written out from the layout definition.
RVector coords_oracle(const CMatrix& a);

/// Dense joint least squares for min ||w - Phi mu||^2 + rho ||C^T w - beta||^2
/// via a minimum-norm solve of the stacked system.
struct JointSolution {
  RVector w;
  RVector mu;
};
JointSolution joint_least_squares(const RMatrix& C, const RVector& beta, const RMatrix& Phi, double rho);

/// max over all 2^(b N) codebook vectors of v^H R v.
double exhaustive_max(const CMatrix& R, int bits);

/// Noiseless measurements P0 tr(R V_t) + M sigma2 for a fixed R.
MeasurementSet noiseless_set(const CMatrix& R, const std::vector<ReflectionVector>& training, const OfdmConfig& cfg);

} // namespace irscov::testing
