#pragma once

#include "irscov/types.hpp"

namespace irscov {

/// Real coordinates of an n x n Hermitian matrix in an orthonormal basis of
/// the Hermitian space. Layout: the n diagonal entries, then for every pair
/// i < j in row-major order sqrt(2)*Re(A_ij) followed by sqrt(2)*Im(A_ij).
/// With this layout tr(A B) == dot(coords(A), coords(B)).
struct HermitianCoords {
  Index n = 0;
  RVector w;
};

/// Relative Frobenius tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

bool is_hermitian(const CMatrix& a, double rel_tol = kHermitianTolerance);

/// Symmetrizes A within tolerance and maps it to coordinates.
/// Throws NonHermitianInput when ||A - A^H||_F > tol * ||A||_F.
HermitianCoords map_to_coords(const CMatrix& a);

/// Inverse map. Throws BadLength if w.size() is not a perfect square.
CMatrix map_from_coords(const RVector& w);
CMatrix map_from_coords(const HermitianCoords& coords);

/// Coordinates of x x^H, computed without forming the outer product.
RVector rank_one_coords(const CVector& x);

/// Offset of the first off-diagonal coordinate for pair (i, j), i < j.
inline Index pair_offset(Index n, Index i, Index j) {
  // pairs before row i: sum_{r<i} (n-1-r) = i*(2n-i-1)/2
  return n + 2 * (i * (2 * n - i - 1) / 2 + (j - i - 1));
}

} // namespace irscov
