#include "irscov/hermitian_space.hpp"

#include <cmath>
#include <numbers>

namespace irscov {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

Index checked_dimension(Index len) {
  if (len < 0) throw BadLength("negative coordinate length");
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(len))));
  if (n * n != len) {
    throw BadLength("coordinate vector length " + std::to_string(len) + " is not a perfect square");
  }
  return n;
}

} // namespace

bool is_hermitian(const CMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  const double skew = (a - a.adjoint()).norm();
  return skew <= rel_tol * scale;
}

HermitianCoords map_to_coords(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw NonHermitianInput("matrix is not square: " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
  if (!is_hermitian(a)) throw NonHermitianInput("matrix is not Hermitian within tolerance");

  const Index n = a.rows();
  HermitianCoords out{n, RVector(n * n)};
  for (Index i = 0; i < n; ++i) out.w(i) = a(i, i).real();
  Index pos = n;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Complex sym = 0.5 * (a(i, j) + std::conj(a(j, i)));
      out.w(pos++) = kSqrt2 * sym.real();
      out.w(pos++) = kSqrt2 * sym.imag();
    }
  }
  return out;
}

CMatrix map_from_coords(const RVector& w) {
  const Index n = checked_dimension(w.size());
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i) a(i, i) = Complex(w(i), 0.0);
  Index pos = n;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Complex v(w(pos) / kSqrt2, w(pos + 1) / kSqrt2);
      pos += 2;
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  return a;
}

CMatrix map_from_coords(const HermitianCoords& coords) {
  if (coords.w.size() != coords.n * coords.n) {
    throw BadLength("coordinate length does not match n*n");
  }
  return map_from_coords(coords.w);
}

RVector rank_one_coords(const CVector& x) {
  const Index n = x.size();
  RVector w(n * n);
  for (Index i = 0; i < n; ++i) w(i) = std::norm(x(i));
  Index pos = n;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Complex v = x(i) * std::conj(x(j));
      w(pos++) = kSqrt2 * v.real();
      w(pos++) = kSqrt2 * v.imag();
    }
  }
  return w;
}

} // namespace irscov
