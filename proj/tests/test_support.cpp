#include "test_support.hpp"

#include <cmath>
#include <numbers>

namespace irscov::testing {

CVector random_complex(Index n, TestEngine& eng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(nd(eng), nd(eng));
  return v;
}

CMatrix random_complex_matrix(Index rows, Index cols, TestEngine& eng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(nd(eng), nd(eng));
  return m;
}

CMatrix random_hermitian(Index n, TestEngine& eng) {
  const CMatrix a = random_complex_matrix(n, n, eng);
  return a + a.adjoint();
}

CMatrix random_psd(Index n, Index rank, TestEngine& eng) {
  CMatrix r = CMatrix::Zero(n, n);
  for (Index i = 0; i < rank; ++i) {
    const CVector h = random_complex(n, eng);
    r += h * h.adjoint();
  }
  return r;
}

CMatrix random_real_psd(Index n, Index rank, TestEngine& eng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix r = CMatrix::Zero(n, n);
  for (Index i = 0; i < rank; ++i) {
    CVector h(n);
    for (Index j = 0; j < n; ++j) h(j) = nd(eng);
    r += h * h.adjoint();
  }
  return r;
}

Complex trace_product(const CMatrix& a, const CMatrix& b) {
  Complex acc{};
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) acc += a(i, j) * b(j, i);
  return acc;
}

CVector naive_convolution(const CVector& a, const CVector& b) {
  const Index L = a.size() + b.size() - 1;
  CVector out = CVector::Zero(L);
  for (Index n = 0; n < L; ++n) {
    for (Index k = 0; k < a.size(); ++k) {
      const Index j = n - k;
      if (j >= 0 && j < b.size()) out(n) += a(k) * b(j);
    }
  }
  return out;
}

CMatrix unitary_dft_matrix(Index M) {
  CMatrix F(M, M);
  for (Index m = 0; m < M; ++m)
    for (Index l = 0; l < M; ++l)
      F(m, l) = std::exp(Complex(0.0, -2.0 * std::numbers::pi * static_cast<double>(m * l) / static_cast<double>(M))) /
                std::sqrt(static_cast<double>(M));
  return F;
}

RVector coords_oracle(const CMatrix& a) {
  const Index n = a.rows();
  RVector w(n * n);
  Index pos = 0;
  for (Index i = 0; i < n; ++i) w(pos++) = a(i, i).real();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      w(pos++) = std::sqrt(2.0) * a(i, j).real();
      w(pos++) = std::sqrt(2.0) * a(i, j).imag();
    }
  }
  return w;
}

RMatrix sensing_matrix_oracle(const std::vector<ReflectionVector>& training, double P0) {
  const Index n = training.front().size();
  RMatrix C(n * n, static_cast<Index>(training.size()));
  for (std::size_t t = 0; t < training.size(); ++t) {
    const CVector v = training[t].value();
    const CMatrix V = v * v.adjoint();
    C.col(static_cast<Index>(t)) = P0 * coords_oracle(V);
  }
  return C;
}

JointSolution joint_least_squares(const RMatrix& C, const RVector& beta, const RMatrix& Phi, double rho) {
  const Index d = C.rows();
  const Index t = C.cols();
  const Index k = Phi.cols();
  RMatrix A = RMatrix::Zero(d + t, d + k);
  A.topLeftCorner(d, d).setIdentity();
  if (k > 0) A.topRightCorner(d, k) = -Phi;
  A.bottomLeftCorner(t, d) = std::sqrt(rho) * C.transpose();
  RVector rhs = RVector::Zero(d + t);
  rhs.tail(t) = std::sqrt(rho) * beta;
  const RVector x = A.completeOrthogonalDecomposition().solve(rhs);
  return {x.head(d), x.tail(k)};
}

double exhaustive_max(const CMatrix& R, int bits) {
  const Index n = R.rows();
  const int levels = 1 << bits;
  std::vector<Complex> book;
  for (int i = 0; i < levels; ++i) book.push_back(std::polar(1.0, 2.0 * std::numbers::pi * i / levels));
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    CVector v(n);
    for (Index e = 0; e < n; ++e) v(e) = book[static_cast<std::size_t>(idx[static_cast<std::size_t>(e)])];
    best = std::max(best, (v.adjoint() * R * v)(0, 0).real());
    Index e = 0;
    while (e < n && ++idx[static_cast<std::size_t>(e)] == levels) idx[static_cast<std::size_t>(e++)] = 0;
    if (e == n) break;
  }
  return best;
}

MeasurementSet noiseless_set(const CMatrix& R, const std::vector<ReflectionVector>& training, const OfdmConfig& cfg) {
  MeasurementSet set;
  set.J = 1;
  set.ofdm = cfg;
  set.training = training;
  for (std::size_t t = 0; t < training.size(); ++t) {
    const CVector v = training[t].value();
    const double gain = (v.adjoint() * R * v)(0, 0).real();
    set.entries.push_back({static_cast<Index>(t), cfg.P0 * gain + static_cast<double>(cfg.M) * cfg.sigma2});
  }
  return set;
}

} // namespace irscov::testing
