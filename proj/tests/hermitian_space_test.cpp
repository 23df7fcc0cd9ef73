#include <gtest/gtest.h>

#include <cmath>

#include "irscov/hermitian_space.hpp"
#include "test_support.hpp"

using namespace irscov;
using namespace irscov::testing;

TEST(HermitianSpace, TwoByTwoLayout) {
  CMatrix a(2, 2);
  a << Complex(1, 0), Complex(2, 3), Complex(2, -3), Complex(4, 0);
  const RVector w = map_to_coords(a).w;
  ASSERT_EQ(w.size(), 4);
  EXPECT_DOUBLE_EQ(w(0), 1.0);
  EXPECT_DOUBLE_EQ(w(1), 4.0);
  EXPECT_NEAR(w(2), 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(w(3), 3.0 * std::sqrt(2.0), 1e-15);
}

TEST(HermitianSpace, MatchesLayoutOracle) {
  TestEngine eng(11);
  for (Index n = 1; n <= 7; ++n) {
    const CMatrix a = random_hermitian(n, eng);
    EXPECT_LE((map_to_coords(a).w - coords_oracle(a)).cwiseAbs().maxCoeff(), 1e-14) << "n=" << n;
  }
}

TEST(HermitianSpace, InnerProductIsTraceProduct) {
  TestEngine eng(12);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 2 + rep % 6;
    const CMatrix a = random_hermitian(n, eng);
    const CMatrix b = random_hermitian(n, eng);
    const double tr = trace_product(a, b).real();
    const double dot = map_to_coords(a).w.dot(map_to_coords(b).w);
    EXPECT_LE(std::abs(tr - dot), 1e-10 * std::abs(tr) + 1e-14);
  }
}

TEST(HermitianSpace, RoundTrip) {
  TestEngine eng(13);
  const CMatrix a = random_hermitian(6, eng);
  const CMatrix back = map_from_coords(map_to_coords(a));
  EXPECT_LE((back - a).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HermitianSpace, RankOneCoords) {
  TestEngine eng(14);
  const CVector x = random_complex(5, eng);
  const CMatrix xx = x * x.adjoint();
  EXPECT_LE((rank_one_coords(x) - coords_oracle(xx)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HermitianSpace, PairOffset) {
  // n = 4: pairs (0,1)(0,2)(0,3)(1,2)(1,3)(2,3)
  EXPECT_EQ(pair_offset(4, 0, 1), 4);
  EXPECT_EQ(pair_offset(4, 0, 3), 8);
  EXPECT_EQ(pair_offset(4, 1, 2), 10);
  EXPECT_EQ(pair_offset(4, 2, 3), 14);
}

TEST(HermitianSpace, RejectsNonHermitian) {
  CMatrix a = CMatrix::Identity(3, 3);
  a(0, 1) = Complex(1.0, 0.0);
  EXPECT_THROW(map_to_coords(a), NonHermitianInput);
  EXPECT_FALSE(is_hermitian(a));
}

TEST(HermitianSpace, SymmetrizesRoundOff) {
  CMatrix a = CMatrix::Identity(3, 3);
  a(0, 1) = Complex(0.5, 0.25);
  a(1, 0) = Complex(0.5, -0.25 + 1e-14);
  const CMatrix back = map_from_coords(map_to_coords(a));
  EXPECT_TRUE(back.isApprox(back.adjoint(), 0.0));
}

TEST(HermitianSpace, BadLength) {
  EXPECT_THROW(map_from_coords(RVector::Zero(5)), BadLength);
  EXPECT_NO_THROW(map_from_coords(RVector::Zero(9)));
}

TEST(HermitianSpace, RealSymmetricHasZeroImaginaryCoords) {
  TestEngine eng(15);
  const CMatrix a = random_real_psd(4, 2, eng);
  const RVector w = map_to_coords(a).w;
  for (Index i = 0; i < 4; ++i)
    for (Index j = i + 1; j < 4; ++j) EXPECT_EQ(w(pair_offset(4, i, j) + 1), 0.0);
}
