#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "smm/spin.hpp"

using namespace smm;

namespace {

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace

TEST(SpinSystem, RejectsNonPositiveTwoS) {
  EXPECT_THROW(SpinSystem(0), InvalidInput);
  EXPECT_THROW(SpinSystem(-3), InvalidInput);
  EXPECT_THROW(SpinSystem::from_spin(1.3), InvalidInput);
  EXPECT_EQ(SpinSystem::from_spin(9.5).two_s(), 19);
  EXPECT_EQ(SpinSystem(19).dim(), 20);
}

TEST(SpinMatrices, SpinHalfArePauliOverTwo) {
  const auto m = spin_matrices(SpinSystem(1));
  EXPECT_EQ(m.sx(0, 1), cplx(0.5, 0.0));
  EXPECT_EQ(m.sy(0, 1), cplx(0.0, -0.5));
  EXPECT_EQ(m.sy(1, 0), cplx(0.0, 0.5));
  EXPECT_EQ(m.sz(0, 0), cplx(0.5, 0.0));
  EXPECT_EQ(m.sz(1, 1), cplx(-0.5, 0.0));
}

TEST(SpinMatrices, BasisIsMDescending) {
  const SpinSystem s(10);
  const auto m = spin_matrices(s);
  for (int i = 0; i < s.dim(); ++i) EXPECT_DOUBLE_EQ(std::real(m.sz(i, i)), 5.0 - i);
  // S+ raises M, so it sits above the diagonal.
  EXPECT_NEAR(std::real(m.s_plus(0, 1)), std::sqrt(10.0), 1e-15);
}

class SpinAlgebra : public ::testing::TestWithParam<int> {};

TEST_P(SpinAlgebra, CommutatorsAndCasimir) {
  const SpinSystem s(GetParam());
  const auto m = spin_matrices(s);
  const cplx i(0.0, 1.0);
  EXPECT_LT(max_abs_diff(commutator(m.sx, m.sy), i * m.sz), 1e-12);
  EXPECT_LT(max_abs_diff(commutator(m.sy, m.sz), i * m.sx), 1e-12);
  EXPECT_LT(max_abs_diff(commutator(m.sz, m.sx), i * m.sy), 1e-12);
  const CMatrix s2 = m.sx * m.sx + m.sy * m.sy + m.sz * m.sz;
  EXPECT_LT(max_abs_diff(s2, s.casimir() * CMatrix::identity(s.dim())), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(TwoS, SpinAlgebra, ::testing::Values(1, 2, 3, 4, 7, 10, 19, 20));

TEST(Stevens, O40ForSpinTwoMatchesHandValue) {
  const auto o = stevens_o4(SpinSystem(4), 0).matrix();
  const double expected[] = {12, -48, 72, -48, 12};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(std::real(o(i, i)), expected[i], 1e-12);
  EXPECT_LT(max_abs_diff(o, CMatrix::diagonal(std::vector<double>{12, -48, 72, -48, 12})), 1e-12);
}

TEST(Stevens, O44ForSpinTwoCouplesPlusAndMinusTwo) {
  // <2|S+^4|-2> = 2 * sqrt(6) * sqrt(6) * 2 = 24, halved by the definition.
  const auto o = stevens_o4(SpinSystem(4), 4).matrix();
  EXPECT_NEAR(std::real(o(0, 4)), 12.0, 1e-12);
  EXPECT_NEAR(std::real(o(4, 0)), 12.0, 1e-12);
  double off = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (!((i == 0 && j == 4) || (i == 4 && j == 0))) off = std::max(off, std::abs(o(i, j)));
  EXPECT_EQ(off, 0.0);
}

TEST(Stevens, VanishForSpinsTooSmall) {
  // Fourth-order operators are identically zero for S < 2.
  for (int two_s : {1, 2, 3})
    for (int k : {0, 2, 3, 4}) EXPECT_LT(stevens_o4(SpinSystem(two_s), k).matrix().max_abs(), 1e-12);
}

TEST(Stevens, AreTracelessAndHermitian) {
  for (int two_s : {4, 5, 10, 19})
    for (int k : {0, 2, 3, 4}) {
      const auto o = stevens_o4(SpinSystem(two_s), k).matrix();
      EXPECT_NEAR(std::abs(o.trace()), 0.0, 1e-9) << "two_s=" << two_s << " k=" << k;
      EXPECT_LT(o.hermiticity_defect(), 1e-12);
    }
}

TEST(Stevens, SelectionRules) {
  // O4^k connects M and M +/- k only.
  const SpinSystem s(10);
  for (int k : {2, 3, 4}) {
    const auto o = stevens_o4(s, k).matrix();
    for (int i = 0; i < s.dim(); ++i)
      for (int j = 0; j < s.dim(); ++j)
        if (std::abs(i - j) != k) {
          EXPECT_EQ(std::abs(o(i, j)), 0.0) << k << " " << i << " " << j;
        }
  }
}

TEST(Stevens, RejectsUnsupportedK) {
  EXPECT_THROW(stevens_o4(SpinSystem(10), 1), InvalidInput);
  EXPECT_THROW(stevens_o4(SpinSystem(10), 5), InvalidInput);
}

TEST(Hamiltonian, UniaxialIsDiagonal) {
  const SpinSystem s(10);
  const auto h = build_hamiltonian(s, {-0.6, 0, 0, 0, 0, 0}, {0, 0, 0.3}).matrix();
  for (int i = 0; i < s.dim(); ++i) {
    const double m = s.m(i);
    EXPECT_NEAR(std::real(h(i, i)), -0.6 * m * m + 2.0 * 0.3 * m, 1e-12);
  }
  EXPECT_LT(max_abs_diff(h, CMatrix::diagonal([&] {
                           std::vector<double> d;
                           for (int i = 0; i < s.dim(); ++i) d.push_back(std::real(h(i, i)));
                           return d;
                         }())),
            1e-15);
}

TEST(Hamiltonian, RhombicTermMatchesLadderForm) {
  // E (Sx^2 - Sy^2) = E/2 (S+^2 + S-^2)
  const SpinSystem s(7);
  const auto m = spin_matrices(s);
  const CMatrix expected = 0.5 * 0.05 * (m.s_plus * m.s_plus + m.s_minus * m.s_minus);
  EXPECT_LT(max_abs_diff(build_hamiltonian(s, {0, 0.05, 0, 0, 0, 0}, {}).matrix(), expected), 1e-14);
}

TEST(Hamiltonian, IsHermitianForRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SpinSystem s(1 + trial % 20);
    const AnisotropyParams a{u(rng), u(rng), 1e-3 * u(rng), 1e-3 * u(rng), 1e-2 * u(rng), 1e-3 * u(rng)};
    const FieldVector f{u(rng), u(rng), u(rng)};
    EXPECT_EQ(build_hamiltonian(s, a, f).matrix().hermiticity_defect(), 0.0);
  }
}

TEST(Hamiltonian, RejectsNonFiniteInput) {
  EXPECT_THROW(build_hamiltonian(SpinSystem(2), {NAN, 0, 0, 0, 0, 0}, {}), InvalidInput);
  EXPECT_THROW(build_hamiltonian(SpinSystem(2), {}, {0, INFINITY, 0}), InvalidInput);
}

TEST(HermitianOperator, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianOperator{m}, InvalidInput);
}
