#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "smm/eigen.hpp"
#include "smm/spin.hpp"

using namespace smm;

namespace {

CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = cplx(g(rng), g(rng));
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

Eigen::MatrixXcd to_eigen(const CMatrix& a) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

}  // namespace

TEST(Jacobi, MatchesEigenOracleOnRandomMatrices) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 23;
    const auto a = random_hermitian(n, rng);
    const auto spec = eigh(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(a));
    ASSERT_EQ(es.info(), Eigen::Success);
    const double norm = a.frobenius_norm();
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(spec.eigenvalues[k], es.eigenvalues()(k), 1e-12 * norm);
  }
}

TEST(Jacobi, MatchesEigenOracleOnSpinHamiltonians) {
  const AnisotropyParams a{-0.636, 0.0446, 2.3e-5, 0.0, 0.01, 0.0};
  for (int two_s : {1, 4, 10, 19, 20}) {
    const auto h = build_hamiltonian(SpinSystem(two_s), a, {0.7, 0.2, -0.4});
    const auto spec = eigh(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(h.matrix()));
    for (std::size_t k = 0; k < spec.dim(); ++k) EXPECT_NEAR(spec.eigenvalues[k], es.eigenvalues()(k), 1e-11);
    // Ground-state projector is convention free.
    const auto v = spec.vector(0);
    for (std::size_t i = 0; i < spec.dim(); ++i)
      EXPECT_NEAR(std::norm(v[i]), std::norm(es.eigenvectors()(i, 0)), 1e-9);
  }
}

class JacobiProperties : public ::testing::TestWithParam<int> {};

TEST_P(JacobiProperties, ResidualOrthonormalityTrace) {
  std::mt19937_64 rng(static_cast<unsigned>(GetParam()) * 977u);
  const std::size_t n = static_cast<std::size_t>(GetParam());
  const auto a = random_hermitian(n, rng, 3.0);
  const auto spec = eigh(a);
  const double norm = a.frobenius_norm();
  double trace = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = spec.vector(k);
    const auto av = a * v;
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::norm(av[i] - spec.eigenvalues[k] * v[i]);
    EXPECT_LE(std::sqrt(res), 1e-10 * (1.0 + a.max_abs()));
    for (std::size_t l = 0; l < n; ++l) {
      const cplx d = inner(v, spec.vector(l));
      EXPECT_NEAR(std::abs(d - (k == l ? 1.0 : 0.0)), 0.0, 1e-10);
    }
    trace += spec.eigenvalues[k];
    if (k > 0) {
      EXPECT_LE(spec.eigenvalues[k - 1], spec.eigenvalues[k]);
    }
  }
  EXPECT_NEAR(trace, std::real(a.trace()), 1e-9 * norm);
}

INSTANTIATE_TEST_SUITE_P(Dims, JacobiProperties, ::testing::Range(1, 25));

TEST(Jacobi, PhaseRuleMakesLargestComponentRealPositive) {
  std::mt19937_64 rng(5);
  const auto spec = eigh(random_hermitian(9, rng));
  for (std::size_t k = 0; k < 9; ++k) {
    const auto v = spec.vector(k);
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[best])) best = i;
    EXPECT_EQ(std::imag(v[best]), 0.0);
    EXPECT_GT(std::real(v[best]), 0.0);
  }
}

TEST(Jacobi, IsDeterministic) {
  std::mt19937_64 rng(11);
  const auto a = random_hermitian(12, rng);
  const auto s1 = eigh(a);
  const auto s2 = eigh(a);
  EXPECT_EQ(s1.eigenvalues, s2.eigenvalues);
  EXPECT_TRUE(s1.eigenvectors == s2.eigenvectors);
}

TEST(Jacobi, DiagonalInputIsSortedUnchanged) {
  const auto spec = eigh(CMatrix::diagonal(std::vector<double>{3.0, -1.0, 2.0}));
  EXPECT_EQ(spec.eigenvalues, (std::vector<double>{-1.0, 2.0, 3.0}));
  EXPECT_EQ(spec.eigenvectors(1, 0), cplx(1.0));
}

TEST(Jacobi, RejectsNonHermitian) {
  CMatrix a(3, 3);
  a(0, 2) = cplx(1.0, 1.0);
  EXPECT_THROW(eigh(a), InvalidInput);
  EXPECT_THROW(eigh(CMatrix(2, 3)), InvalidInput);
}

TEST(Jacobi, ReportsExhaustedBudget) {
  std::mt19937_64 rng(3);
  JacobiOptions opt;
  opt.max_sweeps = 0;
  try {
    eigh(random_hermitian(6, rng), opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension 6"), std::string::npos);
  }
}

TEST(GroundState, ReportsGap) {
  const auto g = ground_state(eigh(CMatrix::diagonal(std::vector<double>{0.5, -0.25, 2.0})));
  EXPECT_EQ(g.energy, -0.25);
  EXPECT_EQ(g.gap, 0.75);
  EXPECT_THROW(ground_state(eigh(CMatrix::diagonal(std::vector<double>{1.0}))), InvalidInput);
}

TEST(Jacobi, ReconstructionAndFrobeniusIdentity) {
  std::mt19937_64 rng(99);
  const auto a = random_hermitian(11, rng);
  const auto spec = eigh(a);
  CMatrix lam = CMatrix::diagonal(spec.eigenvalues);
  const CMatrix rec = spec.eigenvectors * lam * spec.eigenvectors.adjoint();
  EXPECT_LE(max_abs_diff(rec, a), 1e-9 * a.max_abs());
  double sum2 = 0.0;
  for (double l : spec.eigenvalues) sum2 += l * l;
  const double f = a.frobenius_norm();
  EXPECT_NEAR(sum2, f * f, 1e-9 * f * f);
}

TEST(Jacobi, SpinOneToyHamiltonian) {
  // D Sz^2 + g bz Sz with D = 1, bz = 0.5: levels M = +1 -> 2, M = 0 -> 0, M = -1 -> 0.
  const auto spec = eigh(build_hamiltonian(SpinSystem(2), {1.0, 0, 0, 0, 0, 0}, {0, 0, 0.5}));
  EXPECT_NEAR(spec.eigenvalues[0], 0.0, 1e-14);
  EXPECT_NEAR(spec.eigenvalues[1], 0.0, 1e-14);
  EXPECT_NEAR(spec.eigenvalues[2], 2.0, 1e-14);
}

TEST(GroundState, ZeroFieldFe4IsQuasiDoublet) {
  const auto g = ground_state(
      eigh(build_hamiltonian(SpinSystem(10), {-0.636, 0.0446, 2.3e-5, 0, 0, 0}, {})));
  EXPECT_GE(g.gap, 0.0);
  EXPECT_LT(g.gap, 1e-3);
}
