#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "smm/semiclassical.hpp"

using namespace smm;

namespace {

constexpr double kPi = std::numbers::pi;

const AnisotropyParams kFe4{-0.636, 0.0446, 2.3e-5, 0.0, 0.0, 0.0};

struct Draw {
  SpinSystem s{10};
  AnisotropyParams a;
  FieldVector f;
  double theta = 0.0;
  double phi = 0.0;
};

Draw random_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  static constexpr int kTwoS[] = {4, 10, 20, 19};
  Draw d;
  d.s = SpinSystem(kTwoS[rng() % 4]);
  d.a = {u(rng), 0.1 * u(rng), 1e-3 * u(rng), 1e-3 * u(rng), 1e-2 * u(rng), 1e-3 * u(rng)};
  d.f = {2.0 * u(rng), 2.0 * u(rng), 2.0 * u(rng)};
  d.theta = kPi * (0.5 + 0.5 * u(rng));
  d.phi = kPi * (1.0 + u(rng));
  return d;
}

void expect_critical_invariants(const ReducedParams& rp, const std::vector<CriticalPoint>& pts) {
  const double scale = rp.scale();
  const ScanOptions opt;
  for (const auto& p : pts) {
    EXPECT_LE(std::abs(potential_reduced_derivative(p.theta, rp, Branch::Plus, 1)), 1e-10 * scale);
    EXPECT_GE(p.theta, 0.0);
    EXPECT_LT(p.theta, kTwoPi);
    const double d2 = potential_reduced_derivative(p.theta, rp, Branch::Plus, 2);
    switch (p.kind) {
      case CriticalKind::Minimum: EXPECT_GT(d2, opt.degeneracy_tolerance * scale); break;
      case CriticalKind::Maximum: EXPECT_LT(d2, -opt.degeneracy_tolerance * scale); break;
      case CriticalKind::Inflection: break;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Reduction

TEST(ReduceParams, Fe4CompoundThree) {
  const auto rp = reduce_params(SpinSystem(10), kFe4, {});
  EXPECT_NEAR(rp.r3, -0.679, 5e-4);
  EXPECT_NEAR(rp.r4, 8.05e-4, 1e-15);
  EXPECT_EQ(rp.r1, 0.0);
  EXPECT_EQ(rp.r2, 0.0);
  EXPECT_EQ(rp.r5, 0.0);
}

TEST(ReduceParams, ZeroInputsGiveZeroParameters) {
  const auto rp = reduce_params(SpinSystem(10), {}, {});
  EXPECT_EQ(rp.r3, 0.0);
  EXPECT_EQ(rp.r4, 0.0);
  EXPECT_EQ(rp.offset, 0.0);
}

TEST(ReduceParams, FieldAndTrigonalTermsPassThrough) {
  const auto rp = reduce_params(SpinSystem(10), {0, 0, 0, 0, 0.01, 0}, {0.3, 0.0, -1.2});
  EXPECT_EQ(rp.r1, 0.3);
  EXPECT_EQ(rp.r2, -1.2);
  EXPECT_EQ(rp.r5, 0.01);
}

TEST(ReduceParams, RejectsFieldOutOfPlane) {
  EXPECT_THROW(reduce_params(SpinSystem(10), kFe4, {0.0, 0.1, 0.0}), InvalidInput);
}

TEST(ReduceParams, OffsetMakesReducedEqualAngular) {
  // The reduction is exact on the phi = 0 and phi = pi great circle for every B4^k.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto d = random_draw(rng);
    d.f.by = 0.0;
    const auto rp = reduce_params(d.s, d.a, d.f);
    EXPECT_NEAR(potential_reduced(d.theta, rp, Branch::Plus), potential_angular(d.theta, 0.0, d.s, d.a, d.f),
                1e-12 * (1.0 + std::abs(rp.offset)));
    EXPECT_NEAR(potential_reduced(d.theta, rp, Branch::Minus), potential_angular(d.theta, kPi, d.s, d.a, d.f),
                1e-12 * (1.0 + std::abs(rp.offset)));
  }
}

// ---------------------------------------------------------------------------
// Closed forms against the coherent-state oracle

TEST(CoherentState, IsNormalizedAndPolarized) {
  const SpinSystem s(10);
  const auto m = spin_matrices(s);
  const auto v = coherent_state(s, kPi / 2, 0.0);
  EXPECT_NEAR(norm2(v), 1.0, 1e-14);
  EXPECT_NEAR(std::real(inner(v, m.sx * v)), 5.0, 1e-12);
  EXPECT_NEAR(std::real(inner(v, m.sy * v)), 0.0, 1e-12);
  const auto w = coherent_state(s, kPi / 2, kPi / 2);
  EXPECT_NEAR(std::real(inner(w, m.sy * w)), 5.0, 1e-12);
}

TEST(CoherentState, PolesAreExtremalStates) {
  const SpinSystem s(19);
  const auto south = coherent_state(s, 0.0, 1.3);
  EXPECT_NEAR(std::abs(south[19]), 1.0, 1e-15);  // |S, -S>, the last row
  const auto north = coherent_state(s, kPi, 0.4);
  EXPECT_NEAR(std::abs(north[0]), 1.0, 1e-12);
}

TEST(CoherentExpectation, ThetaZeroIsBottomCornerEntry) {
  const SpinSystem s(10);
  const FieldVector f{0.2, -0.1, 0.7};
  const double corner = std::real(build_hamiltonian(s, kFe4, f).matrix()(10, 10));
  EXPECT_NEAR(coherent_expectation(0.0, 0.0, s, kFe4, f), corner, 1e-12);
}

TEST(PotentialAngular, ZeemanOnlyAtThetaZero) {
  const SpinSystem s(10);
  EXPECT_NEAR(potential_angular(0.0, 0.0, s, {}, {0, 0, 0.8}), -2.0 * 5.0 * 0.8, 1e-14);
}

TEST(PotentialAngular, TermByTermAtEquator) {
  // theta = pi/2, phi = 0, zero field, S = 5:
  //   D/4 S(2S-1) cos(pi) + E/2 S(2S-1) + D/4 S(2S+1) + S(2S-1)(2S-2)(2S-3)/8 * B40/8 * (35 - 20 + 9)
  const double s = 5.0;
  const double expected = -0.636 / 4 * s * 9 * -1.0 + 0.0446 / 2 * s * 9 + -0.636 / 4 * s * 11 +
                          s * 9 * 8 * 7 / 8.0 * 2.3e-5 / 8.0 * 24.0;
  EXPECT_NEAR(potential_angular(kPi / 2, 0.0, SpinSystem(10), kFe4, {}), expected, 1e-12);
}

TEST(PotentialAngular, MatchesCoherentOracle) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_draw(rng);
    const double v = potential_angular(d.theta, d.phi, d.s, d.a, d.f);
    EXPECT_NEAR(v, coherent_expectation(d.theta, d.phi, d.s, d.a, d.f), 1e-9 * (1.0 + std::abs(v)))
        << "trial " << trial;
  }
}

TEST(PotentialCartesian, MatchesCoherentOracleOnBothHemispheres) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_draw(rng);
    const double x = std::sin(d.theta) * std::cos(d.phi);
    const double y = std::sin(d.theta) * std::sin(d.phi);
    const int zs = std::cos(d.theta) >= 0.0 ? 1 : -1;
    const double v = potential_cartesian(x, y, zs, d.s, d.a, d.f);
    EXPECT_NEAR(v, coherent_expectation(d.theta, d.phi, d.s, d.a, d.f), 1e-9 * (1.0 + std::abs(v)));
  }
}

TEST(PotentialCartesian, PoleAndBoundary) {
  const SpinSystem s(10);
  const FieldVector f{0.0, 0.0, 0.5};
  // x = y = 0: Zeeman z-term plus constants; the hemispheres differ only through it.
  const double up = potential_cartesian(0, 0, 1, s, kFe4, f);
  const double down = potential_cartesian(0, 0, -1, s, kFe4, f);
  EXPECT_NEAR(up - down, -2.0 * 2.0 * 5.0 * 0.5, 1e-12);
  // On the equator the square-root terms vanish, so z_sign is irrelevant.
  const AnisotropyParams trig{-0.6, 0.0, 0.0, 0.0, 0.01, 0.0};
  EXPECT_EQ(potential_cartesian(1.0, 0.0, 1, s, trig, f), potential_cartesian(1.0, 0.0, -1, s, trig, f));
  EXPECT_THROW(potential_cartesian(0.9, 0.9, 1, s, kFe4, f), InvalidInput);
  EXPECT_THROW(potential_cartesian(0.1, 0.1, 0, s, kFe4, f), InvalidInput);
}

// ---------------------------------------------------------------------------
// Reduced potential

TEST(PotentialReduced, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rp = ReducedParams::direct(SpinSystem(10), 2 * u(rng), 2 * u(rng), u(rng), 1e-3 * u(rng), 1e-2 * u(rng));
    const Branch br = trial % 2 ? Branch::Plus : Branch::Minus;
    const double t = kPi * (1.0 + u(rng));
    auto v = [&](double x) { return potential_reduced(x, rp, br); };
    auto v1 = [&](double x) { return potential_reduced_derivative(x, rp, br, 1); };
    const double fd1 = (v(t + h) - v(t - h)) / (2 * h);
    const double fd2 = (v1(t + h) - v1(t - h)) / (2 * h);
    const double d1 = v1(t);
    const double d2 = potential_reduced_derivative(t, rp, br, 2);
    EXPECT_NEAR(d1, fd1, 1e-6 * (1.0 + std::abs(d1)));
    EXPECT_NEAR(d2, fd2, 1e-6 * (1.0 + std::abs(d2)));
  }
}

TEST(PotentialReduced, BranchSymmetryWithoutTransverseTerms) {
  const auto rp = ReducedParams::direct(SpinSystem(10), 0.0, 0.7, -0.679, 8e-4, 0.0);
  for (double t = 0.0; t < kTwoPi; t += 0.01)
    EXPECT_EQ(potential_reduced(t, rp, Branch::Plus), potential_reduced(t, rp, Branch::Minus));
}

TEST(PotentialReduced, FieldReversalSymmetry) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rp = ReducedParams::direct(SpinSystem(10), 2 * u(rng), 2 * u(rng), u(rng), 1e-3 * u(rng), 0.0);
    auto flipped = rp;
    flipped.r2 = -rp.r2;
    const double t = kPi * (1.0 + u(rng));
    for (Branch br : {Branch::Plus, Branch::Minus})
      EXPECT_NEAR(potential_reduced(t, rp, br), potential_reduced(kPi - t, flipped, br), 1e-12);
  }
}

TEST(PotentialReduced, CompoundThreeBranchesCoincideAtZeroField) {
  const auto rp = reduce_params(SpinSystem(10), kFe4, {});
  for (double t = 0.0; t <= kPi; t += 0.05)
    EXPECT_EQ(potential_reduced(t, rp, Branch::Plus), potential_reduced(t, rp, Branch::Minus));
}

// ---------------------------------------------------------------------------
// Critical points and landscapes

TEST(CriticalPoints, SymmetricDoubleWell) {
  const auto rp = ReducedParams::direct(SpinSystem(10), 0, 0, -1.0, 0, 0);
  const auto scan = critical_points(rp, Branch::Plus);
  ASSERT_EQ(scan.points.size(), 4u);
  const double expected[] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
  const CriticalKind kinds[] = {CriticalKind::Minimum, CriticalKind::Maximum, CriticalKind::Minimum,
                                CriticalKind::Maximum};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(scan.points[i].theta, expected[i], 1e-10);
    EXPECT_EQ(scan.points[i].kind, kinds[i]);
  }
  expect_critical_invariants(rp, scan.points);
}

TEST(CriticalPoints, FlatPotentialIsFlagged) {
  const auto scan = critical_points(ReducedParams::direct(SpinSystem(10), 0, 0, 0, 0, 0), Branch::Plus);
  EXPECT_TRUE(scan.flat);
  EXPECT_TRUE(scan.points.empty());
  EXPECT_TRUE(landscape(ReducedParams::direct(SpinSystem(10), 0, 0, 0, 0, 0)).flat);
}

TEST(CriticalPoints, InvariantsOnRandomDraws) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rp = ReducedParams::direct(SpinSystem(1 + static_cast<int>(rng() % 20)), 3 * u(rng), 4 * u(rng),
                                          u(rng), 2e-3 * u(rng), 2e-2 * u(rng));
    const auto land = landscape(rp);
    ASSERT_FALSE(land.flat);
    expect_critical_invariants(rp, land.points);
    EXPECT_GE(land.n_minima, 1);
    EXPECT_GE(land.n_maxima, 1);
    // A smooth function on the circle alternates minima and maxima.
    EXPECT_EQ(land.n_minima, land.n_maxima) << "trial " << trial;
    EXPECT_LE(land.points.size(), 8u);
    ASSERT_TRUE(land.global_minimum);
    for (const auto& m : land.minima()) EXPECT_LE(land.global_minimum->value, m.value);
  }
}

TEST(Landscape, SymmetricDoubleWellReportsTie) {
  const auto land = landscape(ReducedParams::direct(SpinSystem(10), 0, 0, -0.679, 0, 0));
  EXPECT_EQ(land.n_minima, 2);
  EXPECT_TRUE(land.tied_global_minimum());
}

TEST(Landscape, CompoundThreeUnderLongitudinalField) {
  auto rp = reduce_params(SpinSystem(10), kFe4, {0.0, 0.0, 1.0});
  auto land = landscape(rp);
  EXPECT_EQ(land.n_minima, 2);
  EXPECT_FALSE(land.tied_global_minimum());
  // bz > 0 favours theta = 0 (the |S,-S> end of the Zeeman term -gS bz cos theta).
  EXPECT_NEAR(polar_angle(land.global_minimum->theta), 0.0, 1e-9);

  rp.r2 = 5.0;
  land = landscape(rp);
  EXPECT_EQ(land.n_minima, 1);
}

TEST(Landscape, SecondWellDisappearsBeyondBifurcation) {
  auto rp = ReducedParams::direct(SpinSystem(10), 0, 0, -0.679, 7.6e-4, 0.0);
  int prev = 2;
  int changes = 0;
  for (double bz = 0.0; bz <= 5.0; bz += 0.05) {
    rp.r2 = bz;
    const int n = landscape(rp).n_minima;
    if (n != prev) ++changes;
    prev = n;
  }
  EXPECT_EQ(prev, 1);
  EXPECT_EQ(changes, 1);
}

TEST(Landscape, BranchesAgreeWithFullCircle) {
  // theta in (pi, 2pi) of the + branch is the - branch at polar angle 2pi - theta.
  const auto rp = ReducedParams::direct(SpinSystem(10), 1.3, 0.4, -0.679, 7.6e-4, 0.01);
  for (const auto& p : landscape(rp).points) {
    const double v = potential_reduced(polar_angle(p.theta), rp, branch_of(p.theta));
    EXPECT_NEAR(v, p.value, 1e-12);
  }
}
