#include <gtest/gtest.h>

#include <cmath>

#include "cdress/lagrangian.hpp"
#include "support/random.hpp"

using namespace cdress;

namespace {

Tractor6 randomTractor(testsupport::Gen& g) {
  Tractor6 v;
  for (int i = 0; i < 6; ++i) v(i) = g.uniform(-1, 1);
  return v;
}

// <phi, phi> written out term by term.
double normOracle(const Tractor6& v) {
  return -2 * v(0) * v(5) + v(1) * v(1) - v(2) * v(2) - v(3) * v(3) - v(4) * v(4);
}

template <int N>
FieldSet<N> scenarioFields(testsupport::Gen& g, bool normal) {
  CartanConnection<N> w;
  if (normal) {
    std::array<std::array<Expr, 4>, 4> h;
    for (auto& row : h)
      for (auto& x : row) x = randomPolynomial(g.engine(), 3, 1.0);
    w = buildNormalConnection(perturbedTetrad<N>(h, 0.1));
  } else {
    w = connectionFromExprs<N>(ConnectionExprs::random(g.engine(), 2, 0.4));
  }
  // sigma near 1 and rho negative keep <phi, phi> = l eta l - 2 rho sigma positive.
  std::array<Expr, 6> t;
  t[0] = randomPolynomial(g.engine(), 2, 0.1, -0.8);
  for (int i = 1; i < 5; ++i) t[i] = randomPolynomial(g.engine(), 2, 0.2);
  t[5] = randomPolynomial(g.engine(), 2, 0.1, 1.0);
  std::array<std::pair<Expr, Expr>, 4> s;
  for (auto& e : s) e = {randomPolynomial(g.engine(), 2, 1.0), randomPolynomial(g.engine(), 2, 1.0)};
  return FieldSet<N>(Stage::Bare, w, tractorFromExprs<N>(t), twistorFromExprs<N>(s));
}

}  // namespace

TEST(Lagrangian, PotentialMatchesBilinearOracle) {
  const LagrangianParams params{-1.3, 0.7};
  EXPECT_EQ(potential(Tractor6::Zero(), params), 0.0);
  testsupport::Gen g(401);
  for (int i = 0; i < 50; ++i) {
    const Tractor6 v = randomTractor(g);
    const double t = normOracle(v);
    EXPECT_NEAR(tractorNorm(v), t, 1e-15);
    EXPECT_NEAR(potential(v, params), -1.3 * t + 0.7 * t * t, 1e-14);
  }
}

TEST(Lagrangian, PotentialMinimumSitsOnTheShell) {
  const LagrangianParams params{-2.0, 1.0};
  const auto r = vevMass(params);
  EXPECT_NEAR(potential(r.representative, params), r.minimumValue, 1e-15);
  EXPECT_NEAR(tractorNorm(r.representative), r.shell, 1e-15);
  // Move along t by scaling rho.
  for (double dt : {-1e-3, 1e-3}) {
    Tractor6 v = r.representative;
    v(0) -= dt / 2;
    EXPECT_NEAR(tractorNorm(v), r.shell + dt, 1e-14);
    EXPECT_GT(potential(v, params), potential(r.representative, params));
  }
}

TEST(Lagrangian, DifferentialMatchesFiniteDifferences) {
  const LagrangianParams params{0.8, 1.7};
  testsupport::Gen g(402);
  EXPECT_EQ(potentialDifferential(Tractor6::Zero(), params), (Eigen::Matrix<double, 1, 6>::Zero()));
  for (int i = 0; i < 20; ++i) {
    const Tractor6 v = randomTractor(g);
    const auto dv = potentialDifferential(v, params);
    for (int k = 0; k < 6; ++k) {
      Tractor6 a = v, b = v;
      a(k) += 1e-5;
      b(k) -= 1e-5;
      EXPECT_NEAR(dv(k), (potential(a, params) - potential(b, params)) / 2e-5, 1e-6);
    }
  }
}

TEST(Lagrangian, DifferentialVanishesOnTheShell) {
  testsupport::Gen g(403);
  for (const LagrangianParams params : {LagrangianParams{-2, 1}, LagrangianParams{-1, 2}, LagrangianParams{-0.3, 0.9}}) {
    const auto r = vevMass(params);
    EXPECT_LE(potentialDifferential(r.representative, params).cwiseAbs().maxCoeff(), 1e-9);
    // Any other point of the shell: pick l, sigma and solve for rho.
    Tractor6 v = randomTractor(g);
    v(5) = 1.0 + std::abs(v(5));
    v(0) = (v(1) * v(1) - v(2) * v(2) - v(3) * v(3) - v(4) * v(4) - r.shell) / (2 * v(5));
    EXPECT_LE(potentialDifferential(v, params).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Lagrangian, VevMass) {
  const auto a = vevMass({-2, 1});
  EXPECT_NEAR(a.shell, 1.0, 1e-15);
  ASSERT_TRUE(a.mass.has_value());
  EXPECT_NEAR(*a.mass, 1.0, 1e-12);
  const auto b = vevMass({-1, 2});
  ASSERT_TRUE(b.mass.has_value());
  EXPECT_NEAR(*b.mass, 0.5, 1e-12);
  const auto c = vevMass({1, 1});
  EXPECT_NEAR(c.shell, -0.5, 1e-15);
  EXPECT_FALSE(c.mass.has_value());
  EXPECT_THROW(vevMass({-1, 0}), std::invalid_argument);
  EXPECT_THROW(vevMass({-1, -2}), std::invalid_argument);
}

TEST(Lagrangian, YukawaAtTheVevIsAMassTerm) {
  testsupport::Gen g(404);
  const ChartPoint p{{0, 0, 0, 0}};
  for (const LagrangianParams params : {LagrangianParams{-2, 1}, LagrangianParams{-1, 2}}) {
    const auto r = vevMass(params);
    Eigen::Vector4cd psi;
    for (int i = 0; i < 4; ++i) psi(i) = cplx(g.uniform(-1, 1), g.uniform(-1, 1));
    const double pairing = (diracAdjoint(psi) * psi)(0, 0).real();
    EXPECT_NEAR(yukawaTerm(r.representative, psi, 1.0, p), -*r.mass * pairing, 1e-9);
  }
  Tractor6 timelike = Tractor6::Zero();
  timelike(0) = 1;
  timelike(5) = 1;
  EXPECT_THROW(yukawaTerm(timelike, Eigen::Vector4cd::Ones(), 1.0, p), DegenerateField);
}

TEST(Lagrangian, FlatTrivialFieldsHaveZeroDensity) {
  std::array<Expr, 6> t;
  for (auto& e : t) e = Expr::constant(0.0);
  t[5] = Expr::constant(1.0);
  const FieldSet<5> f(Stage::Bare, buildNormalConnection(minkowskiTetrad<5>()), tractorFromExprs<5>(t),
                      [](const ChartPoint&) { return zeros<CJet<5>>(4, 1); });
  const auto s = lagrangianStages(f, LagrangianParams{-2, 1}, ChartPoint{{0.1, 0.2, -0.3, 0.4}});
  for (const auto& d : {s.bare, s.k1, s.weyl}) {
    EXPECT_EQ(d.total(), 0.0);
    EXPECT_EQ(d.dirac, cplx(0));
  }
}

TEST(Lagrangian, StagesAgreeForGenericFields) {
  testsupport::Gen g(405);
  const auto f = scenarioFields<5>(g, false);
  const LagrangianParams params{-2, 1};
  for (int i = 0; i < 5; ++i) {
    const auto s = lagrangianStages(f, params, ChartPoint{g.point(0.3)});
    EXPECT_LE(s.maxStageDelta(), 1e-7);
    EXPECT_GT(std::abs(s.bare.yangMills), 1e-6);
    EXPECT_GT(std::abs(s.bare.kinetic), 1e-6);
    EXPECT_GT(std::abs(s.bare.dirac), 1e-6);
    EXPECT_GT(std::abs(s.bare.yukawa), 1e-6);
    // Individual terms are invariant too.
    EXPECT_NEAR(s.bare.yangMills, s.weyl.yangMills, 1e-7);
    EXPECT_NEAR(s.bare.kinetic, s.weyl.kinetic, 1e-7);
  }
}

TEST(Lagrangian, StagesAgreeForNormalConnection) {
  testsupport::Gen g(406);
  const auto f = scenarioFields<5>(g, true);
  for (int i = 0; i < 3; ++i) {
    const auto s = lagrangianStages(f, LagrangianParams{-1, 2}, ChartPoint{g.point(0.3)});
    EXPECT_LE(s.maxStageDelta(), 1e-7);
  }
}

TEST(Lagrangian, BareDensityIsGaugeInvariant) {
  testsupport::Gen g(407);
  const auto f = scenarioFields<5>(g, false);
  const LagrangianParams params{-2, 1};
  const auto gp = GaugeParams::random(g.engine(), 0.2);
  for (Subgroup sub : {Subgroup::K1, Subgroup::Weyl, Subgroup::Lorentz, Subgroup::General}) {
    const auto moved = transport(f, gaugeFor<5>(sub, gp));
    const ChartPoint p{g.point(0.3)};
    const auto a = lagrangianStages(f, params, p).bare, b = lagrangianStages(moved, params, p).bare;
    EXPECT_NEAR(a.total(), b.total(), 1e-7) << subgroupName(sub);
    EXPECT_NEAR(a.dirac.imag(), b.dirac.imag(), 1e-7) << subgroupName(sub);
  }
}

TEST(Lagrangian, YangMillsOfNormalConnectionReducesToWeylBlock) {
  const Expr omega = Expr::parse("exp(0.3*x0 - 0.2*x1*x2 + 0.1*x3^2)");
  const auto w = buildNormalConnection(conformalTetrad<4>(omega));
  const ChartPoint p{{0.2, 0.1, -0.3, 0.25}};
  const auto curv = curvature(w, p);
  const auto h = MetricData<RJet<4>>::from(inducedMetric(w, p));
  EXPECT_LE(std::abs(yangMillsTerm(curv.omega, h)), 1e-7);

  testsupport::Gen g(408);
  std::array<std::array<Expr, 4>, 4> hx;
  for (auto& row : hx)
    for (auto& x : row) x = randomPolynomial(g.engine(), 3, 1.0);
  const auto wn = buildNormalConnection(perturbedTetrad<4>(hx, 0.15));
  const auto cn = curvature(wn, p);
  const auto hn = MetricData<RJet<4>>::from(inducedMetric(wn, p));
  const double ym = yangMillsTerm(cn.omega, hn), weylPart = yangMillsTerm(cn.W(), hn);
  EXPECT_GT(std::abs(weylPart), 1e-6);
  EXPECT_NEAR(ym, weylPart, 1e-10);
}
