#include <gtest/gtest.h>

#include <cmath>

#include "cdress/dressing.hpp"
#include "support/random.hpp"

using namespace cdress;

namespace {

template <int N>
FieldSet<N> randomFields(testsupport::Gen& g, double amplitude = 0.4) {
  const ConnectionExprs c = ConnectionExprs::random(g.engine(), 2, amplitude);
  std::array<Expr, 6> t;
  for (int i = 0; i < 6; ++i) t[i] = randomPolynomial(g.engine(), 2, 0.5, i == 5 ? 1.0 : 0.0);
  std::array<std::pair<Expr, Expr>, 4> s;
  for (auto& e : s) e = {randomPolynomial(g.engine(), 2, 1.0), randomPolynomial(g.engine(), 2, 1.0)};
  return {Stage::Bare, connectionFromExprs<N>(c), tractorFromExprs<N>(t), twistorFromExprs<N>(s)};
}

std::vector<ChartPoint> samplePoints(testsupport::Gen& g, int n, double radius = 0.3) {
  std::vector<ChartPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back(ChartPoint{g.point(radius)});
  return pts;
}

}  // namespace

TEST(Dressing, ZeroWeylBlockGivesIdentityU1) {
  ConnectionExprs c;
  for (int a = 0; a < 4; ++a)
    for (int mu = 0; mu < 4; ++mu) c.e[a][mu] = Expr::constant(a == mu ? 1.0 : 0.0);
  const auto w = connectionFromExprs<3>(c);
  const ChartPoint p{{0.1, 0.2, -0.1, 0.3}};
  EXPECT_EQ(valuesOf(extractU1(w).u(p).real), Mat<double>::Identity(6, 6));

  c.a[0] = Expr::constant(1.0);
  const auto w2 = connectionFromExprs<3>(c);
  EXPECT_EQ(valuesOf(extractU1(w2).q(p)), (Mat<double>(1, 4) << 1, 0, 0, 0).finished());
}

TEST(Dressing, U1TransformsAsDressingField) {
  testsupport::Gen g(201);
  const auto f = randomFields<3>(g);
  for (int trial = 0; trial < 5; ++trial) {
    const auto gamma = boostGauge<3>(GaugeParams::random(g.engine()).boost);
    const auto u = extractU1(f.connection());
    const auto uMoved = extractU1(gaugeTransform(f.connection(), gamma));
    const ChartPoint p{g.point(0.3)};
    const auto expected = gamma(p).inverse() * u.u(p);
    EXPECT_LE(maxAbsDifference(uMoved.u(p).real, expected.real), 1e-9);
    EXPECT_LE(maxAbsDifference(uMoved.u(p).complex, expected.complex), 1e-9);
  }
}

TEST(Dressing, K1DressedConnectionHasNoWeylBlockAndKeepsSoldering) {
  testsupport::Gen g(202);
  const auto f = randomFields<3>(g);
  const auto k1 = dressK1(f);
  for (const auto& p : samplePoints(g, 5)) {
    const auto b1 = k1.connection().blocks(p);
    EXPECT_LE(maxAbsValue(b1.a), 1e-9);
    EXPECT_LE(maxAbsDifference(b1.theta, f.connection().blocks(p).theta), 1e-15);
    EXPECT_LE(so24Residual(k1.connection()(p)), 1e-12);
  }
}

TEST(Dressing, K1DressedFieldsAreK1Invariant) {
  testsupport::Gen g(203);
  const auto f = randomFields<3>(g);
  const auto k1 = dressK1(f);
  const auto pts = samplePoints(g, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto gamma = boostGauge<3>(GaugeParams::random(g.engine()).boost);
    const auto moved = dressK1(transport(f, gamma));
    for (const auto& p : pts) EXPECT_LE(fieldDifference(moved, k1, p), 1e-8);
  }
}

TEST(Dressing, TrivialInputsAreUnchangedByDressing) {
  testsupport::Gen g(204);
  auto f = randomFields<3>(g);
  ConnectionExprs c = ConnectionExprs::random(g.engine(), 2, 0.4);
  for (auto& x : c.a) x = Expr::constant(0.0);
  f = FieldSet<3>(Stage::Bare, connectionFromExprs<3>(c), f.tractor(), f.twistor());
  const auto k1 = dressK1(f);
  for (const auto& p : samplePoints(g, 3)) EXPECT_EQ(fieldDifference(k1, f, p), 0.0);
}

TEST(Dressing, ConstantTwistingParameterGivesWeylMatrix) {
  const auto c = buildTwistingMap<3>(scalarField<3>(Expr::constant(2.5)), minkowskiTetrad<3>());
  const ChartPoint p{{0.3, 0.1, 0.2, -0.4}};
  EXPECT_EQ(valuesOf(c.upsilon(p)), Mat<double>::Zero(1, 4));
  Mat<double> expected = Mat<double>::Identity(6, 6);
  expected(0, 0) = 2.5;
  expected(5, 5) = 1 / 2.5;
  EXPECT_LE((valuesOf(c(p).real) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Dressing, TwistingMapBlockFormAndGroupMembership) {
  testsupport::Gen g(205);
  const auto f = randomFields<3>(g);
  const Expr logZ = randomPolynomial(g.engine(), 2, 0.4);
  const auto c = buildTwistingMap<3>(scalarField<3>(exp(logZ)), f.connection());
  for (const auto& p : samplePoints(g, 5)) {
    const Mat<double> m = valuesOf(c(p).real);
    const Mat<double> Y = valuesOf(c.upsilon(p));
    const double z = std::exp(logZ(p));
    Mat<double> expected = Mat<double>::Identity(6, 6);
    expected(0, 0) = z;
    expected(5, 5) = 1 / z;
    expected.block(0, 1, 1, 4) = Y;
    expected.block(1, 5, 4, 1) = minkowski() * Y.transpose() / z;
    expected(0, 5) = (Y * minkowski() * Y.transpose())(0, 0) / (2 * z);
    EXPECT_LE((m - expected).cwiseAbs().maxCoeff(), 1e-12);
    const GroupElement ge{GroupElement::Kind::General, Matrix6d(m)};
    EXPECT_LE(ge.metricResidual(), 1e-12);
    EXPECT_LE(complexMetricResidual(Matrix4c(valuesOf(c(p).complex))), 1e-12);
    // Upsilon from plain finite differences of z.
    const Mat<double> e = valuesOf(f.connection().tetrad(p));
    Eigen::RowVector4d dz;
    for (int mu = 0; mu < 4; ++mu) {
      ChartPoint a = p, b = p;
      a.x[mu] += 1e-5;
      b.x[mu] -= 1e-5;
      dz(mu) = (std::exp(logZ(a)) - std::exp(logZ(b))) / 2e-5;
    }
    EXPECT_LE((Y - dz * e.inverse() / z).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(Dressing, TwistingMapCompositionLawAndWitness) {
  testsupport::Gen g(206);
  const auto f = randomFields<3>(g);
  const Expr a = randomPolynomial(g.engine(), 2, 0.4), b = randomPolynomial(g.engine(), 2, 0.4);
  const auto cz = buildTwistingMap<3>(scalarField<3>(exp(a)), f.connection());
  const auto czp = buildTwistingMap<3>(scalarField<3>(exp(b)), f.connection());
  const auto czpz = buildTwistingMap<3>(scalarField<3>(exp(a + b)), f.connection());
  const auto zp = weylGauge<3>(b);
  double witness = 0.0;
  for (const auto& p : samplePoints(g, 5)) {
    const auto lhs = czpz(p);
    const auto rhs = czp(p) * zp(p).inverse() * cz(p) * zp(p);
    EXPECT_LE(maxAbsDifference(lhs.real, rhs.real), 1e-9);
    EXPECT_LE(maxAbsDifference(lhs.complex, rhs.complex), 1e-9);
    witness = std::max(witness, maxAbsDifference((czp(p) * cz(p)).real, lhs.real));
  }
  EXPECT_GT(witness, 1e-3);
}

TEST(Dressing, DilatonIsInverseSigma) {
  std::array<Expr, 6> t;
  for (auto& e : t) e = Expr::constant(0.3);
  t[5] = Expr::parse("exp(x0)");
  const auto phi = extractDilaton<3>(tractorFromExprs<3>(t));
  const ChartPoint p{{0.4, 0.1, 0.0, -0.2}};
  const auto j = phi(p);
  const double v = std::exp(-0.4);
  EXPECT_NEAR(j.value(), v, 1e-15);
  EXPECT_NEAR(j.partial({1, 0, 0, 0}), -v, 1e-14);
  EXPECT_NEAR(j.partial({2, 0, 0, 0}), v, 1e-14);
  EXPECT_NEAR(j.partial({1, 1, 0, 0}), 0.0, 1e-15);

  t[5] = Expr::constant(1.0);
  EXPECT_EQ(extractDilaton<3>(tractorFromExprs<3>(t))(p).value(), 1.0);
  t[5] = Expr::parse("x1");
  EXPECT_THROW(extractDilaton<3>(tractorFromExprs<3>(t))(ChartPoint{{0.2, 0, 0.1, 0.1}}), DegenerateField);
}

TEST(Dressing, UnitSigmaAndZeroWeylBlockLeaveConnectionUnchanged) {
  testsupport::Gen g(207);
  auto f = randomFields<4>(g);
  ConnectionExprs c = ConnectionExprs::random(g.engine(), 2, 0.4);
  for (auto& x : c.a) x = Expr::constant(0.0);
  std::array<Expr, 6> t;
  for (int i = 0; i < 6; ++i) t[i] = i == 5 ? Expr::constant(1.0) : randomPolynomial(g.engine(), 2, 0.5);
  f = FieldSet<4>(Stage::Bare, connectionFromExprs<4>(c), tractorFromExprs<4>(t), f.twistor());
  const auto k1 = dressK1(f);
  const auto bs = dressWeyl(k1);
  for (const auto& p : samplePoints(g, 3)) EXPECT_LE(maxAbsDifference(bs.connection()(p), k1.connection()(p)), 1e-15);
}

TEST(Dressing, WeylDressedTractorEndsInExactOne) {
  testsupport::Gen g(208);
  const auto bs = dressWeyl(dressK1(randomFields<4>(g)));
  for (const auto& p : samplePoints(g, 5)) {
    const auto t = bs.tractor()(p);
    EXPECT_EQ(t(5, 0).value(), 1.0);
    const auto& c = t(5, 0).coefficients();
    for (size_t i = 1; i < c.size(); ++i) EXPECT_EQ(c[i], 0.0);
  }
}

TEST(Dressing, WeylDressedFieldsAreInvariantUnderTwistedWeylTransport) {
  testsupport::Gen g(209);
  const auto k1 = dressK1(randomFields<5>(g));
  const auto bs = dressWeyl(k1);
  for (int trial = 0; trial < 3; ++trial) {
    const Expr logZ = randomPolynomial(g.engine(), 2, 0.3);
    const auto cz = buildTwistingMap<5>(scalarField<5>(exp(logZ)), k1.connection());
    const auto moved = dressWeyl(transport(k1, cz.asGauge()));
    for (const auto& p : samplePoints(g, 3)) EXPECT_LE(fieldDifference(moved, bs, p), 1e-7);
  }
}

TEST(Dressing, WeylDressedMetricIsRescaled) {
  testsupport::Gen g(210);
  const auto k1 = dressK1(randomFields<4>(g));
  const auto bs = dressWeyl(k1);
  const auto phi = extractDilaton<4>(k1.tractor());
  for (const auto& p : samplePoints(g, 5)) {
    const auto phiSq = phi(p) * phi(p);
    Mat<RJet<4>> scaled = inducedMetric(k1.connection(), p);
    for (Eigen::Index i = 0; i < scaled.size(); ++i) scaled(i) = scaled(i) * phiSq;
    EXPECT_LE(maxAbsDifference(inducedMetric(bs.connection(), p), scaled), 1e-11);
  }
}

TEST(Dressing, DilatonTwistingMapLaws) {
  testsupport::Gen g(211);
  const auto f = randomFields<4>(g);
  const auto gp = GaugeParams::random(g.engine());
  const auto pts = samplePoints(g, 3);
  const auto k1 = dressK1(f);
  const auto cphi = dilatonTwistingMap(k1);

  // K1 gauge: rebuilt C(phi) unchanged.
  const auto cK = dilatonTwistingMap(dressK1(transport(f, boostGauge<4>(gp.boost))));
  // Weyl gauge: C(phi) -> C(z)^{-1} C(phi).
  const auto zg = weylGauge<4>(gp.logZ);
  const auto cW = dilatonTwistingMap(dressK1(transport(f, zg)));
  const auto cz = buildTwistingMap<4>(scalarField<4>(exp(gp.logZ)), f.connection());
  // Lorentz gauge: C(phi) -> S^{-1} C(phi) S.
  const auto lg = lorentzGauge<4>(gp.lorentz);
  const auto cL = dilatonTwistingMap(dressK1(transport(f, lg)));
  for (const auto& p : pts) {
    EXPECT_LE(maxAbsDifference(cK(p).real, cphi(p).real), 1e-10);
    EXPECT_LE(maxAbsDifference(cK(p).complex, cphi(p).complex), 1e-10);
    const auto w = cz(p).inverse() * cphi(p);
    EXPECT_LE(maxAbsDifference(cW(p).real, w.real), 1e-9);
    EXPECT_LE(maxAbsDifference(cW(p).complex, w.complex), 1e-9);
    const auto l = lg(p).inverse() * cphi(p) * lg(p);
    EXPECT_LE(maxAbsDifference(cL(p).real, l.real), 1e-9);
    EXPECT_LE(maxAbsDifference(cL(p).complex, l.complex), 1e-9);
  }
}

TEST(Dressing, ExplicitBlocksMatchConjugationForNormalConnection) {
  testsupport::Gen g(212);
  std::array<std::array<Expr, 4>, 4> h;
  for (auto& row : h)
    for (auto& x : row) x = randomPolynomial(g.engine(), 3, 1.0);
  std::array<Expr, 6> t;
  for (int i = 0; i < 6; ++i) t[i] = randomPolynomial(g.engine(), 2, 0.5, i == 5 ? 1.0 : 0.0);
  const FieldSet<5> f(Stage::Bare, buildNormalConnection(perturbedTetrad<5>(h, 0.1)), tractorFromExprs<5>(t),
                      [](const ChartPoint&) { return zeros<CJet<5>>(4, 1); });
  const auto k1 = dressK1(f);
  const auto cphi = dilatonTwistingMap(k1);
  const auto bs = dressWeyl(k1);
  for (const auto& p : samplePoints(g, 3)) {
    const auto built = bs.connection().blocks(p);
    const auto formula = explicitWeylDressedBlocks<5>(k1.connection()(p), cphi.value(p), cphi.upsilon(p));
    EXPECT_LE(maxAbsValue(built.a), 1e-8);
    EXPECT_LE(maxAbsDifference(built.theta, formula.theta), 1e-8);
    EXPECT_LE(maxAbsDifference(built.A, formula.A), 1e-8);
    EXPECT_LE(maxAbsDifference(built.P, formula.P), 1e-8);
    EXPECT_GT(maxAbsValue(cphi.upsilon(p)), 1e-3);
  }
}

TEST(Dressing, ExplicitBlocksMatchConjugationForGenericConnection) {
  testsupport::Gen g(213);
  const auto k1 = dressK1(randomFields<4>(g));
  const auto cphi = dilatonTwistingMap(k1);
  const auto bs = dressWeyl(k1);
  for (const auto& p : samplePoints(g, 3)) {
    const auto built = bs.connection().blocks(p);
    const auto formula = explicitWeylDressedBlocks<4>(k1.connection()(p), cphi.value(p), cphi.upsilon(p));
    EXPECT_LE(maxAbsValue(built.a), 1e-8);
    EXPECT_LE(maxAbsDifference(built.A, formula.A), 1e-8);
    EXPECT_LE(maxAbsDifference(built.P, formula.P), 1e-8);
  }
}

TEST(Dressing, ResidualLaws) {
  testsupport::Gen g(214);
  const auto f = randomFields<5>(g);
  const auto gp = GaugeParams::random(g.engine());
  const auto pts = samplePoints(g, 3);
  EXPECT_LE(residualLaw(Stage::K1Dressed, Subgroup::Lorentz, f, lorentzGauge<5>(gp.lorentz), gp.logZ, pts), 1e-8);
  EXPECT_LE(residualLaw(Stage::K1Dressed, Subgroup::Weyl, f, weylGauge<5>(gp.logZ), gp.logZ, pts), 1e-8);
  EXPECT_LE(residualLaw(Stage::WeylDressed, Subgroup::Lorentz, f, lorentzGauge<5>(gp.lorentz), gp.logZ, pts), 1e-8);
  EXPECT_THROW(residualLaw(Stage::WeylDressed, Subgroup::Weyl, f, weylGauge<5>(gp.logZ), gp.logZ, pts), std::invalid_argument);
}
