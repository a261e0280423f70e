#include <gtest/gtest.h>

#include <cmath>

#include "cdress/cartan.hpp"
#include "support/random.hpp"
#include "support/tensor_oracle.hpp"

using namespace cdress;

namespace {

constexpr int kN = 3;
using RJ = RJet<kN>;

ConnectionExprs randomConnection(testsupport::Gen& g, double amplitude = 0.5) {
  return ConnectionExprs::random(g.engine(), 2, amplitude);
}

Tetrad<4> randomPerturbedTetrad(testsupport::Gen& g, double amplitude) {
  std::array<std::array<Expr, 4>, 4> h;
  for (auto& row : h)
    for (auto& x : row) x = randomPolynomial(g.engine(), 3, 1.0);
  return perturbedTetrad<4>(h, amplitude);
}

Mat<double> plainConnectionComponent(const CartanConnection<1>& w, const ChartPoint& p, int mu) {
  return valuesOf(w(p)[mu]);
}

}  // namespace

TEST(Cartan, CurvatureMatchesFiniteDifferenceStructureEquation) {
  testsupport::Gen g(101);
  const ConnectionExprs c = randomConnection(g);
  const auto wJet = connectionFromExprs<kN>(c);
  const auto wPlain = connectionFromExprs<1>(c);
  const double h = 1e-4;
  for (int trial = 0; trial < 3; ++trial) {
    const ChartPoint p{g.point(0.5)};
    const auto omega = curvature(wJet, p).omega;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) {
        auto shifted = [&](int dir, double s) {
          ChartPoint q = p;
          q.x[dir] += s;
          return q;
        };
        const Mat<double> dNu = (plainConnectionComponent(wPlain, shifted(mu, h), nu) - plainConnectionComponent(wPlain, shifted(mu, -h), nu)) / (2 * h);
        const Mat<double> dMu = (plainConnectionComponent(wPlain, shifted(nu, h), mu) - plainConnectionComponent(wPlain, shifted(nu, -h), mu)) / (2 * h);
        const Mat<double> a = plainConnectionComponent(wPlain, p, mu), b = plainConnectionComponent(wPlain, p, nu);
        const Mat<double> expected = dNu - dMu + a * b - b * a;
        const Mat<double> got = valuesOf(omega.byMask((1 << mu) | (1 << nu)));
        EXPECT_LE((got - expected).cwiseAbs().maxCoeff(), 1e-6) << "mu=" << mu << " nu=" << nu;
      }
  }
}

TEST(Cartan, AssembledConnectionIsSo24Valued) {
  testsupport::Gen g(102);
  const auto w = connectionFromExprs<kN>(randomConnection(g));
  const ChartPoint p{g.point(0.5)};
  EXPECT_LE(so24Residual(w(p)), 1e-14);
  EXPECT_LE(so24Residual(curvature(w, p).omega), 1e-12);
}

TEST(Cartan, PureGaugeIsFlat) {
  testsupport::Gen g(103);
  const auto gp = GaugeParams::random(g.engine());
  const CartanConnection<kN> zero([](const ChartPoint&) { return FormJet<RJ>(1, 6, 6); });
  const auto pure = gaugeTransform(zero, gaugeFor<kN>(Subgroup::General, gp));
  const ChartPoint p{g.point(0.5)};
  EXPECT_LE(maxAbsValue(curvature(pure, p).omega), 1e-12);
}

TEST(Cartan, BianchiIdentityHolds) {
  testsupport::Gen g(104);
  const auto w = connectionFromExprs<kN>(randomConnection(g));
  for (int trial = 0; trial < 3; ++trial) {
    const ChartPoint p{g.point(0.5)};
    const auto wp = w(p);
    const auto omega = curvatureOf(wp).omega;
    const auto residual = exteriorDerivative(omega) + wedge(wp, omega) - wedge(omega, wp);
    EXPECT_LE(maxAbsValue(residual), 1e-10);
  }
}

TEST(Cartan, CurvatureIsGaugeCovariantForEverySubgroup) {
  testsupport::Gen g(105);
  const auto w = connectionFromExprs<kN>(randomConnection(g));
  const auto gp = GaugeParams::random(g.engine());
  for (Subgroup s : {Subgroup::K1, Subgroup::Weyl, Subgroup::Lorentz, Subgroup::General}) {
    const auto gauge = gaugeFor<kN>(s, gp);
    const auto wg = gaugeTransform(w, gauge);
    const ChartPoint p{g.point(0.5)};
    const auto gv = gauge(p);
    const auto expected = leftMultiply(groupInverse(gv.real), rightMultiply(curvature(w, p).omega, gv.real));
    EXPECT_LE(maxAbsDifference(curvature(wg, p).omega, expected), 1e-10) << subgroupName(s);
    EXPECT_LE(so24Residual(wg(p)), 1e-11) << subgroupName(s);
  }
}

TEST(Cartan, GaugeMapsLieInTheirSubgroups) {
  testsupport::Gen g(106);
  const auto gp = GaugeParams::random(g.engine());
  const ChartPoint p{g.point(0.5)};
  const auto k = valuesOf(gaugeFor<kN>(Subgroup::K1, gp)(p).real);
  EXPECT_LE(std::abs(k(0, 0) - 1.0) + std::abs(k(5, 5) - 1.0), 1e-14);
  EXPECT_LE(k.block(1, 1, 4, 4).isIdentity(1e-14) ? 0.0 : 1.0, 0.0);
  const auto z = valuesOf(gaugeFor<kN>(Subgroup::Weyl, gp)(p).real);
  EXPECT_GT(z(0, 0), 0.0);
  EXPECT_NEAR(z(0, 0) * z(5, 5), 1.0, 1e-14);
  const auto l = valuesOf(gaugeFor<kN>(Subgroup::Lorentz, gp)(p).real);
  const Eigen::Matrix4d s = l.block(1, 1, 4, 4);
  EXPECT_LE((s.transpose() * minkowski() * s - minkowski()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(s.determinant(), 1.0, 1e-12);
  EXPECT_GT(s(0, 0), 0.0);
  const auto h = gaugeFor<kN>(Subgroup::General, gp)(p);
  const GroupElement ge{GroupElement::Kind::General, Matrix6d(valuesOf(h.real))};
  EXPECT_LE(ge.metricResidual(), 1e-12);
  EXPECT_LE(complexMetricResidual(Matrix4c(valuesOf(h.complex))), 1e-12);
}

TEST(Cartan, CovariantDerivativesAreGaugeCovariant) {
  testsupport::Gen g(107);
  const auto w = connectionFromExprs<kN>(randomConnection(g));
  const auto gp = GaugeParams::random(g.engine());
  std::array<Expr, 6> tc;
  for (auto& e : tc) e = randomPolynomial(g.engine(), 2, 1.0);
  std::array<std::pair<Expr, Expr>, 4> sc;
  for (auto& e : sc) e = {randomPolynomial(g.engine(), 2, 1.0), randomPolynomial(g.engine(), 2, 1.0)};
  const auto phi = tractorFromExprs<kN>(tc);
  const auto psi = twistorFromExprs<kN>(sc);
  for (Subgroup s : {Subgroup::K1, Subgroup::Weyl, Subgroup::Lorentz, Subgroup::General}) {
    const auto gauge = gaugeFor<kN>(s, gp);
    const auto wg = gaugeTransform(w, gauge);
    const ChartPoint p{g.point(0.5)};
    const auto gv = gauge(p);
    const auto lhsT = covariantDerivative(gaugeTransform(phi, gauge), wg, p);
    const auto rhsT = leftMultiply(groupInverse(gv.real), covariantDerivative(phi, w, p));
    EXPECT_LE(maxAbsDifference(lhsT, rhsT), 1e-10) << subgroupName(s);
    const auto lhsS = covariantDerivative(gaugeTransform(psi, gauge), wg, p);
    const auto rhsS = leftMultiply(complexGroupInverse(gv.complex), covariantDerivative(psi, w, p));
    EXPECT_LE(maxAbsDifference(lhsS, rhsS), 1e-10) << subgroupName(s);
  }
}

TEST(Cartan, ComplexConnectionIsSu22Valued) {
  testsupport::Gen g(108);
  const auto w = connectionFromExprs<kN>(randomConnection(g));
  const ChartPoint p{g.point(0.5)};
  const auto cw = complexConnection(w(p));
  for (int mu = 0; mu < 4; ++mu) EXPECT_LE(su22Residual(Matrix4c(valuesOf(cw[mu]))), 1e-12);
}

TEST(Cartan, NormalConnectionOfMinkowskiIsFlat) {
  const auto w = buildNormalConnection(minkowskiTetrad<kN>());
  const ChartPoint p{{0.1, -0.2, 0.3, 0.05}};
  EXPECT_LE(maxAbsValue(curvature(w, p).omega), 1e-15);
  const auto b = w.blocks(p);
  EXPECT_LE(maxAbsValue(b.A) + maxAbsValue(b.P) + maxAbsValue(b.a), 0.0);
}

TEST(Cartan, NormalConnectionSatisfiesNormality) {
  testsupport::Gen g(109);
  const auto tetrad = randomPerturbedTetrad(g, 0.1);
  const auto w = buildNormalConnection(tetrad);
  for (int trial = 0; trial < 3; ++trial) {
    const ChartPoint p{g.point(0.3)};
    const auto curv = curvature(w, p);
    const Mat<RJet<4>> E = inverse(tetrad(p));
    EXPECT_LE(maxAbsValue(curv.Theta()), 1e-12);
    EXPECT_LE(maxAbsValue(curv.f()), 1e-12);
    EXPECT_LE(maxAbsValue(ricciTrace(curv.W(), E)), 1e-10);
    EXPECT_LE(so24Residual(w(p)), 1e-12);
  }
}

TEST(Cartan, NormalityDetectsPerturbedSchouten) {
  testsupport::Gen g(110);
  const auto tetrad = randomPerturbedTetrad(g, 0.1);
  const auto bad = buildNormalConnection(tetrad, 0.05);
  const ChartPoint p{g.point(0.3)};
  const auto curv = curvature(bad, p);
  EXPECT_GT(maxAbsValue(ricciTrace(curv.W(), Mat<RJet<4>>(inverse(tetrad(p))))), 1e-3);
}

TEST(Cartan, WeylBlockMatchesCoordinateWeylTensor) {
  testsupport::Gen g(111);
  const auto tetrad = randomPerturbedTetrad(g, 0.15);
  const auto w = buildNormalConnection(tetrad);
  const ChartPoint p{g.point(0.3)};
  const Mat<RJet<4>> e = tetrad(p);
  const Mat<RJet<4>> E = inverse(e);
  const auto oracle = testsupport::coordinateCurvature<4>(tetrad.metric(p));
  const auto W = curvature(w, p).W();
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
          // W_{ab mu nu} with a lowered by eta, mapped to coordinates by E.
          double expected = 0.0;
          for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s)
              expected += valueOf(E(r, a)) * valueOf(E(s, b)) * valueOf(oracle.weylLowered[r][s][mu][nu]);
          const double got = minkowski()(a, a) * valueOf(W.byMask((1 << mu) | (1 << nu))(a, b));
          worst = std::max(worst, std::abs(got - expected));
          scale = std::max(scale, std::abs(expected));
        }
  EXPECT_GT(scale, 1e-4);
  EXPECT_LE(worst, 1e-10);
}

TEST(Cartan, ConformallyFlatMetricHasVanishingWeylBlock) {
  const Expr omega = Expr::parse("exp(0.3*x0 - 0.2*x1*x2 + 0.1*x3^2)");
  const auto w = buildNormalConnection(conformalTetrad<4>(omega));
  const ChartPoint p{{0.2, 0.1, -0.3, 0.25}};
  const auto curv = curvature(w, p);
  EXPECT_LE(maxAbsValue(curv.W()), 1e-11);
  EXPECT_LE(maxAbsValue(curv.Theta()), 1e-12);
  // The Lorentz part alone is curved, so the Schouten terms are doing work.
  const auto b = w.blocks(p);
  EXPECT_GT(maxAbsValue(exteriorDerivative(b.A) + wedge(b.A, b.A)), 1e-3);
}

TEST(Cartan, InducedMetricMatchesTetrad) {
  testsupport::Gen g(112);
  const auto tetrad = randomPerturbedTetrad(g, 0.1);
  const auto w = buildNormalConnection(tetrad);
  const ChartPoint p{g.point(0.3)};
  EXPECT_LE(maxAbsDifference(inducedMetric(w, p), tetrad.metric(p)), 1e-15);
}

TEST(Cartan, SingularTetradIsReported) {
  const Tetrad<kN> flat([](const ChartPoint&) {
    Mat<RJ> e = identity<RJ>(4);
    e(3, 3) = RJ(0.0);
    return e;
  });
  const auto w = buildNormalConnection(flat);
  EXPECT_THROW(w(ChartPoint{{0, 0, 0, 0}}), DegenerateField);
}
