#ifndef CDRESS_CARTAN_HPP
#define CDRESS_CARTAN_HPP

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "cdress/algebra.hpp"
#include "cdress/errors.hpp"
#include "cdress/expr.hpp"
#include "cdress/forms.hpp"
#include "cdress/jet.hpp"
#include "cdress/matrix.hpp"

namespace cdress {

template <int N>
using RJet = Jet<double, N>;
template <int N>
using CJet = Jet<cplx, N>;

/// d of a matrix-valued function, as a 1-form.
template <typename S>
FormJet<S> differential(const Mat<S>& m) {
  FormJet<S> r(1, m.rows(), m.cols());
  for (int mu = 0; mu < kChartDim; ++mu) r[mu] = derivativeOf(m, mu);
  return r;
}

template <typename R>
FormJet<ComplexOf<R>> complexify(const FormJet<R>& w) {
  return w.mapComponents([](const Mat<R>& m) { return complexify(m); });
}

// ---------------------------------------------------------------------------
// Block layout of so(2,4)-valued forms: (a, P, 0; theta, A, P^t; 0, theta^t, -a).

template <typename S>
struct ConnectionBlocks {
  FormJet<S> a;      // 1x1
  FormJet<S> A;      // 4x4
  FormJet<S> P;      // 1x4
  FormJet<S> theta;  // 4x1
};

template <typename S>
ConnectionBlocks<S> blocksOf(const FormJet<S>& w) {
  return {w.block(0, 0, 1, 1), w.block(1, 1, 4, 4), w.block(0, 1, 1, 4), w.block(1, 0, 4, 1)};
}

/// Assemble a 6x6 form from its blocks with P^t = eta P^T and theta^t = theta^T eta.
template <typename S>
FormJet<S> assembleBlocks(const FormJet<S>& a, const FormJet<S>& A, const FormJet<S>& P, const FormJet<S>& theta) {
  const int p = a.degree();
  FormJet<S> w(p, 6, 6);
  const Mat<S> eta = etaMatrix<S>();
  w.setBlock(0, 0, a);
  w.setBlock(5, 5, -a);
  w.setBlock(1, 1, A);
  w.setBlock(0, 1, P);
  w.setBlock(1, 0, theta);
  w.setBlock(1, 5, leftMultiply(eta, P.transposed()));
  w.setBlock(5, 1, rightMultiply(theta.transposed(), eta));
  return w;
}

/// max over components of |w^T Sigma + Sigma w|.
template <typename S>
double so24Residual(const FormJet<S>& w) {
  const Mat<S> sig = sigmaMetric<S>();
  double r = 0.0;
  for (int k = 0; k < w.size(); ++k)
    r = std::max(r, maxAbsValue(Mat<S>(matmul(Mat<S>(w[k].transpose()), sig) + matmul(sig, w[k]))));
  return r;
}

/// Curvature 2-form with blocks (f, C, 0; Theta, W, C^t; 0, Theta^t, -f).
template <typename S>
struct CartanCurvature {
  FormJet<S> omega;

  FormJet<S> f() const { return omega.block(0, 0, 1, 1); }
  FormJet<S> W() const { return omega.block(1, 1, 4, 4); }
  FormJet<S> C() const { return omega.block(0, 1, 1, 4); }
  FormJet<S> Theta() const { return omega.block(1, 0, 4, 1); }
};

template <typename S>
CartanCurvature<S> curvatureOf(const FormJet<S>& w) {
  return {exteriorDerivative(w) + wedge(w, w)};
}

/// so(2,4)-valued Cartan connection on the chart, evaluated to jets at points.
template <int N>
class CartanConnection {
 public:
  using RJ = RJet<N>;
  using Evaluator = std::function<FormJet<RJ>(const ChartPoint&)>;

  CartanConnection() = default;
  explicit CartanConnection(Evaluator eval) : eval_(std::move(eval)) {}

  FormJet<RJ> operator()(const ChartPoint& p) const { return eval_(p); }
  ConnectionBlocks<RJ> blocks(const ChartPoint& p) const { return blocksOf(eval_(p)); }

  /// Tetrad e^a_mu read from the soldering block; throws if singular at p.
  Mat<RJ> tetrad(const ChartPoint& p) const { return tetradOf(eval_(p), p); }

  static Mat<RJ> tetradOf(const FormJet<RJ>& w, const ChartPoint& p) {
    Mat<RJ> e(4, 4);
    for (int mu = 0; mu < kChartDim; ++mu) e.col(mu) = w[mu].block(1, 0, 4, 1);
    if (std::abs(valueOf(determinant(e))) < 1e-12) throw DegenerateField("soldering form is singular", p.x);
    return e;
  }

 private:
  Evaluator eval_;
};

template <int N>
CartanCurvature<RJet<N>> curvature(const CartanConnection<N>& w, const ChartPoint& p) {
  return curvatureOf(w(p));
}

/// g = e^T eta e from the soldering block.
template <int N>
Mat<RJet<N>> inducedMetric(const CartanConnection<N>& w, const ChartPoint& p) {
  return Tetrad<N>::inducedMetricOf(w.tetrad(p));
}

// ---------------------------------------------------------------------------
// Gauge maps.

enum class Subgroup { K1, Weyl, Lorentz, General };

inline const char* subgroupName(Subgroup s) {
  switch (s) {
    case Subgroup::K1:
      return "K1";
    case Subgroup::Weyl:
      return "Weyl";
    case Subgroup::Lorentz:
      return "Lorentz";
    case Subgroup::General:
      return "H";
  }
  return "?";
}

/// H-valued map on the chart with its SU(2,2) lift.
template <int N>
struct GaugeMap {
  using RJ = RJet<N>;
  Subgroup subgroup = Subgroup::General;
  std::function<GroupPair<RJ>(const ChartPoint&)> eval;

  GroupPair<RJ> operator()(const ChartPoint& p) const { return eval(p); }
};

template <int N>
GaugeMap<N> identityGauge() {
  return {Subgroup::General, [](const ChartPoint&) { return GroupPair<RJet<N>>::identityElement(); }};
}

/// Z(z), z = exp(w) so positivity is structural.
template <int N>
GaugeMap<N> weylGauge(const Expr& logZ) {
  return {Subgroup::Weyl, [logZ](const ChartPoint& p) {
            const RJet<N> z = exp(logZ.evaluate<double, N>(p));
            return GroupPair<RJet<N>>{weylMatrix<RJet<N>>(z), complexWeylMatrix<CJet<N>>(z)};
          }};
}

/// Weyl map from a positive field given directly.
template <int N>
GaugeMap<N> weylGaugeFromField(const Expr& z) {
  return {Subgroup::Weyl, [z](const ChartPoint& p) {
            const RJet<N> zv = z.evaluate<double, N>(p);
            if (!(zv.value() > 0)) throw DegenerateField("Weyl parameter is not positive", p.x);
            return GroupPair<RJet<N>>{weylMatrix<RJet<N>>(zv), complexWeylMatrix<CJet<N>>(zv)};
          }};
}

template <int N>
Eigen::Matrix<RJet<N>, 1, 4> evaluateCovector(const std::array<Expr, 4>& r, const ChartPoint& p) {
  Eigen::Matrix<RJet<N>, 1, 4> v;
  for (int a = 0; a < 4; ++a) v(a) = r[a].evaluate<double, N>(p);
  return v;
}

/// K1(r).
template <int N>
GaugeMap<N> boostGauge(const std::array<Expr, 4>& r) {
  return {Subgroup::K1, [r](const ChartPoint& p) {
            const auto v = evaluateCovector<N>(r, p);
            return GroupPair<RJet<N>>{boostMatrix<RJet<N>>(v), complexBoostMatrix<RJet<N>>(v)};
          }};
}

/// SL(2,C) element from three boost and three rotation parameter fields.
template <int N>
Mat<CJet<N>> spinFromFields(const std::array<Expr, 6>& params, const ChartPoint& p) {
  std::array<CJet<N>, 3> b, w;
  for (int k = 0; k < 3; ++k) {
    b[k] = toComplex(params[k].evaluate<double, N>(p));
    w[k] = toComplex(params[3 + k].evaluate<double, N>(p));
  }
  return spinFromParameters<CJet<N>>(b, w);
}

/// blockdiag(1, S, 1) with S covered by Sbar.
template <int N>
GaugeMap<N> lorentzGauge(const std::array<Expr, 6>& params) {
  return {Subgroup::Lorentz, [params](const ChartPoint& p) {
            const Mat<CJet<N>> sbar = spinFromFields<N>(params, p);
            const Mat<RJet<N>> s = spinToLorentzMatrix<CJet<N>>(sbar);
            return GroupPair<RJet<N>>{lorentzMatrix<RJet<N>>(s), complexLorentzMatrix<CJet<N>>(sbar)};
          }};
}

/// Z(z) L(S) K1(r).
template <int N>
GaugeMap<N> generalGauge(const Expr& logZ, const std::array<Expr, 6>& params, const std::array<Expr, 4>& r) {
  const auto z = weylGauge<N>(logZ), l = lorentzGauge<N>(params), k = boostGauge<N>(r);
  return {Subgroup::General, [z, l, k](const ChartPoint& p) { return z(p) * l(p) * k(p); }};
}

/// Seeded random low-degree gauge parameters.
struct GaugeParams {
  Expr logZ;
  std::array<Expr, 6> lorentz;
  std::array<Expr, 4> boost;

  static GaugeParams random(std::mt19937_64& rng, double amplitude = 0.3, int degree = 2) {
    GaugeParams g;
    g.logZ = randomPolynomial(rng, degree, amplitude);
    for (auto& e : g.lorentz) e = randomPolynomial(rng, degree, amplitude);
    for (auto& e : g.boost) e = randomPolynomial(rng, degree, amplitude);
    return g;
  }
};

template <int N>
GaugeMap<N> gaugeFor(Subgroup s, const GaugeParams& g) {
  switch (s) {
    case Subgroup::K1:
      return boostGauge<N>(g.boost);
    case Subgroup::Weyl:
      return weylGauge<N>(g.logZ);
    case Subgroup::Lorentz:
      return lorentzGauge<N>(g.lorentz);
    case Subgroup::General:
      return generalGauge<N>(g.logZ, g.lorentz, g.boost);
  }
  throw std::logic_error("unknown subgroup");
}

/// g^{-1} w g + g^{-1} dg at a point, for any matrix group representation.
template <typename S>
FormJet<S> gaugeAction(const FormJet<S>& w, const Mat<S>& g, const Mat<S>& gInverse) {
  return leftMultiply(gInverse, rightMultiply(w, g) + differential(g));
}

template <int N>
CartanConnection<N> gaugeTransform(const CartanConnection<N>& w, const GaugeMap<N>& g) {
  return CartanConnection<N>([w, g](const ChartPoint& p) {
    const auto gp = g(p);
    return gaugeAction(w(p), gp.real, groupInverse(gp.real));
  });
}

// ---------------------------------------------------------------------------
// Tractor (R^6) and twistor (C^4) fields.

template <int N>
using TractorField = std::function<Mat<RJet<N>>(const ChartPoint&)>;
template <int N>
using TwistorField = std::function<Mat<CJet<N>>(const ChartPoint&)>;

template <int N>
TractorField<N> tractorFromExprs(const std::array<Expr, 6>& comps) {
  return [comps](const ChartPoint& p) {
    Mat<RJet<N>> v(6, 1);
    for (int i = 0; i < 6; ++i) v(i) = comps[i].evaluate<double, N>(p);
    return v;
  };
}

/// Components given as (real part, imaginary part) expressions.
template <int N>
TwistorField<N> twistorFromExprs(const std::array<std::pair<Expr, Expr>, 4>& comps) {
  return [comps](const ChartPoint& p) {
    Mat<CJet<N>> v(4, 1);
    for (int i = 0; i < 4; ++i)
      v(i) = toComplex(comps[i].first.evaluate<double, N>(p)) + toComplex(comps[i].second.evaluate<double, N>(p)) * cplx(0, 1);
    return v;
  };
}

template <int N>
TractorField<N> gaugeTransform(const TractorField<N>& phi, const GaugeMap<N>& g) {
  return [phi, g](const ChartPoint& p) { return matmul(groupInverse(g(p).real), phi(p)); };
}

template <int N>
TwistorField<N> gaugeTransform(const TwistorField<N>& psi, const GaugeMap<N>& g) {
  return [psi, g](const ChartPoint& p) { return matmul(complexGroupInverse(g(p).complex), psi(p)); };
}

/// su(2,2) image of an so(2,4)-valued form.
template <typename R>
FormJet<ComplexOf<R>> complexConnection(const FormJet<R>& w) {
  return w.mapComponents([](const Mat<R>& m) { return algebraIsoMatrix<R>(m); });
}

/// D phi = d phi + w phi.
template <typename S>
FormJet<S> covariantDerivative(const Mat<S>& phi, const FormJet<S>& w) {
  if (w.cols() != phi.rows()) throw ShapeMismatch("covariant derivative: representation mismatch");
  return differential(phi) + rightMultiply(w, phi);
}

template <int N>
FormJet<RJet<N>> covariantDerivative(const TractorField<N>& phi, const CartanConnection<N>& w, const ChartPoint& p) {
  return covariantDerivative(phi(p), w(p));
}

/// D psi = d psi + iso(w) psi.
template <int N>
FormJet<CJet<N>> covariantDerivative(const TwistorField<N>& psi, const CartanConnection<N>& w, const ChartPoint& p) {
  return covariantDerivative(psi(p), complexConnection(w(p)));
}

// ---------------------------------------------------------------------------
// Connections from explicit data.

/// Connection assembled from block expressions: a_mu, A^a_{b mu} (so(1,3) in
/// a,b via antisymmetrized parameters), P_{b mu} and e^a_mu.
struct ConnectionExprs {
  std::array<Expr, 4> a;                    // a_mu
  std::array<std::array<Expr, 4>, 6> A;     // (eta A)_{ab mu} for a < b, lorentzPairs order
  std::array<std::array<Expr, 4>, 4> P;     // P_{b mu}
  std::array<std::array<Expr, 4>, 4> e;     // e^a_mu

  static ConnectionExprs random(std::mt19937_64& rng, int degree, double amplitude, bool nearIdentityTetrad = true) {
    ConnectionExprs c;
    for (auto& x : c.a) x = randomPolynomial(rng, degree, amplitude);
    for (auto& row : c.A)
      for (auto& x : row) x = randomPolynomial(rng, degree, amplitude);
    for (auto& row : c.P)
      for (auto& x : row) x = randomPolynomial(rng, degree, amplitude);
    for (int a = 0; a < 4; ++a)
      for (int mu = 0; mu < 4; ++mu)
        c.e[a][mu] = randomPolynomial(rng, degree, amplitude, (nearIdentityTetrad && a == mu) ? 1.0 : 0.0);
    return c;
  }
};

template <int N>
CartanConnection<N> connectionFromExprs(const ConnectionExprs& c) {
  return CartanConnection<N>([c](const ChartPoint& p) {
    using RJ = RJet<N>;
    FormJet<RJ> a(1, 1, 1), A(1, 4, 4), P(1, 1, 4), theta(1, 4, 1);
    for (int mu = 0; mu < kChartDim; ++mu) {
      a[mu](0, 0) = c.a[mu].evaluate<double, N>(p);
      for (int g = 0; g < 6; ++g) {
        const auto [i, j] = lorentzPairs()[g];
        const RJ w = c.A[g][mu].evaluate<double, N>(p);
        A[mu](i, j) = w * minkowski()(i, i);
        A[mu](j, i) = -w * minkowski()(j, j);
      }
      for (int b = 0; b < 4; ++b) {
        P[mu](0, b) = c.P[b][mu].evaluate<double, N>(p);
        theta[mu](b, 0) = c.e[b][mu].evaluate<double, N>(p);
      }
    }
    return assembleBlocks(a, A, P, theta);
  });
}

// ---------------------------------------------------------------------------
// Normal connection from a tetrad.

namespace detail {

/// Frame components X_{cd} = X_{mu nu} E^mu_c E^nu_d of a scalar 2-form.
template <typename S>
S frameComponent(const FormJet<S>& w, Eigen::Index i, Eigen::Index j, const Mat<S>& E, int c, int d) {
  S acc(0);
  for (int mu = 0; mu < kChartDim; ++mu)
    for (int nu = mu + 1; nu < kChartDim; ++nu) {
      const S comp = w.byMask((1 << mu) | (1 << nu))(i, j);
      if constexpr (IsJet<S>::value)
        if (comp.isExactZero()) continue;
      acc = acc + comp * (E(mu, c) * E(nu, d) - E(nu, c) * E(mu, d));
    }
  return acc;
}

}  // namespace detail

/// Torsion-free spin connection A^a_{b mu} of a tetrad, from the anholonomy
/// T^a_bc = E^mu_b E^nu_c (d_mu e^a_nu - d_nu e^a_mu) via
/// w_abc = (T_abc + T_bca - T_cab) / 2 and A^a_{b mu} = eta^aa w_abc e^c_mu.
template <typename S>
FormJet<S> spinConnection(const Mat<S>& e, const Mat<S>& E) {
  std::array<Mat<S>, 4> de;
  for (int mu = 0; mu < kChartDim; ++mu) de[mu] = derivativeOf(e, mu);
  // T[a](b, c) with a lowered.
  std::array<Mat<S>, 4> T;
  for (int a = 0; a < 4; ++a) {
    Mat<S> curl(4, 4);  // d_mu e^a_nu - d_nu e^a_mu
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) curl(mu, nu) = de[mu](a, nu) - de[nu](a, mu);
    Mat<S> t = matmul(matmul(Mat<S>(E.transpose()), curl), E);
    for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = t(i) * minkowski()(a, a);
    T[a] = t;
  }
  FormJet<S> A(1, 4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      for (int mu = 0; mu < kChartDim; ++mu) {
        S acc(0);
        for (int c = 0; c < 4; ++c) {
          const S w = (T[a](b, c) + T[b](c, a) - T[c](a, b)) * 0.5;
          acc = acc + w * e(c, mu);
        }
        A[mu](a, b) = acc * minkowski()(a, a);
      }
    }
  return A;
}

/// Schouten tensor P_ab = -(Ric_ab - R eta_ab / 6) / 2 of the Lorentz curvature
/// R = dA + A^A in frame components, Ric_bd = R^a_{bad}.
template <typename S>
Mat<S> schoutenFrame(const FormJet<S>& A, const Mat<S>& E) {
  const FormJet<S> R = exteriorDerivative(A) + wedge(A, A);
  Mat<S> ric(4, 4);
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      S acc(0);
      for (int a = 0; a < 4; ++a) acc = acc + detail::frameComponent(R, a, b, E, a, d);
      ric(b, d) = acc;
    }
  S scalar(0);
  for (int a = 0; a < 4; ++a) scalar = scalar + ric(a, a) * minkowski()(a, a);
  Mat<S> P(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      S v = ric(a, b);
      if (a == b) v = v - scalar * (minkowski()(a, a) / 6.0);
      P(a, b) = v * -0.5;
    }
  return P;
}

/// Ricci-type contraction W^a_{b a d} of a 4x4 2-form in the frame.
template <typename S>
Mat<S> ricciTrace(const FormJet<S>& W, const Mat<S>& E) {
  Mat<S> r(4, 4);
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      S acc(0);
      for (int a = 0; a < 4; ++a) acc = acc + detail::frameComponent(W, a, b, E, a, d);
      r(b, d) = acc;
    }
  return r;
}

/// Normal connection pieces at a point: a = 0, theta = e, torsion-free A and
/// the Schouten 1-form P_b = P_bc theta^c (optionally shifted by a symmetric
/// perturbation, to exercise the normality checks).
template <int N>
FormJet<RJet<N>> normalConnectionAt(const Mat<RJet<N>>& e, const ChartPoint& p, double corruptP = 0.0) {
  using RJ = RJet<N>;
  if (std::abs(valueOf(determinant(e))) < 1e-12) throw DegenerateField("singular tetrad", p.x);
  const Mat<RJ> E = inverse(e);
  const FormJet<RJ> A = spinConnection(e, E);
  Mat<RJ> Pf = schoutenFrame(A, E);
  if (corruptP != 0.0)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) Pf(a, b) = Pf(a, b) + RJ(corruptP * (1.0 + 0.25 * (a + b) + (a == b ? 0.5 : 0.0)));
  FormJet<RJ> P(1, 1, 4), theta(1, 4, 1), a(1, 1, 1);
  for (int mu = 0; mu < kChartDim; ++mu) {
    for (int b = 0; b < 4; ++b) {
      RJ acc(0);
      for (int c = 0; c < 4; ++c) acc = acc + Pf(b, c) * e(c, mu);
      P[mu](0, b) = acc;
      theta[mu](b, 0) = e(b, mu);
    }
  }
  return assembleBlocks(a, A, P, theta);
}

template <int N>
CartanConnection<N> buildNormalConnection(const Tetrad<N>& e, double corruptP = 0.0) {
  return CartanConnection<N>([e, corruptP](const ChartPoint& p) { return normalConnectionAt<N>(e(p), p, corruptP); });
}

/// Tetrad presets.
template <int N>
Tetrad<N> minkowskiTetrad() {
  return Tetrad<N>([](const ChartPoint&) { return identity<RJet<N>>(4); });
}

template <int N>
Tetrad<N> conformalTetrad(const Expr& omega) {
  return Tetrad<N>([omega](const ChartPoint& p) {
    const RJet<N> w = omega.evaluate<double, N>(p);
    Mat<RJet<N>> e = zeros<RJet<N>>(4, 4);
    for (int a = 0; a < 4; ++a) e(a, a) = w;
    return e;
  });
}

/// e = 1 + amplitude * (entrywise expressions).
template <int N>
Tetrad<N> perturbedTetrad(const std::array<std::array<Expr, 4>, 4>& h, double amplitude) {
  return Tetrad<N>([h, amplitude](const ChartPoint& p) {
    Mat<RJet<N>> e(4, 4);
    for (int a = 0; a < 4; ++a)
      for (int mu = 0; mu < 4; ++mu) e(a, mu) = h[a][mu].evaluate<double, N>(p) * amplitude + (a == mu ? 1.0 : 0.0);
    return e;
  });
}

}  // namespace cdress

#endif  // CDRESS_CARTAN_HPP
