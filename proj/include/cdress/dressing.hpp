#ifndef CDRESS_DRESSING_HPP
#define CDRESS_DRESSING_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "cdress/cartan.hpp"

namespace cdress {

template <int N>
using ScalarField = std::function<RJet<N>(const ChartPoint&)>;

// ---------------------------------------------------------------------------
// K1 dressing field u1 = K1(q), q_a = a_mu E^mu_a.

template <int N>
Mat<RJet<N>> k1Parameter(const FormJet<RJet<N>>& w, const ChartPoint& p) {
  const Mat<RJet<N>> E = inverse(CartanConnection<N>::tetradOf(w, p));
  Mat<RJet<N>> q(1, 4);
  for (int a = 0; a < 4; ++a) {
    RJet<N> acc(0);
    for (int mu = 0; mu < kChartDim; ++mu) acc = acc + w[mu](0, 0) * E(mu, a);
    q(0, a) = acc;
  }
  return q;
}

template <int N>
struct K1Dressing {
  CartanConnection<N> source;

  Mat<RJet<N>> q(const ChartPoint& p) const { return k1Parameter<N>(source(p), p); }
  GroupPair<RJet<N>> u(const ChartPoint& p) const {
    const Mat<RJet<N>> qp = q(p);
    return {boostMatrix<RJet<N>>(qp), complexBoostMatrix<RJet<N>>(qp)};
  }
  GaugeMap<N> asGauge() const {
    const K1Dressing self = *this;
    return {Subgroup::K1, [self](const ChartPoint& p) { return self.u(p); }};
  }
};

template <int N>
K1Dressing<N> extractU1(const CartanConnection<N>& w) {
  return {w};
}

// ---------------------------------------------------------------------------
// Dressed fields.

enum class Stage { Bare, K1Dressed, WeylDressed };

inline const char* stageName(Stage s) {
  switch (s) {
    case Stage::Bare:
      return "bare";
    case Stage::K1Dressed:
      return "K1-dressed";
    case Stage::WeylDressed:
      return "Weyl-dressed";
  }
  return "?";
}

/// Connection, tractor and twistor evaluated together at one point.
template <int N>
struct FieldValues {
  FormJet<RJet<N>> connection;
  Mat<RJet<N>> tractor;
  Mat<CJet<N>> twistor;
};

/// Gauge map that may depend on the fields it acts on (dressing fields do).
template <int N>
using FieldGauge = std::function<GroupPair<RJet<N>>(const FieldValues<N>&, const ChartPoint&)>;

template <int N>
class FieldSet {
 public:
  using Evaluator = std::function<FieldValues<N>(const ChartPoint&)>;

  FieldSet() = default;
  FieldSet(Stage stage, Evaluator eval) : stage_(stage), eval_(std::move(eval)) {}
  FieldSet(Stage stage, CartanConnection<N> w, TractorField<N> phi, TwistorField<N> psi)
      : stage_(stage), eval_([w, phi, psi](const ChartPoint& p) { return FieldValues<N>{w(p), phi(p), psi(p)}; }) {}

  Stage stage() const { return stage_; }
  FieldValues<N> operator()(const ChartPoint& p) const { return eval_(p); }

  CartanConnection<N> connection() const {
    const Evaluator e = eval_;
    return CartanConnection<N>([e](const ChartPoint& p) { return e(p).connection; });
  }
  TractorField<N> tractor() const {
    const Evaluator e = eval_;
    return [e](const ChartPoint& p) { return e(p).tractor; };
  }
  TwistorField<N> twistor() const {
    const Evaluator e = eval_;
    return [e](const ChartPoint& p) { return e(p).twistor; };
  }

 private:
  Stage stage_ = Stage::Bare;
  Evaluator eval_;
};

/// w -> g^{-1} w g + g^{-1} dg, phi -> g^{-1} phi, psi -> gbar^{-1} psi.
template <int N>
FieldValues<N> transportValues(const FieldValues<N>& v, const GroupPair<RJet<N>>& g) {
  return {gaugeAction(v.connection, g.real, groupInverse(g.real)), matmul(groupInverse(g.real), v.tractor),
          matmul(complexGroupInverse(g.complex), v.twistor)};
}

template <int N>
FieldSet<N> transport(const FieldSet<N>& f, const FieldGauge<N>& g, Stage stage) {
  return FieldSet<N>(stage, [f, g](const ChartPoint& p) {
    const FieldValues<N> v = f(p);
    return transportValues<N>(v, g(v, p));
  });
}

template <int N>
FieldSet<N> transport(const FieldSet<N>& f, const GaugeMap<N>& g, Stage stage) {
  return transport<N>(f, FieldGauge<N>([g](const FieldValues<N>&, const ChartPoint& p) { return g(p); }), stage);
}

template <int N>
FieldSet<N> transport(const FieldSet<N>& f, const GaugeMap<N>& g) {
  return transport(f, g, f.stage());
}

/// u1 built from the connection it dresses.
template <int N>
FieldGauge<N> k1DressingGauge() {
  return [](const FieldValues<N>& v, const ChartPoint& p) {
    const Mat<RJet<N>> q = k1Parameter<N>(v.connection, p);
    return GroupPair<RJet<N>>{boostMatrix<RJet<N>>(q), complexBoostMatrix<RJet<N>>(q)};
  };
}

template <int N>
FieldSet<N> dressK1(const FieldSet<N>& bare) {
  return transport<N>(bare, k1DressingGauge<N>(), Stage::K1Dressed);
}

/// Largest difference between two field sets at p, over connection,
/// curvature, tractor and twistor.
template <int N>
double fieldDifference(const FieldValues<N>& a, const FieldValues<N>& b) {
  double r = maxAbsDifference(a.connection, b.connection);
  r = std::max(r, maxAbsDifference(curvatureOf(a.connection).omega, curvatureOf(b.connection).omega));
  r = std::max(r, maxAbsDifference(a.tractor, b.tractor));
  r = std::max(r, maxAbsDifference(a.twistor, b.twistor));
  return r;
}

template <int N>
double fieldDifference(const FieldSet<N>& a, const FieldSet<N>& b, const ChartPoint& p) {
  return fieldDifference<N>(a(p), b(p));
}

// ---------------------------------------------------------------------------
// Twisting map C(w) = Z(w) K1(Upsilon/w), Upsilon_a = w^{-1} d_mu w E^mu_a.

/// Upsilon as a jet row covector.
template <int N>
Mat<RJet<N>> upsilonOf(const RJet<N>& w, const Mat<RJet<N>>& E) {
  Mat<RJet<N>> u(1, 4);
  for (int a = 0; a < 4; ++a) {
    RJet<N> acc(0);
    for (int mu = 0; mu < kChartDim; ++mu) acc = acc + w.derivative(mu) * E(mu, a);
    u(0, a) = acc / w;
  }
  return u;
}

template <int N>
GroupPair<RJet<N>> twistingMatrices(const RJet<N>& w, const Mat<RJet<N>>& E) {
  const Mat<RJet<N>> r = upsilonOf<N>(w, E) * RJet<N>(RJet<N>(1.0) / w);
  return {matmul(weylMatrix<RJet<N>>(w), boostMatrix<RJet<N>>(r)),
          matmul(complexWeylMatrix<CJet<N>>(w), complexBoostMatrix<RJet<N>>(r))};
}

template <int N>
struct TwistingMap {
  enum class Source { WeylParameter, Dilaton };
  Source source = Source::WeylParameter;
  ScalarField<N> w;
  SmoothMap<Mat<RJet<N>>> tetrad;

  RJet<N> value(const ChartPoint& p) const {
    const RJet<N> v = w(p);
    if (!(v.value() > 0)) throw DegenerateField(source == Source::Dilaton ? "dilaton is not positive" : "Weyl parameter is not positive", p.x);
    return v;
  }
  Mat<RJet<N>> upsilon(const ChartPoint& p) const { return upsilonOf<N>(value(p), inverse(tetrad(p))); }
  GroupPair<RJet<N>> operator()(const ChartPoint& p) const { return twistingMatrices<N>(value(p), inverse(tetrad(p))); }

  GaugeMap<N> asGauge() const {
    const TwistingMap self = *this;
    return {Subgroup::General, [self](const ChartPoint& p) { return self(p); }};
  }
};

/// C(w) relative to the soldering form of `frame`.
template <int N>
TwistingMap<N> buildTwistingMap(ScalarField<N> w, const CartanConnection<N>& frame,
                                typename TwistingMap<N>::Source source = TwistingMap<N>::Source::WeylParameter) {
  return {source, std::move(w), [frame](const ChartPoint& p) { return frame.tetrad(p); }};
}

template <int N>
TwistingMap<N> buildTwistingMap(ScalarField<N> w, const Tetrad<N>& e,
                                typename TwistingMap<N>::Source source = TwistingMap<N>::Source::WeylParameter) {
  return {source, std::move(w), [e](const ChartPoint& p) { return e(p); }};
}

template <int N>
ScalarField<N> scalarField(const Expr& e) {
  return [e](const ChartPoint& p) { return e.evaluate<double, N>(p); };
}

/// phi = 1/sigma from the last tractor component.
template <int N>
RJet<N> dilatonOf(const Mat<RJet<N>>& tractor, const ChartPoint& p) {
  const RJet<N> sigma = tractor(5, 0);
  if (std::abs(sigma.value()) < 1e-14) throw DegenerateField("tractor sigma component vanishes", p.x);
  return RJet<N>(1.0) / sigma;
}

template <int N>
ScalarField<N> extractDilaton(const TractorField<N>& phi1) {
  return [phi1](const ChartPoint& p) { return dilatonOf<N>(phi1(p), p); };
}

template <int N>
RJet<N> positiveTwistParameter(const RJet<N>& w, const ChartPoint& p, const char* what) {
  if (!(w.value() > 0)) throw DegenerateField(what, p.x);
  return w;
}

/// C(phi) for the dilaton of the fields it acts on, relative to their own soldering form.
template <int N>
TwistingMap<N> dilatonTwistingMap(const FieldSet<N>& k1) {
  return buildTwistingMap<N>(extractDilaton<N>(k1.tractor()), k1.connection(), TwistingMap<N>::Source::Dilaton);
}

/// Transport by C(z) built on the soldering form of the fields being moved.
template <int N>
FieldSet<N> twistedTransport(const FieldSet<N>& f, const ScalarField<N>& z) {
  return transport<N>(f, FieldGauge<N>([z](const FieldValues<N>& v, const ChartPoint& p) {
                        const RJet<N> w = positiveTwistParameter<N>(z(p), p, "Weyl parameter is not positive");
                        return twistingMatrices<N>(w, inverse(CartanConnection<N>::tetradOf(v.connection, p)));
                      }),
                      f.stage());
}

/// Weyl dressing of K1-dressed fields by C(phi), phi = 1/sigma.
template <int N>
FieldSet<N> dressWeyl(const FieldSet<N>& k1) {
  if (k1.stage() != Stage::K1Dressed) throw std::invalid_argument("Weyl dressing expects K1-dressed fields");
  return FieldSet<N>(Stage::WeylDressed, [k1](const ChartPoint& p) {
    using RJ = RJet<N>;
    const FieldValues<N> v = k1(p);
    const RJ phi = positiveTwistParameter<N>(dilatonOf<N>(v.tractor, p), p, "dilaton is not positive");
    const Mat<RJ> E = inverse(CartanConnection<N>::tetradOf(v.connection, p));
    FieldValues<N> out = transportValues<N>(v, twistingMatrices<N>(phi, E));
    // Z(phi)^{-1} phi1 = (rho sigma, l, sigma/sigma) keeps the last entry exactly 1.
    const RJ sigma = v.tractor(5, 0);
    Mat<RJ> scaled = v.tractor;
    scaled(0, 0) = v.tractor(0, 0) * sigma;
    scaled(5, 0) = sigma / sigma;
    const Mat<RJ> r = upsilonOf<N>(phi, E) * RJ(RJ(-1.0) / phi);
    out.tractor = matmul(boostMatrix<RJ>(r), scaled);
    return out;
  });
}

/// Closed-form blocks of the Weyl-dressed connection in terms of the
/// K1-dressed one (assumed to have a vanishing a-block):
///   theta -> phi theta, A -> A1 + theta Y - Y^t theta^t,
///   P -> phi^{-1} (P1 + dY - Y A1 - (Y theta) Y + (Y^2 / 2) theta^t), a -> 0.
template <int N>
ConnectionBlocks<RJet<N>> explicitWeylDressedBlocks(const FormJet<RJet<N>>& w1, const RJet<N>& phi, const Mat<RJet<N>>& Y) {
  using RJ = RJet<N>;
  const auto b = blocksOf(w1);
  const Mat<RJ> eta = etaMatrix<RJ>();
  const FormJet<RJ> thetaT = rightMultiply(b.theta.transposed(), eta);  // theta^t = theta^T eta
  const Mat<RJ> Yt = matmul(eta, Mat<RJ>(Y.transpose()));               // Y^t = eta Y^T
  const RJ y2 = matmul(Y, Yt)(0, 0);

  ConnectionBlocks<RJ> out;
  out.a = FormJet<RJ>(1, 1, 1);
  out.theta = b.theta * phi;
  out.A = b.A + rightMultiply(b.theta, Y) - leftMultiply(Yt, thetaT);
  const FormJet<RJ> Ytheta = leftMultiply(Y, b.theta);  // scalar 1-form
  FormJet<RJ> P = b.P + differential(Y) - leftMultiply(Y, b.A) - rightMultiply(Ytheta, Y) + thetaT * RJ(y2 * 0.5);
  out.P = P * RJ(RJ(1.0) / phi);
  return out;
}

// ---------------------------------------------------------------------------
// Residual transformation laws.

/// Standard law: dressing commutes with a gauge map g once the dressed fields
/// are transported by g itself.
/// Twisted law (K1 stage under Weyl z): transported by C(z) instead.
/// Returns the worst pointwise difference over the samples.
template <int N>
double residualLaw(Stage stage, Subgroup subgroup, const FieldSet<N>& bare, const GaugeMap<N>& g, const Expr& logZ,
                   const std::vector<ChartPoint>& points) {
  const bool supported = subgroup == Subgroup::Lorentz || (stage == Stage::K1Dressed && subgroup == Subgroup::Weyl);
  if (!supported || stage == Stage::Bare || g.subgroup != subgroup)
    throw std::invalid_argument(std::string("no residual law for ") + stageName(stage) + " fields under " + subgroupName(subgroup));

  const FieldSet<N> k1 = dressK1(bare);
  const FieldSet<N> movedBare = transport(bare, g);
  FieldSet<N> lhs, rhs;
  if (stage == Stage::K1Dressed) {
    lhs = dressK1(movedBare);
    if (subgroup == Subgroup::Weyl)
      rhs = twistedTransport<N>(k1, [logZ](const ChartPoint& p) { return exp(logZ.evaluate<double, N>(p)); });
    else
      rhs = transport(k1, g);
  } else {
    lhs = dressWeyl(dressK1(movedBare));
    rhs = transport(dressWeyl(k1), g);
  }
  double worst = 0.0;
  for (const auto& p : points) worst = std::max(worst, fieldDifference(lhs, rhs, p));
  return worst;
}

}  // namespace cdress

#endif  // CDRESS_DRESSING_HPP
