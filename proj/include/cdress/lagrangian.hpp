#ifndef CDRESS_LAGRANGIAN_HPP
#define CDRESS_LAGRANGIAN_HPP

#include <cmath>
#include <optional>
#include <stdexcept>

#include "cdress/dressing.hpp"
#include "cdress/spinor.hpp"

namespace cdress {

struct LagrangianParams {
  double alpha = 0.0;
  double beta = 1.0;

  void validate() const {
    if (!(beta > 0)) throw std::invalid_argument("potential coefficient beta must be positive");
  }
};

using Tractor6 = Eigen::Matrix<double, 6, 1>;

/// <phi, phi> = phi^T Sigma phi = l eta l - 2 rho sigma.
inline double tractorNorm(const Tractor6& phi) { return phi.dot(Eigen::MatrixXd(sigmaMetric<double>()) * phi); }

/// alpha t + beta t^2, t = <phi, phi> (coefficient of the volume form).
inline double potential(const Tractor6& phi, const LagrangianParams& p) {
  const double t = tractorNorm(phi);
  return p.alpha * t + p.beta * t * t;
}

/// dV = 2 (alpha + 2 beta t) phi^T Sigma.
inline Eigen::Matrix<double, 1, 6> potentialDifferential(const Tractor6& phi, const LagrangianParams& p) {
  const double t = tractorNorm(phi);
  return 2.0 * (p.alpha + 2.0 * p.beta * t) * (Eigen::MatrixXd(sigmaMetric<double>()) * phi).transpose();
}

struct PotentialReport {
  double shell = 0.0;             // <phi0, phi0> = -alpha / (2 beta)
  std::optional<double> mass;     // sqrt of the shell value when it is positive
  Tractor6 representative;        // l = 0, sigma = 1, rho = alpha / (4 beta)
  double minimumValue = 0.0;      // -alpha^2 / (4 beta)
};

inline PotentialReport vevMass(const LagrangianParams& p) {
  p.validate();
  PotentialReport r;
  r.shell = -p.alpha / (2.0 * p.beta);
  if (p.alpha < 0) r.mass = std::sqrt(r.shell);
  r.representative = Tractor6::Zero();
  r.representative(0) = p.alpha / (4.0 * p.beta);
  r.representative(5) = 1.0;
  r.minimumValue = -p.alpha * p.alpha / (4.0 * p.beta);
  return r;
}

// ---------------------------------------------------------------------------
// Densities. Every term is the d^4x coefficient of a 4-form at the point.

struct DensityTerms {
  double yangMills = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;  // V, entering with a minus sign
  cplx dirac = 0.0;
  double yukawa = 0.0;

  /// Real density; the imaginary part of the Dirac pairing is reported, not summed.
  double total() const { return yangMills + kinetic - potential + dirac.real() + yukawa; }
};

template <typename S>
S topComponent(const FormJet<S>& w) {
  if (w.degree() != kChartDim || w.rows() != 1 || w.cols() != 1) throw ShapeMismatch("expected a scalar 4-form");
  return w[0](0, 0);
}

/// 1/2 tr(Omega ^ *Omega).
template <typename S, typename R>
double yangMillsTerm(const FormJet<S>& omega, const MetricData<R>& h) {
  return 0.5 * valueOf(topComponent(trace(wedge(omega, hodgeStar(omega, h)))));
}

/// (D phi)^T Sigma ^ *D phi.
template <typename S, typename R>
double kineticTerm(const FormJet<S>& Dphi, const MetricData<R>& h) {
  const FormJet<S> row = rightMultiply(Dphi.transposed(), sigmaMetric<S>());
  return valueOf(topComponent(wedge(row, hodgeStar(Dphi, h))));
}

/// psi^* SigmaBar (Gamma ^ *Dbar psi).
template <typename C, typename R>
cplx diracTerm(const Mat<C>& psi, const FormJet<C>& gammaForm, const FormJet<C>& Dpsi, const MetricData<R>& h) {
  return valueOf(topComponent(leftMultiply(diracAdjoint(psi), wedge(gammaForm, hodgeStar(Dpsi, h)))));
}

/// -sqrt<phi,phi> psi^* SigmaBar psi sqrt|h|; undefined for <phi,phi> < 0.
inline double yukawaTerm(const Tractor6& phi, const Eigen::Vector4cd& psi, double sqrtDetH, const ChartPoint& p) {
  const double t = tractorNorm(phi);
  if (t < 0) throw DegenerateField("Yukawa term undefined: <phi,phi> < 0", p.x);
  return -std::sqrt(t) * (diracAdjoint(psi) * psi)(0, 0).real() * sqrtDetH;
}

/// All terms for one stage of fields. `gammaForm` is the gamma 1-form in the
/// frame of that stage and `h` the Hodge metric shared by all stages.
template <int N>
DensityTerms densityTerms(const FieldValues<N>& v, const FormJet<CJet<N>>& gammaForm, const MetricData<RJet<N>>& h,
                          const LagrangianParams& params, const ChartPoint& p) {
  DensityTerms t;
  const double sqrtDetH = valueOf(h.sqrtAbsDet);
  t.yangMills = yangMillsTerm(curvatureOf(v.connection).omega, h);
  t.kinetic = kineticTerm(covariantDerivative(v.tractor, v.connection), h);
  const Tractor6 phi = valuesOf(v.tractor);
  t.potential = potential(phi, params) * sqrtDetH;
  const FormJet<CJet<N>> Dpsi = covariantDerivative(v.twistor, complexConnection(v.connection));
  t.dirac = diracTerm(v.twistor, gammaForm, Dpsi, h);
  t.yukawa = yukawaTerm(phi, valuesOf(v.twistor), sqrtDetH, p);
  return t;
}

struct StageDensities {
  DensityTerms bare, k1, weyl;

  double maxStageDelta() const {
    const double a = bare.total(), b = k1.total(), c = weyl.total();
    double d = std::max({std::abs(a - b), std::abs(b - c), std::abs(a - c)});
    d = std::max({d, std::abs(bare.dirac.imag() - k1.dirac.imag()), std::abs(k1.dirac.imag() - weyl.dirac.imag())});
    return d;
  }
};

namespace detail {

template <typename C>
FormJet<C> conjugateForm(const FormJet<C>& w, const Mat<C>& g, const Mat<C>& gInverse) {
  return leftMultiply(g, rightMultiply(w, gInverse));
}

}  // namespace detail

/// Densities of the bare, K1-dressed and Weyl-dressed fields at p. The Hodge
/// star uses the dressed metric phi^2 g throughout; the gamma 1-form is
/// gamma_a theta^a of the fully dressed soldering form, carried back to the
/// earlier stages by the complex dressing matrices.
template <int N>
StageDensities lagrangianStages(const FieldSet<N>& bare, const LagrangianParams& params, const ChartPoint& p) {
  using RJ = RJet<N>;
  using CJ = CJet<N>;
  params.validate();
  const FieldValues<N> v0 = bare(p);
  const GroupPair<RJ> u = k1DressingGauge<N>()(v0, p);
  const FieldValues<N> v1 = transportValues<N>(v0, u);
  const FieldValues<N> v2 = dressWeyl(FieldSet<N>(Stage::K1Dressed, [v1](const ChartPoint&) { return v1; }))(p);

  const RJ phi = dilatonOf<N>(v1.tractor, p);
  const GroupPair<RJ> c = twistingMatrices<N>(phi, inverse(CartanConnection<N>::tetradOf(v1.connection, p)));

  const Mat<RJ> e2 = CartanConnection<N>::tetradOf(v2.connection, p);
  const MetricData<RJ> h = MetricData<RJ>::from(Tetrad<N>::inducedMetricOf(e2));
  const FormJet<CJ> gamma2 = curvedGamma<N>(e2);
  const FormJet<CJ> gamma1 = detail::conjugateForm(gamma2, c.complex, complexGroupInverse(c.complex));
  const FormJet<CJ> gamma0 = detail::conjugateForm(gamma1, u.complex, complexGroupInverse(u.complex));

  StageDensities s;
  s.bare = densityTerms<N>(v0, gamma0, h, params, p);
  s.k1 = densityTerms<N>(v1, gamma1, h, params, p);
  s.weyl = densityTerms<N>(v2, gamma2, h, params, p);
  return s;
}

}  // namespace cdress

#endif  // CDRESS_LAGRANGIAN_HPP
