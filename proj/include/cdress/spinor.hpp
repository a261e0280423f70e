#ifndef CDRESS_SPINOR_HPP
#define CDRESS_SPINOR_HPP

#include <array>

#include "cdress/algebra.hpp"
#include "cdress/cartan.hpp"
#include "cdress/forms.hpp"

namespace cdress {

/// Block partner of sigma_a in gamma_a: sigmaTilde_0 = sigma_0, sigmaTilde_k = -sigma_k.
inline Matrix2c sigmaTilde(int a) { return a == 0 ? pauli(0) : Matrix2c(-pauli(a)); }

/// Chiral-basis gamma_a = (0, sigmaTilde_a; sigma_a, 0).
inline const Matrix4c& gamma(int a) {
  static const std::array<Matrix4c, 4> g = [] {
    std::array<Matrix4c, 4> out;
    for (int b = 0; b < 4; ++b) {
      out[b].setZero();
      out[b].block<2, 2>(0, 2) = sigmaTilde(b);
      out[b].block<2, 2>(2, 0) = pauli(b);
    }
    return out;
  }();
  return g.at(a);
}

/// gamma^a = eta^{ab} gamma_b.
inline Matrix4c gammaUpper(int a) { return minkowski()(a, a) * gamma(a); }

/// gamma_5 = i gamma_0 gamma_1 gamma_2 gamma_3.
inline Matrix4c gamma5() { return cplx(0, 1) * gamma(0) * gamma(1) * gamma(2) * gamma(3); }

inline Matrix4c projectLeft() { return 0.5 * (Matrix4c::Identity() + gamma5()); }
inline Matrix4c projectRight() { return 0.5 * (Matrix4c::Identity() - gamma5()); }

/// (i/sqrt2) x^a gamma_a.
inline Matrix4c embedVector(const Eigen::Vector4d& x) {
  Matrix4c m = Matrix4c::Zero();
  for (int a = 0; a < 4; ++a) m += x(a) * gamma(a);
  return cplx(0, kInvSqrt2) * m;
}

/// [gamma_a, gamma_b] / 2.
inline Matrix4c spinOperator(int a, int b) { return 0.5 * (gamma(a) * gamma(b) - gamma(b) * gamma(a)); }

/// gamma_a e^a_mu as a matrix-valued 1-form.
template <int N>
FormJet<CJet<N>> curvedGamma(const Mat<RJet<N>>& e) {
  FormJet<CJet<N>> g(1, 4, 4);
  for (int mu = 0; mu < kChartDim; ++mu) {
    Mat<CJet<N>> m = zeros<CJet<N>>(4, 4);
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (gamma(a)(i, j) != cplx(0)) m(i, j) = m(i, j) + toComplex(e(a, mu)) * gamma(a)(i, j);
    g[mu] = m;
  }
  return g;
}

/// psi^* SigmaBar as a row.
template <typename C>
Mat<C> diracAdjoint(const Mat<C>& psi) {
  return matmul(adjoint(psi), sigmaBarMetric<C>());
}

inline Eigen::RowVector4cd diracAdjoint(const Eigen::Vector4cd& psi) { return psi.adjoint() * gamma(0); }

/// Spin connection (-Abar^*, 0; 0, Abar) of a Lorentz connection 1-form A.
template <typename R>
FormJet<ComplexOf<R>> spinorConnection(const FormJet<R>& A) {
  using C = ComplexOf<R>;
  return A.mapComponents([](const Mat<R>& a) {
    const Mat<C> s = lorentzToSpinAlgebra<R>(a);
    Mat<C> m = zeros<C>(4, 4);
    m.block(0, 0, 2, 2) = -adjoint(s);
    m.block(2, 2, 2, 2) = s;
    return m;
  });
}

/// D psi = d psi + (-Abar^*, 0; 0, Abar) psi.
template <int N>
FormJet<CJet<N>> spinorDerivative(const Mat<CJet<N>>& psi, const FormJet<RJet<N>>& A) {
  return covariantDerivative(psi, spinorConnection(A));
}

/// Both evaluations of the Dirac 4-form: gamma ^ *_g D psi and gamma^mu D_mu psi vol.
template <int N>
struct DiracForms {
  FormJet<CJet<N>> wedgeForm;
  FormJet<CJet<N>> contractedForm;
};

template <int N>
DiracForms<N> diracOperator(const Mat<CJet<N>>& psi, const FormJet<RJet<N>>& A, const Mat<RJet<N>>& e) {
  using CJ = CJet<N>;
  const Mat<RJet<N>> g = Tetrad<N>::inducedMetricOf(e);
  const MetricData<RJet<N>> md = MetricData<RJet<N>>::from(g);
  const FormJet<CJ> gam = curvedGamma<N>(e);
  const FormJet<CJ> D = spinorDerivative<N>(psi, A);

  DiracForms<N> out;
  out.wedgeForm = wedge(gam, hodgeStar(D, md));

  const Mat<RJet<N>> gi = inverse(g);
  Mat<CJ> acc = zeros<CJ>(4, 1);
  for (int mu = 0; mu < kChartDim; ++mu)
    for (int nu = 0; nu < kChartDim; ++nu) acc = acc + matmul(gam[nu], D[mu]) * toComplex(gi(mu, nu));
  out.contractedForm = FormJet<CJ>(kChartDim, 4, 1);
  out.contractedForm[0] = acc * toComplex(detail::sqrtAbs(determinant(g)));
  return out;
}

/// Pieces of the tractor-twistor coupling: phibar = (rho 1, (i/sqrt2) l^a sigmaTilde_a; (i/sqrt2) l^a sigma_a, 1).
struct SmeTerms {
  Matrix4c phiBar;
  cplx pairing;      // -<psi, phibar psi>
  cplx contraction;  // (-i/sqrt2) l^a psibar gamma_a psi
};

/// phi = (rho, l^0..l^3, sigma) with sigma expected to be 1 after dressing.
inline SmeTerms smeTerm(const Eigen::Matrix<double, 6, 1>& phi, const Eigen::Vector4cd& psi) {
  SmeTerms t;
  const Eigen::Vector4d l = phi.segment<4>(1);
  t.phiBar = embedVector(l);
  t.phiBar.block<2, 2>(0, 0) = phi(0) * Matrix2c::Identity();
  t.phiBar.block<2, 2>(2, 2) = Matrix2c::Identity();
  const Eigen::RowVector4cd bar = diracAdjoint(psi);
  t.pairing = -(bar * t.phiBar * psi)(0, 0);
  cplx c = 0;
  for (int a = 0; a < 4; ++a) c += l(a) * (bar * gamma(a) * psi)(0, 0);
  t.contraction = cplx(0, -kInvSqrt2) * c;
  return t;
}

}  // namespace cdress

#endif  // CDRESS_SPINOR_HPP
