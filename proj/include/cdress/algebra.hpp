#ifndef CDRESS_ALGEBRA_HPP
#define CDRESS_ALGEBRA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/LU>

#include "cdress/jet.hpp"
#include "cdress/matrix.hpp"

namespace cdress {

using cplx = std::complex<double>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using RowVector4d = Eigen::RowVector4d;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Group metric of SO(2,4) on R^6 = (rho, l, sigma).
template <typename S = double>
Mat<S> sigmaMetric() {
  Mat<S> m = zeros<S>(6, 6);
  m(0, 5) = S(-1);
  m(5, 0) = S(-1);
  for (int a = 0; a < 4; ++a) m(1 + a, 1 + a) = S(minkowski()(a, a));
  return m;
}

/// Group metric of SU(2,2) on C^4.
template <typename C = cplx>
Mat<C> sigmaBarMetric() {
  Mat<C> m = zeros<C>(4, 4);
  for (int i = 0; i < 2; ++i) {
    m(i, 2 + i) = C(1);
    m(2 + i, i) = C(1);
  }
  return m;
}

/// sigma_0 = 1 and the Pauli matrices.
inline const Matrix2c& pauli(int a) {
  static const std::array<Matrix2c, 4> s = [] {
    std::array<Matrix2c, 4> r;
    const cplx i(0, 1);
    r[0] << 1, 0, 0, 1;
    r[1] << 0, 1, 1, 0;
    r[2] << 0, -i, i, 0;
    r[3] << 1, 0, 0, -1;
    return r;
  }();
  return s.at(a);
}

/// x^a sigma_a.
inline Matrix2c vecToHermitian(const Eigen::Vector4d& x) {
  Matrix2c r = Matrix2c::Zero();
  for (int a = 0; a < 4; ++a) r += x(a) * pauli(a);
  return r;
}

/// scale * sum_a v_a sigma_a for a vector or covector of (jet) scalars.
template <typename R, typename V>
Mat<ComplexOf<R>> hermitianOf(const V& v, double scale) {
  using C = ComplexOf<R>;
  Mat<C> r = zeros<C>(2, 2);
  for (int a = 0; a < 4; ++a) {
    const C va = complexify(R(v(a)));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (pauli(a)(i, j) != cplx(0)) r(i, j) += va * (scale * pauli(a)(i, j));
  }
  return r;
}

// ---------------------------------------------------------------------------
// so(2,4)

/// Graded decomposition of an so(2,4) element.
struct LieElement {
  double epsilon = 0.0;
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  RowVector4d iota = RowVector4d::Zero();
  Eigen::Vector4d tau = Eigen::Vector4d::Zero();

  Matrix6d assembled() const {
    Matrix6d m = Matrix6d::Zero();
    const Eigen::Matrix4d& eta = minkowski();
    m(0, 0) = epsilon;
    m.block<1, 4>(0, 1) = iota;
    m.block<4, 1>(1, 0) = tau;
    m.block<4, 4>(1, 1) = s;
    m.block<4, 1>(1, 5) = eta * iota.transpose();
    m.block<1, 4>(5, 1) = tau.transpose() * eta;
    m(5, 5) = -epsilon;
    return m;
  }

  /// Read the graded parts off a 6x6 matrix (no validity check).
  static LieElement fromMatrix(const Matrix6d& m) {
    LieElement x;
    x.epsilon = m(0, 0);
    x.iota = m.block<1, 4>(0, 1);
    x.tau = m.block<4, 1>(1, 0);
    x.s = m.block<4, 4>(1, 1);
    return x;
  }

  LieElement gradeMinus1() const {
    LieElement x;
    x.tau = tau;
    return x;
  }
  LieElement grade0() const {
    LieElement x;
    x.epsilon = epsilon;
    x.s = s;
    return x;
  }
  LieElement gradePlus1() const {
    LieElement x;
    x.iota = iota;
    return x;
  }

  /// max |M^T Sigma + Sigma M| and max |s^T eta + eta s|.
  double so24Residual() const {
    const Matrix6d m = assembled();
    const Mat<double> sig = sigmaMetric();
    return (Mat<double>(m.transpose()) * sig + sig * Mat<double>(m)).cwiseAbs().maxCoeff();
  }
  double lorentzResidual() const {
    const Eigen::Matrix4d& eta = minkowski();
    return (s.transpose() * eta + eta * s).cwiseAbs().maxCoeff();
  }

  friend LieElement operator+(const LieElement& a, const LieElement& b) {
    LieElement r;
    r.epsilon = a.epsilon + b.epsilon;
    r.s = a.s + b.s;
    r.iota = a.iota + b.iota;
    r.tau = a.tau + b.tau;
    return r;
  }
};

inline LieElement bracket(const LieElement& x, const LieElement& y) {
  const Matrix6d a = x.assembled(), b = y.assembled();
  return LieElement::fromMatrix(a * b - b * a);
}

/// Basis generator of so(1,3): (G_ab)^c_d = eta^cc (delta_ca delta_db - delta_cb delta_da).
inline Eigen::Matrix4d lorentzGenerator(int a, int b) {
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  const Eigen::Matrix4d& eta = minkowski();
  g(a, b) = eta(a, a);
  g(b, a) = -eta(b, b);
  return g;
}

/// Pairs (a, b), a < b, indexing the six so(1,3) generators.
inline const std::array<std::pair<int, int>, 6>& lorentzPairs() {
  static const std::array<std::pair<int, int>, 6> p{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  return p;
}

namespace detail {

/// Real linear map b -> D(b) on sl(2,C): the differential of the spin cover,
/// D(b)^a_c = 1/2 tr(sigma_a (b sigma_c + sigma_c b^*)).
inline Eigen::Matrix4d coverDifferential(const Matrix2c& b) {
  Eigen::Matrix4d r;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c)
      r(a, c) = 0.5 * (pauli(a) * (b * pauli(c) + pauli(c) * b.adjoint())).trace().real();
  return r;
}

/// Images in sl(2,C) of the six Lorentz generators, solved once.
inline const std::array<Matrix2c, 6>& spinGeneratorImages() {
  static const std::array<Matrix2c, 6> images = [] {
    std::array<Matrix2c, 6> basis;
    for (int k = 0; k < 3; ++k) {
      basis[k] = pauli(k + 1);
      basis[3 + k] = cplx(0, 1) * pauli(k + 1);
    }
    Eigen::Matrix<double, 16, 6> d;
    for (int j = 0; j < 6; ++j) d.col(j) = Eigen::Map<const Eigen::Matrix<double, 16, 1>>(coverDifferential(basis[j]).data());
    const Eigen::FullPivLU<Eigen::Matrix<double, 16, 6>> lu(d);
    if (lu.rank() != 6) throw std::logic_error("spin cover differential is not injective");
    std::array<Matrix2c, 6> out;
    for (int g = 0; g < 6; ++g) {
      const auto [a, b] = lorentzPairs()[g];
      const Eigen::Matrix4d gen = lorentzGenerator(a, b);
      const Eigen::Matrix<double, 6, 1> coef = lu.solve(Eigen::Map<const Eigen::Matrix<double, 16, 1>>(gen.data()));
      if ((d * coef - Eigen::Map<const Eigen::Matrix<double, 16, 1>>(gen.data())).norm() > 1e-12)
        throw std::logic_error("Lorentz generator outside the image of the spin cover");
      out[g] = Matrix2c::Zero();
      for (int j = 0; j < 6; ++j) out[g] += coef(j) * basis[j];
    }
    return out;
  }();
  return images;
}

}  // namespace detail

/// sl(2,C) element covering the so(1,3) element s (s = D(sbar)).
template <typename R>
Mat<ComplexOf<R>> lorentzToSpinAlgebra(const Mat<R>& s) {
  using C = ComplexOf<R>;
  const Mat<R> eta = etaMatrix<R>();
  Mat<C> r = zeros<C>(2, 2);
  const auto& images = detail::spinGeneratorImages();
  for (int g = 0; g < 6; ++g) {
    const auto [a, b] = lorentzPairs()[g];
    const C omega = complexify(R(eta(a, a) * s(a, b)));  // (eta s)_ab
    if constexpr (IsJet<R>::value)
      if (omega.isExactZero()) continue;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (images[g](i, j) != cplx(0)) r(i, j) += omega * images[g](i, j);
  }
  return r;
}

/// Image of a (possibly jet-valued) 6x6 so(2,4) matrix in su(2,2):
/// (-(sbar^* - eps/2), -i iotabar; i taubar, sbar - eps/2), with
/// taubar = tau^a sigma_a / sqrt2 and iotabar = iota_a sigma_a / sqrt2.
template <typename R>
Mat<ComplexOf<R>> algebraIsoMatrix(const Mat<R>& m) {
  using C = ComplexOf<R>;
  const R eps = m(0, 0);
  const Mat<R> s = m.block(1, 1, 4, 4);
  const Mat<C> sbar = lorentzToSpinAlgebra<R>(s);
  const Eigen::Matrix<R, 1, 4> iota = m.block(0, 1, 1, 4);
  const Eigen::Matrix<R, 4, 1> tau = m.block(1, 0, 4, 1);
  const Mat<C> iotabar = hermitianOf<R>(iota, kInvSqrt2);
  const Mat<C> taubar = hermitianOf<R>(tau, kInvSqrt2);
  const C half = complexify(R(eps * 0.5));
  const cplx i(0, 1);
  Mat<C> r(4, 4);
  const Mat<C> sbarAdj = adjoint(sbar);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const C delta = a == b ? half : C(0);
      r(a, b) = -(sbarAdj(a, b) - delta);
      r(a, 2 + b) = iotabar(a, b) * (-i);
      r(2 + a, b) = taubar(a, b) * i;
      r(2 + a, 2 + b) = sbar(a, b) - delta;
    }
  return r;
}

inline Matrix4c algebraIso(const LieElement& x) {
  return algebraIsoMatrix<double>(Mat<double>(x.assembled()));
}

/// Spin(1,3) = SL(2,C) -> SO(1,3): S^a_b = 1/2 Re tr(sigma_a Sbar sigma_b Sbar^*).
template <typename C>
auto spinToLorentzMatrix(const Mat<C>& sbar) {
  using R = decltype(realPart(std::declval<C>()));
  const Mat<C> adj = adjoint(sbar);
  Mat<R> r(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Mat<C> prod = matmul(matmul(matmul(constantMatrix<C>(pauli(a)), sbar), constantMatrix<C>(pauli(b))), adj);
      r(a, b) = realPart(C((prod(0, 0) + prod(1, 1)) * 0.5));
    }
  return r;
}

inline Eigen::Matrix4d spinToLorentz(const Matrix2c& sbar) {
  if (std::abs(sbar.determinant() - cplx(1)) > 1e-12)
    throw std::invalid_argument("spinToLorentz: determinant is not 1");
  return spinToLorentzMatrix<cplx>(Mat<cplx>(sbar));
}

// ---------------------------------------------------------------------------
// The group H = K0 x| K1 and its complex cover.

/// diag(z, 1_4, 1/z).
template <typename R>
Mat<R> weylMatrix(const R& z) {
  Mat<R> m = identity<R>(6);
  m(0, 0) = z;
  m(5, 5) = R(1.0) / z;
  return m;
}

/// blockdiag(1, S, 1).
template <typename R>
Mat<R> lorentzMatrix(const Mat<R>& s) {
  Mat<R> m = identity<R>(6);
  m.block(1, 1, 4, 4) = s;
  return m;
}

/// (1, r, r r^t / 2; 0, 1, r^t; 0, 0, 1) with r^t = eta r^T.
template <typename R, typename V>
Mat<R> boostMatrix(const V& r) {
  Mat<R> m = identity<R>(6);
  R sq(0);
  for (int a = 0; a < 4; ++a) {
    const R ra = r(a);
    m(0, 1 + a) = ra;
    m(1 + a, 5) = ra * minkowski()(a, a);
    sq = sq + ra * ra * minkowski()(a, a);
  }
  m(0, 5) = sq * 0.5;
  return m;
}

/// Z(z) L(S) K1(r).
template <typename R, typename V>
Mat<R> hMatrix(const R& z, const Mat<R>& s, const V& r) {
  return matmul(matmul(weylMatrix<R>(z), lorentzMatrix<R>(s)), boostMatrix<R>(r));
}

/// M^{-1} = Sigma M^T Sigma for M preserving Sigma.
template <typename R>
Mat<R> groupInverse(const Mat<R>& m) {
  const Mat<R> sig = sigmaMetric<R>();
  return matmul(matmul(sig, Mat<R>(m.transpose())), sig);
}

/// M^{-1} = SigmaBar M^* SigmaBar for M in SU(2,2).
template <typename C>
Mat<C> complexGroupInverse(const Mat<C>& m) {
  const Mat<C> sig = sigmaBarMetric<C>();
  return matmul(matmul(sig, adjoint(m)), sig);
}

/// diag(sqrt z 1_2, 1/sqrt z 1_2).
template <typename C, typename R>
Mat<C> complexWeylMatrix(const R& z) {
  Mat<C> m = zeros<C>(4, 4);
  R root;
  if constexpr (IsJet<R>::value)
    root = sqrt(z);
  else
    root = std::sqrt(z);
  const C c = complexify(root);
  const C ic = complexify(R(R(1.0) / root));
  m(0, 0) = c;
  m(1, 1) = c;
  m(2, 2) = ic;
  m(3, 3) = ic;
  return m;
}

/// blockdiag(Sbar^{-1*}, Sbar) for Sbar in SL(2,C).
template <typename C>
Mat<C> complexLorentzMatrix(const Mat<C>& sbar) {
  Mat<C> inv(2, 2);  // adjugate, det = 1
  inv(0, 0) = sbar(1, 1);
  inv(1, 1) = sbar(0, 0);
  inv(0, 1) = -sbar(0, 1);
  inv(1, 0) = -sbar(1, 0);
  Mat<C> m = zeros<C>(4, 4);
  m.block(0, 0, 2, 2) = adjoint(inv);
  m.block(2, 2, 2, 2) = sbar;
  return m;
}

/// (1_2, -i rbar; 0, 1_2) with rbar = r_a sigma_a / sqrt2.
template <typename R, typename V>
Mat<ComplexOf<R>> complexBoostMatrix(const V& r) {
  using C = ComplexOf<R>;
  Mat<C> m = identity<C>(4);
  const Mat<C> rbar = hermitianOf<R>(r, kInvSqrt2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, 2 + j) = rbar(i, j) * cplx(0, -1);
  return m;
}

template <typename R, typename V>
Mat<ComplexOf<R>> complexHMatrix(const R& z, const Mat<ComplexOf<R>>& sbar, const V& r) {
  using C = ComplexOf<R>;
  return matmul(matmul(complexWeylMatrix<C>(z), complexLorentzMatrix<C>(sbar)), complexBoostMatrix<R>(r));
}

/// Pointwise element of H together with its lift to SU(2,2).
template <typename R>
struct GroupPair {
  Mat<R> real;
  Mat<ComplexOf<R>> complex;

  GroupPair inverse() const { return {groupInverse(real), complexGroupInverse(complex)}; }
  friend GroupPair operator*(const GroupPair& a, const GroupPair& b) {
    return {matmul(a.real, b.real), matmul(a.complex, b.complex)};
  }
  static GroupPair identityElement() { return {identity<R>(6), identity<ComplexOf<R>>(4)}; }
};

/// Plain-valued group element with its subgroup tag.
struct GroupElement {
  enum class Kind { WeylZ, LorentzS, BoostK1, General };
  Kind kind = Kind::General;
  Matrix6d assembled = Matrix6d::Identity();

  static GroupElement weyl(double z) {
    if (!(z > 0)) throw std::invalid_argument("Weyl parameter must be positive");
    return {Kind::WeylZ, Matrix6d(weylMatrix<double>(z))};
  }
  static GroupElement lorentz(const Eigen::Matrix4d& s) { return {Kind::LorentzS, Matrix6d(lorentzMatrix<double>(Mat<double>(s)))}; }
  static GroupElement boost(const RowVector4d& r) { return {Kind::BoostK1, Matrix6d(boostMatrix<double>(r))}; }
  static GroupElement general(double z, const Eigen::Matrix4d& s, const RowVector4d& r) {
    if (!(z > 0)) throw std::invalid_argument("Weyl parameter must be positive");
    return {Kind::General, Matrix6d(hMatrix<double>(z, Mat<double>(s), r))};
  }

  /// max |M^T Sigma M - Sigma|.
  double metricResidual() const {
    const Mat<double> sig = sigmaMetric();
    return (Mat<double>(assembled.transpose()) * sig * Mat<double>(assembled) - sig).cwiseAbs().maxCoeff();
  }
};

/// max |M^* SigmaBar M - SigmaBar|.
inline double complexMetricResidual(const Matrix4c& m) {
  const Mat<cplx> sig = sigmaBarMetric();
  return (Mat<cplx>(m.adjoint()) * sig * Mat<cplx>(m) - sig).cwiseAbs().maxCoeff();
}

/// max |X^* SigmaBar + SigmaBar X| and |tr X|.
inline double su22Residual(const Matrix4c& x) {
  const Mat<cplx> sig = sigmaBarMetric();
  return std::max((Mat<cplx>(x.adjoint()) * sig + sig * Mat<cplx>(x)).cwiseAbs().maxCoeff(), std::abs(x.trace()));
}

/// SL(2,C) element (1 + X) / sqrt(det(1 + X)), X = sum_k c_k sigma_k with
/// c_k = (b_k - i w_k) / 2 from boost parameters b and rotation parameters w.
template <typename C>
Mat<C> spinFromParameters(const std::array<C, 3>& boost, const std::array<C, 3>& rotation) {
  Mat<C> x = identity<C>(2);
  C cc(0);
  for (int k = 0; k < 3; ++k) {
    const C ck = (boost[k] - rotation[k] * cplx(0, 1)) * 0.5;
    cc = cc + ck * ck;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (pauli(k + 1)(i, j) != cplx(0)) x(i, j) += ck * pauli(k + 1)(i, j);
  }
  C det = C(1.0) - cc;
  C norm;
  if constexpr (IsJet<C>::value)
    norm = pow(det, cplx(-0.5));
  else
    norm = std::pow(det, cplx(-0.5));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = x(i) * norm;
  return x;
}

}  // namespace cdress

#endif  // CDRESS_ALGEBRA_HPP
