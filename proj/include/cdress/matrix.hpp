#ifndef CDRESS_MATRIX_HPP
#define CDRESS_MATRIX_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "cdress/errors.hpp"
#include "cdress/jet.hpp"

namespace cdress {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Complex counterpart of a real scalar type (double or real jet).
template <typename R>
struct ComplexOfT {
  using type = std::complex<double>;
};
template <int N>
struct ComplexOfT<Jet<double, N>> {
  using type = Jet<std::complex<double>, N>;
};
template <typename R>
using ComplexOf = typename ComplexOfT<R>::type;

template <typename R>
ComplexOf<R> complexify(const R& r) {
  return toComplex(r);
}

template <typename R>
Mat<ComplexOf<R>> complexify(const Mat<R>& m) {
  Mat<ComplexOf<R>> r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) r(i) = toComplex(m(i));
  return r;
}

/// Conjugate transpose, entrywise conj for jets.
template <typename C>
Mat<C> adjoint(const Mat<C>& m) {
  Mat<C> r(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(j, i) = conj(m(i, j));
  return r;
}

/// Shape of matmul(a, b); throws on incompatible shapes.
inline std::pair<Eigen::Index, Eigen::Index> productShape(Eigen::Index ar, Eigen::Index ac, Eigen::Index br, Eigen::Index bc) {
  const bool aScalar = ar == 1 && ac == 1, bScalar = br == 1 && bc == 1;
  if (aScalar && !bScalar) return {br, bc};
  if (bScalar && !aScalar && ac != 1) return {ar, ac};
  if (ac != br) throw ShapeMismatch("matrix product: inner dimensions differ");
  return {ar, bc};
}

/// Matrix product for jet or plain matrices; 1x1 operands act as scalars.
template <typename S>
Mat<S> matmul(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() == 1 && a.cols() == 1 && !(b.rows() == 1 && b.cols() == 1)) {
    Mat<S> r(b.rows(), b.cols());
    for (Eigen::Index i = 0; i < b.size(); ++i) r(i) = a(0, 0) * b(i);
    return r;
  }
  if (b.rows() == 1 && b.cols() == 1 && !(a.rows() == 1 && a.cols() == 1) && a.cols() != 1) {
    Mat<S> r(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.size(); ++i) r(i) = a(i) * b(0, 0);
    return r;
  }
  if (a.cols() != b.rows()) throw ShapeMismatch("matrix product: inner dimensions differ");
  Mat<S> r(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      S acc = a(i, 0) * b(0, j);
      for (Eigen::Index k = 1; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  return r;
}

// ---------------------------------------------------------------------------
// Small dense linear algebra over jets (sizes <= 4).

template <typename S>
S determinant(const Mat<S>& m) {
  const int n = static_cast<int>(m.rows());
  if (n != m.cols() || n > 4) throw ShapeMismatch("determinant: square matrix of size <= 4 expected");
  if (n == 0) return S(1);
  std::array<int, 4> perm{0, 1, 2, 3};
  S total(0);
  bool first = true;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    S term = m(0, perm[0]);
    for (int i = 1; i < n; ++i) term = term * m(i, perm[i]);
    if (inv % 2) term = -term;
    total = first ? term : total + term;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.begin() + n));
  return total;
}

template <typename S>
Mat<S> submatrix(const Mat<S>& m, int rowMask, int colMask) {
  std::vector<int> rs, cs;
  for (int i = 0; i < m.rows(); ++i)
    if (rowMask & (1 << i)) rs.push_back(i);
  for (int j = 0; j < m.cols(); ++j)
    if (colMask & (1 << j)) cs.push_back(j);
  Mat<S> r(rs.size(), cs.size());
  for (size_t i = 0; i < rs.size(); ++i)
    for (size_t j = 0; j < cs.size(); ++j) r(i, j) = m(rs[i], cs[j]);
  return r;
}

/// Inverse by the adjugate; the caller checks the determinant is nonzero.
template <typename S>
Mat<S> inverse(const Mat<S>& m) {
  const int n = static_cast<int>(m.rows());
  const S det = determinant(m);
  const int all = (1 << n) - 1;
  Mat<S> r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S cof = n == 1 ? S(1) : determinant(submatrix(m, all & ~(1 << j), all & ~(1 << i)));
      if ((i + j) % 2) cof = -cof;
      r(i, j) = cof / det;
    }
  return r;
}

/// Max |entry value| over all components, requiring valid order-0 data.
template <typename S>
double maxAbsValue(const Mat<S>& m) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) r = std::max(r, std::abs(valueOf(m(i))));
  return r;
}

template <typename S>
double maxAbsDifference(const Mat<S>& a, const Mat<S>& b) {
  return maxAbsValue(Mat<S>(a - b));
}

template <typename S>
auto valuesOf(const Mat<S>& m) {
  using V = decltype(valueOf(m(0)));
  Eigen::Matrix<V, Eigen::Dynamic, Eigen::Dynamic> r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) r(i) = valueOf(m(i));
  return r;
}

inline const Eigen::Matrix4d& minkowski() {
  static const Eigen::Matrix4d eta = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
  return eta;
}

template <typename S>
Mat<S> etaMatrix() {
  Mat<S> eta = Mat<S>::Constant(4, 4, S(0));
  for (int a = 0; a < 4; ++a) eta(a, a) = S(minkowski()(a, a));
  return eta;
}

template <typename S>
Mat<S> identity(Eigen::Index n) {
  Mat<S> r = Mat<S>::Constant(n, n, S(0));
  for (Eigen::Index i = 0; i < n; ++i) r(i, i) = S(1);
  return r;
}

template <typename S>
Mat<S> zeros(Eigen::Index rows, Eigen::Index cols) {
  return Mat<S>::Constant(rows, cols, S(0));
}

/// Convert a plain matrix to exact constant jets (or keep as is).
template <typename S, typename V>
Mat<S> constantMatrix(const Eigen::MatrixBase<V>& m) {
  Mat<S> r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = S(m(i, j));
  return r;
}

}  // namespace cdress

#endif  // CDRESS_MATRIX_HPP
