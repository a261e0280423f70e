#ifndef CDRESS_FORMS_HPP
#define CDRESS_FORMS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cdress/errors.hpp"
#include "cdress/jet.hpp"
#include "cdress/matrix.hpp"

namespace cdress {

struct ChartPoint {
  std::array<double, kChartDim> x{};

  double operator[](int mu) const { return x[mu]; }
};

template <typename T, int N>
Jet<T, N> coordinateJet(const ChartPoint& p, int mu) {
  return Jet<T, N>::variable(p[mu], mu);
}

// ---------------------------------------------------------------------------
// Index sets. An increasing multi-index (mu_1 < ... < mu_p) is a 4-bit mask;
// components of a p-form are stored in lexicographic order of these tuples.

namespace detail {

struct IndexTables {
  std::array<std::vector<int>, kChartDim + 1> masks;  // per degree, lexicographic
  std::array<int, 16> position{};                     // position of a mask within its degree
  std::array<int, 16> degree{};

  IndexTables() {
    for (int p = 0; p <= kChartDim; ++p) {
      std::vector<std::vector<int>> tuples;
      std::vector<int> sel(kChartDim, 0);
      std::fill(sel.begin(), sel.begin() + p, 1);
      do {
        std::vector<int> t;
        for (int i = 0; i < kChartDim; ++i)
          if (sel[i]) t.push_back(i);
        tuples.push_back(t);
      } while (std::prev_permutation(sel.begin(), sel.end()));
      std::sort(tuples.begin(), tuples.end());
      for (const auto& t : tuples) {
        int m = 0;
        for (int i : t) m |= 1 << i;
        position[m] = static_cast<int>(masks[p].size());
        degree[m] = p;
        masks[p].push_back(m);
      }
    }
  }
};

inline const IndexTables& indexTables() {
  static const IndexTables t;
  return t;
}

inline int popcount(int m) { return __builtin_popcount(static_cast<unsigned>(m)); }

/// Sign of the shuffle that sorts the concatenation (J, K) of disjoint sets.
inline int shuffleSign(int j, int k) {
  int inversions = 0;
  for (int a = 0; a < kChartDim; ++a)
    if (j & (1 << a))
      for (int b = 0; b < a; ++b)
        if (k & (1 << b)) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace detail

inline int formComponentCount(int degree) { return binomial(kChartDim, degree); }

inline const std::vector<int>& indexMasks(int degree) { return detail::indexTables().masks[degree]; }

// ---------------------------------------------------------------------------

/// Matrix-valued differential form of degree p on the chart, held as the jet
/// of each component at one point. Only increasing index tuples are stored,
/// so antisymmetry is structural.
template <typename S>
class FormJet {
 public:
  using Scalar = S;
  using Matrix = Mat<S>;

  FormJet() : FormJet(0, 1, 1) {}
  FormJet(int degree, Eigen::Index rows, Eigen::Index cols) : degree_(degree), rows_(rows), cols_(cols) {
    if (degree < 0 || degree > kChartDim) throw std::invalid_argument("form degree out of range");
    comps_.assign(formComponentCount(degree), Matrix::Constant(rows, cols, S(0)));
  }

  static FormJet zero(int degree, Eigen::Index rows, Eigen::Index cols) { return FormJet(degree, rows, cols); }

  static FormJet scalar(const S& s) {
    FormJet f(0, 1, 1);
    f.comps_[0](0, 0) = s;
    return f;
  }

  static FormJet fromValue(Matrix value) {
    FormJet f(0, value.rows(), value.cols());
    f.comps_[0] = std::move(value);
    return f;
  }

  /// 1-form from its four coordinate components.
  static FormJet oneForm(const std::array<Matrix, kChartDim>& components) {
    FormJet f(1, components[0].rows(), components[0].cols());
    for (int mu = 0; mu < kChartDim; ++mu) f.comps_[mu] = components[mu];
    return f;
  }

  int degree() const { return degree_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  int size() const { return static_cast<int>(comps_.size()); }

  Matrix& operator[](int k) { return comps_[k]; }
  const Matrix& operator[](int k) const { return comps_[k]; }

  /// Component by index mask (bit mu set for each index in the tuple).
  Matrix& byMask(int mask) { return comps_[detail::indexTables().position[mask]]; }
  const Matrix& byMask(int mask) const { return comps_[detail::indexTables().position[mask]]; }

  /// Value of a 0-form.
  const Matrix& value() const { return comps_[0]; }

  FormJet block(Eigen::Index r, Eigen::Index c, Eigen::Index nr, Eigen::Index nc) const {
    FormJet f(degree_, nr, nc);
    for (int k = 0; k < size(); ++k) f.comps_[k] = comps_[k].block(r, c, nr, nc);
    return f;
  }

  void setBlock(Eigen::Index r, Eigen::Index c, const FormJet& b) {
    if (b.degree_ != degree_) throw ShapeMismatch("setBlock: degree mismatch");
    for (int k = 0; k < size(); ++k) comps_[k].block(r, c, b.rows_, b.cols_) = b.comps_[k];
  }

  FormJet transposed() const {
    FormJet f(degree_, cols_, rows_);
    for (int k = 0; k < size(); ++k) f.comps_[k] = comps_[k].transpose();
    return f;
  }

  /// Apply a matrix -> matrix map to every component.
  template <typename F>
  auto mapComponents(F&& fn) const {
    using R = typename std::decay_t<decltype(fn(comps_[0]))>::Scalar;
    const auto first = fn(comps_[0]);
    FormJet<R> f(degree_, first.rows(), first.cols());
    f[0] = first;
    for (int k = 1; k < size(); ++k) f[k] = fn(comps_[k]);
    return f;
  }

  FormJet& operator+=(const FormJet& o) {
    checkSame(o);
    for (int k = 0; k < size(); ++k) comps_[k] += o.comps_[k];
    return *this;
  }
  FormJet& operator-=(const FormJet& o) {
    checkSame(o);
    for (int k = 0; k < size(); ++k) comps_[k] -= o.comps_[k];
    return *this;
  }
  friend FormJet operator+(FormJet a, const FormJet& b) { return a += b; }
  friend FormJet operator-(FormJet a, const FormJet& b) { return a -= b; }
  FormJet operator-() const {
    FormJet f = *this;
    for (auto& c : f.comps_) c = -c;
    return f;
  }
  friend FormJet operator*(const S& s, FormJet f) {
    for (auto& c : f.comps_) c *= s;
    return f;
  }
  friend FormJet operator*(FormJet f, const S& s) { return s * std::move(f); }

 private:
  void checkSame(const FormJet& o) const {
    if (o.degree_ != degree_ || o.rows_ != rows_ || o.cols_ != cols_)
      throw ShapeMismatch("form sum: degree or value shape mismatch");
  }

  int degree_;
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<Matrix> comps_;
};

template <typename S>
Mat<S> derivativeOf(const Mat<S>& m, int mu) {
  Mat<S> r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) r(i) = m(i).derivative(mu);
  return r;
}

/// Exterior derivative, (d w)_I = sum_k (-1)^k d_{I_k} w_{I \ I_k}.
template <typename S>
FormJet<S> exteriorDerivative(const FormJet<S>& w) {
  if (w.degree() >= kChartDim) throw std::invalid_argument("exterior derivative of a top-degree form");
  const int p = w.degree() + 1;
  FormJet<S> r(p, w.rows(), w.cols());
  const auto& masks = indexMasks(p);
  for (int k = 0; k < static_cast<int>(masks.size()); ++k) {
    const int m = masks[k];
    int pos = 0;
    bool first = true;
    for (int mu = 0; mu < kChartDim; ++mu) {
      if (!(m & (1 << mu))) continue;
      Mat<S> term = derivativeOf(w.byMask(m & ~(1 << mu)), mu);
      if (pos % 2 == 1) term = -term;
      if (first)
        r[k] = term;
      else
        r[k] += term;
      first = false;
      ++pos;
    }
  }
  return r;
}

template <typename S>
FormJet<S> d(const FormJet<S>& w) {
  return exteriorDerivative(w);
}

/// Wedge product with matrix multiplication on values. A 1x1-valued operand
/// acts as a scalar form.
template <typename S>
FormJet<S> wedge(const FormJet<S>& w, const FormJet<S>& c) {
  const int p = w.degree() + c.degree();
  if (p > kChartDim) throw std::invalid_argument("wedge: total degree exceeds chart dimension");
  const auto [rows, cols] = productShape(w.rows(), w.cols(), c.rows(), c.cols());
  FormJet<S> r(p, rows, cols);
  std::vector<bool> touched(r.size(), false);
  for (int j : indexMasks(w.degree()))
    for (int k : indexMasks(c.degree())) {
      if (j & k) continue;
      const int pos = detail::indexTables().position[j | k];
      Mat<S> term = matmul(w.byMask(j), c.byMask(k));
      if (detail::shuffleSign(j, k) < 0) term = -term;
      if (touched[pos])
        r[pos] += term;
      else
        r[pos] = std::move(term);
      touched[pos] = true;
    }
  return r;
}

/// Left/right multiplication by a point-dependent matrix (a 0-form).
template <typename S>
FormJet<S> leftMultiply(const Mat<S>& m, const FormJet<S>& w) {
  return wedge(FormJet<S>::fromValue(m), w);
}
template <typename S>
FormJet<S> rightMultiply(const FormJet<S>& w, const Mat<S>& m) {
  return wedge(w, FormJet<S>::fromValue(m));
}

/// Trace of the value, as a 1x1-valued form.
template <typename S>
FormJet<S> trace(const FormJet<S>& w) {
  FormJet<S> r(w.degree(), 1, 1);
  for (int k = 0; k < w.size(); ++k) r[k](0, 0) = w[k].trace();
  return r;
}

template <typename S>
double maxAbsValue(const FormJet<S>& w) {
  double r = 0.0;
  for (int k = 0; k < w.size(); ++k) r = std::max(r, maxAbsValue(w[k]));
  return r;
}

template <typename S>
double maxAbsDifference(const FormJet<S>& a, const FormJet<S>& b) {
  return maxAbsValue(a - b);
}

// ---------------------------------------------------------------------------
// Metric, Hodge star and volume form.

namespace detail {

template <typename S, typename R>
S lift(const R& r) {
  if constexpr (std::is_same_v<S, R>)
    return r;
  else
    return toComplex(r);
}

template <typename R>
R sqrtAbs(const R& x) {
  if constexpr (IsJet<R>::value)
    return sqrt(abs(x));
  else
    return std::sqrt(std::abs(x));
}

}  // namespace detail

/// Pointwise data of a metric needed by the Hodge star.
template <typename R>
struct MetricData {
  Mat<R> g;
  Mat<R> inverse;
  R sqrtAbsDet;

  static MetricData from(const Mat<R>& g, double degeneracyTol = 1e-14) {
    const R det = determinant(g);
    if (std::abs(valueOf(det)) < degeneracyTol) throw DegenerateField("degenerate metric");
    return MetricData{g, cdress::inverse(g), detail::sqrtAbs(det)};
  }
};

/// Hodge dual with orientation (x0, x1, x2, x3), eps_{0123} = +1:
/// (*w)_K = sqrt|g| eps(J, K) w^J, K the complement of J, with the indices of
/// w raised by g^{-1}. Acts entrywise on matrix values, so w ^ *c equals
/// <w, c>_g vol for scalar forms.
template <typename S, typename R>
FormJet<S> hodgeStar(const FormJet<S>& w, const MetricData<R>& metric) {
  const int p = w.degree();
  FormJet<S> r(kChartDim - p, w.rows(), w.cols());
  const int all = (1 << kChartDim) - 1;
  const S root = detail::lift<S>(metric.sqrtAbsDet);
  for (int j : indexMasks(p)) {
    Mat<S> raised = Mat<S>::Constant(w.rows(), w.cols(), S(0));
    bool first = true;
    for (int jp : indexMasks(p)) {
      const S minor = p == 0 ? S(1) : detail::lift<S>(determinant(submatrix(metric.inverse, j, jp)));
      Mat<S> term(w.rows(), w.cols());
      for (Eigen::Index i = 0; i < term.size(); ++i) term(i) = minor * w.byMask(jp)(i);
      if (first)
        raised = term;
      else
        raised += term;
      first = false;
    }
    const int k = all & ~j;
    const int sign = detail::shuffleSign(j, k);
    Mat<S>& out = r.byMask(k);
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = (sign > 0 ? root : -root) * raised(i);
  }
  return r;
}

template <typename S, typename R>
FormJet<S> hodgeStar(const FormJet<S>& w, const Mat<R>& g) {
  return hodgeStar(w, MetricData<R>::from(g));
}

/// sqrt|det g| dx0^dx1^dx2^dx3 as a scalar 4-form.
template <typename R>
FormJet<R> volumeForm(const Mat<R>& g) {
  FormJet<R> v(kChartDim, 1, 1);
  v[0](0, 0) = MetricData<R>::from(g).sqrtAbsDet;
  return v;
}

/// Coefficient of dx0^dx1^dx2^dx3 of a 1x1-valued 4-form.
template <typename S>
const S& topCoefficient(const FormJet<S>& w) {
  if (w.degree() != kChartDim || w.rows() != 1 || w.cols() != 1)
    throw ShapeMismatch("topCoefficient: scalar 4-form expected");
  return w[0](0, 0);
}

// ---------------------------------------------------------------------------
// Lazy forms over the chart.

/// Matrix-valued field on the chart returning its jet at any point.
template <typename V>
using SmoothMap = std::function<V(const ChartPoint&)>;

/// Differential form on the chart, evaluated lazily to a FormJet at points.
template <typename S>
class MatrixForm {
 public:
  using Evaluator = std::function<FormJet<S>(const ChartPoint&)>;

  MatrixForm(int degree, Eigen::Index rows, Eigen::Index cols, Evaluator eval)
      : degree_(degree), rows_(rows), cols_(cols), eval_(std::move(eval)) {}

  int degree() const { return degree_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  FormJet<S> operator()(const ChartPoint& p) const { return eval_(p); }

 private:
  int degree_;
  Eigen::Index rows_, cols_;
  Evaluator eval_;
};

template <typename S>
MatrixForm<S> exteriorDerivative(const MatrixForm<S>& w) {
  if (w.degree() >= kChartDim) throw std::invalid_argument("exterior derivative of a top-degree form");
  return MatrixForm<S>(w.degree() + 1, w.rows(), w.cols(), [w](const ChartPoint& p) { return exteriorDerivative(w(p)); });
}

template <typename S>
MatrixForm<S> wedge(const MatrixForm<S>& a, const MatrixForm<S>& b) {
  if (a.degree() + b.degree() > kChartDim) throw std::invalid_argument("wedge: total degree exceeds chart dimension");
  const auto [rows, cols] = productShape(a.rows(), a.cols(), b.rows(), b.cols());
  return MatrixForm<S>(a.degree() + b.degree(), rows, cols,
                       [a, b](const ChartPoint& p) { return wedge(a(p), b(p)); });
}

/// Tetrad e^a_mu (row a, column mu) and the metric g = e^T eta e it induces.
template <int N>
class Tetrad {
 public:
  using RJ = Jet<double, N>;

  explicit Tetrad(SmoothMap<Mat<RJ>> e) : e_(std::move(e)) {}

  Mat<RJ> operator()(const ChartPoint& p) const {
    Mat<RJ> e = e_(p);
    if (std::abs(valueOf(determinant(e))) < 1e-12) throw DegenerateField("singular tetrad", p.x);
    return e;
  }

  Mat<RJ> metric(const ChartPoint& p) const { return inducedMetricOf((*this)(p)); }

  static Mat<RJ> inducedMetricOf(const Mat<RJ>& e) {
    return matmul(matmul(Mat<RJ>(e.transpose()), etaMatrix<RJ>()), e);
  }

 private:
  SmoothMap<Mat<RJ>> e_;
};

template <typename S, typename R>
MatrixForm<S> hodgeStar(const MatrixForm<S>& w, const SmoothMap<Mat<R>>& metric) {
  return MatrixForm<S>(kChartDim - w.degree(), w.rows(), w.cols(),
                       [w, metric](const ChartPoint& p) { return hodgeStar(w(p), metric(p)); });
}

template <typename R>
MatrixForm<R> volumeForm(const SmoothMap<Mat<R>>& metric) {
  return MatrixForm<R>(kChartDim, 1, 1, [metric](const ChartPoint& p) { return volumeForm(metric(p)); });
}

/// Signature (#positive, #negative) of a real symmetric matrix value.
inline std::pair<int, int> signatureOf(const Eigen::Matrix4d& g);

}  // namespace cdress

#include <Eigen/Eigenvalues>

namespace cdress {

inline std::pair<int, int> signatureOf(const Eigen::Matrix4d& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
  int pos = 0, neg = 0;
  for (int i = 0; i < 4; ++i) {
    if (es.eigenvalues()(i) > 0)
      ++pos;
    else if (es.eigenvalues()(i) < 0)
      ++neg;
  }
  return {pos, neg};
}

}  // namespace cdress

#endif  // CDRESS_FORMS_HPP
