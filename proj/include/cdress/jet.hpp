#ifndef CDRESS_JET_HPP
#define CDRESS_JET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

namespace cdress {

inline constexpr int kChartDim = 4;

constexpr int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

/// Graded monomial basis of R[x0..x3] truncated at total degree N.
///
/// Monomials are ordered by total degree, then lexicographically, so the
/// monomials of degree <= k occupy a prefix of length countUpTo(k).
template <int N>
class MonomialBasis {
 public:
  static constexpr int kSize = binomial(N + kChartDim, kChartDim);
  using Exponents = std::array<int, kChartDim>;

  struct Term {
    int target;
    int lhs;
    int rhs;
  };

  static const MonomialBasis& instance() {
    static const MonomialBasis basis;
    return basis;
  }

  const Exponents& exponents(int i) const { return exps_[i]; }
  int degree(int i) const { return degree_[i]; }
  int countUpTo(int order) const {
    if (order < 0) return 0;
    return prefix_[std::min(order, N) + 1];
  }
  int shifted(int i, int mu) const { return shift_[i][mu]; }
  double factorial(int i) const { return factorial_[i]; }

  int indexOf(const Exponents& alpha) const {
    for (int i = 0; i < kSize; ++i)
      if (exps_[i] == alpha) return i;
    return -1;
  }

  /// All (gamma, alpha, beta) with alpha + beta = gamma and |gamma| <= order,
  /// sorted by gamma.
  std::span<const Term> productTerms(int order) const {
    if (order < 0) return {};
    const int o = std::min(order, N);
    return std::span<const Term>(terms_.data(), termPrefix_[o + 1]);
  }

 private:
  MonomialBasis() {
    int idx = 0;
    prefix_[0] = 0;
    for (int d = 0; d <= N; ++d) {
      // lexicographic (descending in x0) enumeration of |alpha| = d
      for (int a0 = d; a0 >= 0; --a0)
        for (int a1 = d - a0; a1 >= 0; --a1)
          for (int a2 = d - a0 - a1; a2 >= 0; --a2) {
            const int a3 = d - a0 - a1 - a2;
            exps_[idx] = {a0, a1, a2, a3};
            degree_[idx] = d;
            ++idx;
          }
      prefix_[d + 1] = idx;
    }
    for (int i = 0; i < kSize; ++i) {
      double f = 1.0;
      for (int mu = 0; mu < kChartDim; ++mu) {
        for (int k = 2; k <= exps_[i][mu]; ++k) f *= k;
        Exponents up = exps_[i];
        ++up[mu];
        shift_[i][mu] = degree_[i] < N ? indexOf(up) : -1;
      }
      factorial_[i] = f;
    }
    termPrefix_[0] = 0;
    for (int g = 0; g < kSize; ++g) {
      for (int a = 0; a <= g; ++a) {
        if (degree_[a] > degree_[g]) break;
        Exponents beta{};
        bool ok = true;
        for (int mu = 0; mu < kChartDim; ++mu) {
          beta[mu] = exps_[g][mu] - exps_[a][mu];
          ok = ok && beta[mu] >= 0;
        }
        if (ok) terms_.push_back({g, a, indexOf(beta)});
      }
      if (g + 1 == prefix_[degree_[g] + 1])
        termPrefix_[degree_[g] + 1] = static_cast<int>(terms_.size());
    }
  }

  std::array<Exponents, kSize> exps_{};
  std::array<int, kSize> degree_{};
  std::array<int, N + 2> prefix_{};
  std::array<std::array<int, kChartDim>, kSize> shift_{};
  std::array<double, kSize> factorial_{};
  std::vector<Term> terms_;
  std::array<int, N + 2> termPrefix_{};
};

/// Truncated multivariate Taylor polynomial ("jet") of a smooth function of
/// the four chart coordinates, expanded about a fixed point.
///
/// Coefficients are Taylor coefficients d^alpha f / alpha!. The jet tracks the
/// highest degree whose coefficients are still valid: derivatives lower it by
/// one and products take the minimum. Structural constants (including exact
/// zeros) carry kExact and never lose order.
template <typename T, int N = 3>
class Jet {
 public:
  using Basis = MonomialBasis<N>;
  using Scalar = T;
  static constexpr int kSize = Basis::kSize;
  static constexpr int kMaxOrder = N;
  static constexpr int kExact = std::numeric_limits<int>::max();
  static constexpr int kInvalid = -1;

  Jet() : order_(kExact) { c_.fill(T(0)); }

  template <typename U>
    requires(std::is_arithmetic_v<U> || std::is_same_v<U, T>) &&
            std::is_convertible_v<U, T>
  Jet(U v) : order_(kExact) {  // NOLINT(google-explicit-constructor)
    c_.fill(T(0));
    c_[0] = T(v);
  }

  /// The coordinate function x_mu expanded about a point whose mu-th
  /// coordinate is `at`.
  static Jet variable(double at, int mu) {
    Jet j;
    j.order_ = N;
    j.c_[0] = T(at);
    if constexpr (N >= 1) j.c_[1 + mu] = T(1);
    return j;
  }

  static Jet invalid() {
    Jet j;
    j.order_ = kInvalid;
    return j;
  }

  static Jet fromCoefficients(const std::array<T, kSize>& coeffs, int order) {
    Jet j;
    j.c_ = coeffs;
    j.order_ = order;
    j.truncate();
    return j;
  }

  int order() const { return order_; }
  int effectiveOrder() const { return std::min(order_, N); }
  bool isConstant() const { return order_ == kExact; }
  bool isExactZero() const { return order_ == kExact && c_[0] == T(0); }
  bool valid() const { return order_ >= 0; }

  /// Function value at the expansion point.
  const T& value() const {
    if (order_ < 0) throw std::logic_error("jet order exhausted: value is not available");
    return c_[0];
  }

  const T& coefficient(int i) const { return c_[i]; }
  const std::array<T, kSize>& coefficients() const { return c_; }

  /// Partial derivative d^alpha f at the expansion point.
  T partial(const typename Basis::Exponents& alpha) const {
    const auto& b = Basis::instance();
    const int i = b.indexOf(alpha);
    if (i < 0) throw std::out_of_range("partial: multi-index exceeds jet degree");
    if (b.degree(i) > order_) throw std::logic_error("partial: jet order exhausted");
    return c_[i] * T(b.factorial(i));
  }

  Jet derivative(int mu) const {
    if (isConstant()) return Jet();
    if (order_ <= 0) return invalid();
    const auto& b = Basis::instance();
    Jet r;
    r.order_ = order_ - 1;
    const int n = b.countUpTo(r.order_);
    for (int i = 0; i < n; ++i) {
      const int up = b.shifted(i, mu);
      r.c_[i] = T(b.exponents(i)[mu] + 1) * c_[up];
    }
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    order_ = std::min(order_, o.order_);
    truncate();
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    order_ = std::min(order_, o.order_);
    truncate();
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  Jet operator-() const {
    Jet r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  Jet operator+() const { return *this; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.isExactZero() || b.isExactZero()) return Jet();
    if (a.isConstant()) return b.scaled(a.c_[0]);
    if (b.isConstant()) return a.scaled(b.c_[0]);
    const int ord = std::min(a.order_, b.order_);
    if (ord < 0) return invalid();
    Jet r;
    r.order_ = ord;
    for (const auto& t : Basis::instance().productTerms(ord)) r.c_[t.target] += a.c_[t.lhs] * b.c_[t.rhs];
    return r;
  }

  /// Quotient by the Taylor recurrence q = (a - sum_{beta != 0} q b) / b0,
  /// so a / a is exactly one.
  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.isConstant()) {
      Jet r = a;
      for (auto& v : r.c_) v /= b.c_[0];
      return r;
    }
    const int ord = std::min(a.order_, b.order_);
    if (ord < 0) return invalid();
    Jet q;
    q.order_ = ord;
    const T b0 = b.c_[0];
    T acc(0);
    int current = 0;
    for (const auto& t : Basis::instance().productTerms(ord)) {
      if (t.target != current) {
        q.c_[current] = (a.c_[current] - acc) / b0;
        acc = T(0);
        current = t.target;
      }
      if (t.rhs != 0) acc += q.c_[t.lhs] * b.c_[t.rhs];
    }
    q.c_[current] = (a.c_[current] - acc) / b0;
    return q;
  }

  friend Jet operator+(Jet a, const T& s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(const T& s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, const T& s) {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator-(const T& s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, const T& s) { return a.scaled(s); }
  friend Jet operator*(const T& s, const Jet& a) { return a.scaled(s); }
  friend Jet operator/(const Jet& a, const T& s) { return a.scaled(T(1) / s); }
  friend Jet operator/(const T& s, const Jet& a) { return Jet(s) / a; }

  template <typename U>
    requires std::is_arithmetic_v<U>
  friend Jet operator*(const Jet& a, U s) {
    return a.scaled(T(s));
  }
  template <typename U>
    requires std::is_arithmetic_v<U>
  friend Jet operator*(U s, const Jet& a) {
    return a.scaled(T(s));
  }
  template <typename U>
    requires std::is_arithmetic_v<U>
  friend Jet operator/(const Jet& a, U s) {
    return a.scaled(T(1) / T(s));
  }
  template <typename U>
    requires std::is_arithmetic_v<U>
  friend Jet operator+(Jet a, U s) {
    a.c_[0] += T(s);
    return a;
  }
  template <typename U>
    requires std::is_arithmetic_v<U>
  friend Jet operator+(U s, Jet a) {
    a.c_[0] += T(s);
    return a;
  }
  template <typename U>
    requires std::is_arithmetic_v<U>
  friend Jet operator-(Jet a, U s) {
    a.c_[0] -= T(s);
    return a;
  }
  template <typename U>
    requires std::is_arithmetic_v<U>
  friend Jet operator-(U s, const Jet& a) {
    return (-a) + T(s);
  }

  Jet scaled(const T& s) const {
    if (s == T(0) && isConstant()) return Jet();
    Jet r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
  }

  /// f(a) from the derivatives f^(k)(a0), k = 0..order.
  template <typename DerivFn>
  Jet compose(DerivFn&& derivs) const {
    if (order_ < 0) return invalid();
    const T a0 = c_[0];
    if (isConstant()) return Jet(derivs(a0, 0)[0]);
    const int ord = effectiveOrder();
    const auto f = derivs(a0, ord);
    Jet h = *this;
    h.c_[0] = T(0);
    double fact = 1.0;
    for (int k = 2; k <= ord; ++k) fact *= k;
    Jet r(f[ord] / T(fact));
    r.order_ = ord;
    for (int k = ord - 1; k >= 0; --k) {
      fact /= (k + 1);
      r = r * h;
      r.c_[0] += f[k] / T(fact);
    }
    r.order_ = ord;
    return r;
  }

  friend bool operator==(const Jet& a, const Jet& b) { return a.order_ == b.order_ && a.c_ == b.c_; }

  friend std::ostream& operator<<(std::ostream& os, const Jet& j) {
    os << "Jet(" << j.c_[0];
    if (j.order_ == kExact)
      os << ", exact)";
    else
      os << ", order " << j.order_ << ")";
    return os;
  }

 private:
  void truncate() {
    if (order_ >= N) {
      if (order_ == kExact)
        for (int i = 1; i < kSize; ++i) c_[i] = T(0);
      return;
    }
    const int keep = Basis::instance().countUpTo(order_);
    for (int i = keep; i < kSize; ++i) c_[i] = T(0);
  }

  std::array<T, kSize> c_;
  int order_;
};

template <typename T>
struct IsJet : std::false_type {};
template <typename T, int N>
struct IsJet<Jet<T, N>> : std::true_type {};

namespace detail {
template <typename T, int N>
using Derivs = std::array<T, N + 1>;
}  // namespace detail

template <typename T, int N>
Jet<T, N> exp(const Jet<T, N>& a) {
  return a.compose([](const T& x, int ord) {
    detail::Derivs<T, N> d{};
    const T e = std::exp(x);
    for (int k = 0; k <= ord; ++k) d[k] = e;
    return d;
  });
}

template <typename T, int N>
Jet<T, N> log(const Jet<T, N>& a) {
  return a.compose([](const T& x, int ord) {
    detail::Derivs<T, N> d{};
    d[0] = std::log(x);
    T p = T(1) / x;
    double fact = 1.0;
    for (int k = 1; k <= ord; ++k) {
      d[k] = ((k % 2 == 1) ? T(1) : T(-1)) * T(fact) * p;
      p /= x;
      fact *= k;
    }
    return d;
  });
}

/// a^p for real (or complex) exponent p, principal branch.
template <typename T, int N>
Jet<T, N> pow(const Jet<T, N>& a, const T& p) {
  return a.compose([p](const T& x, int ord) {
    detail::Derivs<T, N> d{};
    T coef(1);
    for (int k = 0; k <= ord; ++k) {
      d[k] = coef * std::pow(x, p - T(k));
      coef *= (p - T(k));
    }
    return d;
  });
}

template <typename T, int N>
Jet<T, N> sqrt(const Jet<T, N>& a) {
  return pow(a, T(0.5));
}

template <typename T, int N>
Jet<T, N> reciprocal(const Jet<T, N>& a) {
  return Jet<T, N>(T(1)) / a;
}

template <typename T, int N>
Jet<T, N> powInt(const Jet<T, N>& a, int n) {
  if (n < 0) return reciprocal(powInt(a, -n));
  Jet<T, N> r(T(1));
  Jet<T, N> base = a;
  while (n > 0) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

/// |a| for real jets, using the sign of the value.
template <int N>
Jet<double, N> abs(const Jet<double, N>& a) {
  return a.value() < 0 ? -a : a;
}

template <int N>
Jet<std::complex<double>, N> conj(const Jet<std::complex<double>, N>& a) {
  auto c = a.coefficients();
  for (auto& v : c) v = std::conj(v);
  return Jet<std::complex<double>, N>::fromCoefficients(c, a.order());
}

template <int N>
Jet<double, N> realPart(const Jet<std::complex<double>, N>& a) {
  std::array<double, Jet<double, N>::kSize> c{};
  for (int i = 0; i < Jet<double, N>::kSize; ++i) c[i] = a.coefficient(i).real();
  return Jet<double, N>::fromCoefficients(c, a.order());
}

template <int N>
Jet<double, N> imagPart(const Jet<std::complex<double>, N>& a) {
  std::array<double, Jet<double, N>::kSize> c{};
  for (int i = 0; i < Jet<double, N>::kSize; ++i) c[i] = a.coefficient(i).imag();
  return Jet<double, N>::fromCoefficients(c, a.order());
}

template <int N>
Jet<std::complex<double>, N> toComplex(const Jet<double, N>& a) {
  std::array<std::complex<double>, Jet<double, N>::kSize> c{};
  for (int i = 0; i < Jet<double, N>::kSize; ++i) c[i] = a.coefficient(i);
  return Jet<std::complex<double>, N>::fromCoefficients(c, a.order());
}

// Plain scalars share the same vocabulary so templated code works on both.
inline double conj(double x) { return x; }
inline std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
inline double realPart(double x) { return x; }
inline double realPart(const std::complex<double>& x) { return x.real(); }
inline std::complex<double> toComplex(double x) { return {x, 0.0}; }

/// Value of a jet or plain scalar at the expansion point.
template <typename S>
auto valueOf(const S& s) {
  if constexpr (IsJet<S>::value)
    return s.value();
  else
    return s;
}

}  // namespace cdress

namespace Eigen {

template <typename T, int N>
struct NumTraits<cdress::Jet<T, N>> : GenericNumTraits<cdress::Jet<T, N>> {
  using Real = cdress::Jet<T, N>;
  using NonInteger = Real;
  using Nested = Real;
  using Literal = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 64
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
  static inline Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

}  // namespace Eigen

#endif  // CDRESS_JET_HPP
