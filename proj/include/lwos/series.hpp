#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lwos {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

// Neumaier-compensated accumulator; for exact types it is a plain sum.
template <class T>
struct Accumulator {
  T sum{0};
  void add(const T& x) { sum += x; }
  T value() const { return sum; }
};

template <>
struct Accumulator<double> {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace detail

/// Power series c_0 + c_1 z + ... + c_N z^N, exact through order N.
///
/// Binary operations truncate to the smaller of the two orders. `T` is
/// either `double` or an exact field such as `Rational`.
template <class T>
class TruncatedSeries {
 public:
  using value_type = T;

  TruncatedSeries() : c_(1, T(0)) {}
  explicit TruncatedSeries(std::size_t order) : c_(order + 1, T(0)) {}
  explicit TruncatedSeries(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("TruncatedSeries: empty coefficient vector");
  }

  static TruncatedSeries constant(const T& value, std::size_t order) {
    TruncatedSeries s(order);
    s.c_[0] = value;
    return s;
  }

  /// The series of the variable z itself.
  static TruncatedSeries variable(std::size_t order) {
    TruncatedSeries s(order);
    if (order >= 1) s.c_[1] = T(1);
    return s;
  }

  std::size_t order() const noexcept { return c_.size() - 1; }
  const T& operator[](std::size_t k) const { return c_[k]; }
  T& operator[](std::size_t k) { return c_[k]; }
  const std::vector<T>& coeffs() const noexcept { return c_; }

  TruncatedSeries truncated(std::size_t order) const {
    std::vector<T> out(order + 1, T(0));
    std::copy_n(c_.begin(), std::min(out.size(), c_.size()), out.begin());
    return TruncatedSeries(std::move(out));
  }

  template <class U>
  TruncatedSeries<U> cast() const {
    std::vector<U> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(static_cast<U>(x));
    return TruncatedSeries<U>(std::move(out));
  }

  /// Horner evaluation at a point.
  T operator()(const T& z) const {
    T acc = c_.back();
    for (std::size_t k = c_.size() - 1; k-- > 0;) acc = acc * z + c_[k];
    return acc;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    *this = *this + o;
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    *this = *this - o;
    return *this;
  }
  TruncatedSeries& operator*=(const T& a) {
    for (auto& x : c_) x *= a;
    return *this;
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    TruncatedSeries out(n);
    for (std::size_t k = 0; k <= n; ++k) out.c_[k] = a.c_[k] + b.c_[k];
    return out;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    TruncatedSeries out(n);
    for (std::size_t k = 0; k <= n; ++k) out.c_[k] = a.c_[k] - b.c_[k];
    return out;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a) {
    TruncatedSeries out = a;
    for (auto& x : out.c_) x = -x;
    return out;
  }
  friend TruncatedSeries operator+(const TruncatedSeries& a, const T& b) {
    TruncatedSeries out = a;
    out.c_[0] += b;
    return out;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const T& b) {
    TruncatedSeries out = a;
    out *= b;
    return out;
  }
  friend TruncatedSeries operator*(const T& b, const TruncatedSeries& a) { return a * b; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    TruncatedSeries out(n);
    for (std::size_t k = 0; k <= n; ++k) {
      detail::Accumulator<T> acc;
      for (std::size_t j = 0; j <= k; ++j) acc.add(a.c_[j] * b.c_[k - j]);
      out.c_[k] = acc.value();
    }
    return out;
  }

  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a * reciprocal(b);
  }

  /// Multiply by z^m, keeping the order.
  TruncatedSeries shifted_up(std::size_t m) const {
    TruncatedSeries out(order());
    for (std::size_t k = m; k <= order(); ++k) out.c_[k] = c_[k - m];
    return out;
  }

  /// Divide by z^m; the order drops by m. The low coefficients must vanish.
  TruncatedSeries shifted_down(std::size_t m) const {
    if (m > order()) throw std::invalid_argument("shifted_down: shift exceeds order");
    for (std::size_t k = 0; k < m; ++k) {
      if (c_[k] != T(0)) throw std::domain_error("shifted_down: series not divisible by z^m");
    }
    return TruncatedSeries(std::vector<T>(c_.begin() + static_cast<std::ptrdiff_t>(m), c_.end()));
  }

 private:
  std::vector<T> c_;
};

/// 1/f; requires f_0 != 0.
template <class T>
TruncatedSeries<T> reciprocal(const TruncatedSeries<T>& f) {
  if (f[0] == T(0)) throw std::domain_error("reciprocal: zero constant term");
  const std::size_t n = f.order();
  TruncatedSeries<T> g(n);
  const T inv0 = T(1) / f[0];
  g[0] = inv0;
  for (std::size_t k = 1; k <= n; ++k) {
    detail::Accumulator<T> acc;
    for (std::size_t j = 1; j <= k; ++j) acc.add(f[j] * g[k - j]);
    g[k] = -acc.value() * inv0;
  }
  return g;
}

/// exp(f) for any f; the constant term contributes the factor e^{f_0}.
template <class T>
TruncatedSeries<T> exp(const TruncatedSeries<T>& f) {
  using std::exp;
  const std::size_t n = f.order();
  TruncatedSeries<T> g(n);
  g[0] = exp(f[0]);
  for (std::size_t k = 1; k <= n; ++k) {
    detail::Accumulator<T> acc;
    for (std::size_t j = 1; j <= k; ++j) acc.add(T(j) * f[j] * g[k - j]);
    g[k] = acc.value() / T(k);
  }
  return g;
}

/// log(f); requires f_0 > 0.
template <class T>
TruncatedSeries<T> log(const TruncatedSeries<T>& f) {
  using std::log;
  if (!(f[0] > T(0))) throw std::domain_error("log: constant term must be positive");
  const std::size_t n = f.order();
  TruncatedSeries<T> g(n);
  g[0] = log(f[0]);
  for (std::size_t k = 1; k <= n; ++k) {
    detail::Accumulator<T> acc;
    acc.add(T(k) * f[k]);
    for (std::size_t j = 1; j < k; ++j) acc.add(-(T(j) * g[j] * f[k - j]));
    g[k] = acc.value() / (T(k) * f[0]);
  }
  return g;
}

/// f^alpha for real alpha; requires f_0 > 0.
template <class T>
TruncatedSeries<T> pow(const TruncatedSeries<T>& f, const T& alpha) {
  return exp(log(f) * alpha);
}

/// f^m for integer m (negative allowed when f_0 != 0), by repeated squaring.
template <class T>
TruncatedSeries<T> ipow(TruncatedSeries<T> f, long m) {
  if (m < 0) {
    f = reciprocal(f);
    m = -m;
  }
  auto result = TruncatedSeries<T>::constant(T(1), f.order());
  while (m > 0) {
    if (m & 1) result = result * f;
    m >>= 1;
    if (m > 0) f = f * f;
  }
  return result;
}

/// Binomial series of sqrt(1 - z) through order N.
template <class T>
TruncatedSeries<T> sqrt_one_minus_z(std::size_t order) {
  TruncatedSeries<T> w(order);
  w[0] = T(1);
  for (std::size_t k = 1; k <= order; ++k) {
    w[k] = w[k - 1] * T(2 * static_cast<long>(k) - 3) / T(2 * static_cast<long>(k));
  }
  return w;
}

/// Binomial series of (1 - z)^{m/2} for any integer m.
template <class T>
TruncatedSeries<T> one_minus_z_half_power(long m, std::size_t order) {
  TruncatedSeries<T> out(order);
  out[0] = T(1);
  for (std::size_t k = 1; k <= order; ++k) {
    // coefficient of z^k in (1-z)^a is (-1)^k binom(a, k); a = m/2
    const long kk = static_cast<long>(k);
    out[k] = -out[k - 1] * T(m - 2 * (kk - 1)) / T(2 * kk);
  }
  return out;
}

}  // namespace lwos
