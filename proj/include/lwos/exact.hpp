#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "lwos/series.hpp"

namespace lwos {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Binomials and the absorbed walk.

/// C(n, k) as a big integer; 0 when k is out of range.
inline BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long j = 1; j <= k; ++j) {
    r *= (n - k + j);
    r /= j;
  }
  return r;
}

/// Row C(n, 0..n).
inline std::vector<BigInt> binomial_row(long n) {
  std::vector<BigInt> row(static_cast<std::size_t>(n + 1));
  row[0] = 1;
  for (long j = 1; j <= n; ++j) row[j] = row[j - 1] * (n - j + 1) / j;
  return row;
}

inline double big_to_double(const BigInt& x, int exp2 = 0) {
  // Scale down before converting so huge integers keep full precision.
  const auto bits = static_cast<int>(x == 0 ? 0 : boost::multiprecision::msb(abs(x)));
  if (bits <= 1000) return std::ldexp(x.convert_to<double>(), exp2);
  const int shift = bits - 60;
  BigInt top = x >> shift;
  return std::ldexp(top.convert_to<double>(), exp2 + shift);
}

/// Exact 2m-step transition probability of the absorbed simple walk from 2i to 2j.
inline Rational p0_power_exact(long m, long i, long j) {
  if (m < 0 || i < 1 || j < 0) throw std::domain_error("p0_power: need m >= 0, i >= 1, j >= 0");
  BigInt num = binomial(2 * m, m - i + j) - binomial(2 * m, m + i + j);
  BigInt den = BigInt(1) << static_cast<unsigned>(2 * m);
  return Rational(num, den);
}

inline double p0_power(long m, long i, long j) {
  if (m < 0 || i < 1 || j < 0) throw std::domain_error("p0_power: need m >= 0, i >= 1, j >= 0");
  BigInt num = binomial(2 * m, m - i + j) - binomial(2 * m, m + i + j);
  return big_to_double(num, static_cast<int>(-2 * m));
}

/// Kernel of the simple symmetric walk on {0, ..., maxState}, absorbed at 0.
/// The top state moves down with probability 1/2 and loses the rest, so
/// powers are exact for paths that stay below maxState.
class AbsorbedKernel {
 public:
  explicit AbsorbedKernel(std::size_t maxState)
      : n_(maxState + 1), entries_(n_ * n_, 0.0) {
    if (maxState < 1) throw std::invalid_argument("AbsorbedKernel: maxState must be >= 1");
    at(0, 0) = 1.0;
    for (std::size_t i = 1; i < n_; ++i) {
      at(i, i - 1) = 0.5;
      if (i + 1 < n_) at(i, i + 1) = 0.5;
    }
  }

  std::size_t max_state() const noexcept { return n_ - 1; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  /// Lazy version (I + P)/2.
  AbsorbedKernel lazy() const {
    AbsorbedKernel out = *this;
    for (auto& e : out.entries_) e *= 0.5;
    for (std::size_t i = 0; i < n_; ++i) out.at(i, i) += 0.5;
    return out;
  }

  AbsorbedKernel power(unsigned long steps) const {
    AbsorbedKernel result = identity();
    AbsorbedKernel base = *this;
    while (steps > 0) {
      if (steps & 1) result = result * base;
      steps >>= 1;
      if (steps > 0) base = base * base;
    }
    return result;
  }

  friend AbsorbedKernel operator*(const AbsorbedKernel& a, const AbsorbedKernel& b) {
    AbsorbedKernel out = a.zero();
    const std::size_t n = a.n_;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  AbsorbedKernel zero() const {
    AbsorbedKernel z = *this;
    std::fill(z.entries_.begin(), z.entries_.end(), 0.0);
    return z;
  }
  AbsorbedKernel identity() const {
    AbsorbedKernel z = zero();
    for (std::size_t i = 0; i < n_; ++i) z.at(i, i) = 1.0;
    return z;
  }

  std::size_t n_;
  std::vector<double> entries_;
};

// ---------------------------------------------------------------------------
// Gap tails.

/// P(D_k > v) from the h-transformed chain: sum_i i P0^{2k-2}(2, 2i) e^{-2iv}.
inline double tail_dk(long k, double v) {
  if (k < 1 || !(v >= 0.0)) throw std::domain_error("tail_dk: need k >= 1, v >= 0");
  const long m = k - 1;
  const auto row = binomial_row(2 * m);
  detail::Accumulator<double> acc;
  for (long i = 1; i <= k; ++i) {
    const long lo = m - 1 + i;
    const long hi = m + 1 + i;
    BigInt num = (lo <= 2 * m ? row[lo] : BigInt(0)) - (hi <= 2 * m ? row[hi] : BigInt(0));
    if (num == 0) continue;
    acc.add(static_cast<double>(i) * big_to_double(num, static_cast<int>(-2 * m)) * std::exp(-2.0 * i * v));
  }
  return acc.value();
}

namespace detail {

// Series in z built from s = 1 - sqrt(1 - z), all with nonnegative coefficients:
//   s, c = 2/(1+w) = 1/(1 - s/2), r = (1-w)/(1+w) = s c / 2.
struct RootSeries {
  TruncatedSeries<double> s, c, r;
};

inline RootSeries root_series(std::size_t order) {
  if (order <= 200) {
    auto one = TruncatedSeries<Rational>::constant(Rational(1), order);
    auto s = one - sqrt_one_minus_z<Rational>(order);
    auto c = reciprocal(one - s * Rational(1, 2));
    auto r = s * c * Rational(1, 2);
    return {s.cast<double>(), c.cast<double>(), r.cast<double>()};
  }
  auto one = TruncatedSeries<double>::constant(1.0, order);
  auto s = one - sqrt_one_minus_z<double>(order);
  auto c = reciprocal(one - s * 0.5);
  auto r = s * c * 0.5;
  return {s, c, r};
}

}  // namespace detail

/// Tail generating function sum_k P(D_k > v) z^{k-1} through z^N.
inline TruncatedSeries<double> gap_tail_series(double v, std::size_t order) {
  if (!(v >= 0.0)) throw std::domain_error("gap_tail_series: need v >= 0");
  const auto rs = detail::root_series(order);
  const double a = std::exp(-2.0 * v);
  auto one = TruncatedSeries<double>::constant(1.0, order);
  auto h = reciprocal(one - rs.r * a);
  auto ch = rs.c * h;
  return ch * ch * a;
}

/// Same series by direct expansion of (w cosh v + sinh v)^{-2}, w = sqrt(1-z).
/// Numerically unstable in double for large v or N; intended for
/// high-precision scalar types.
template <class T>
TruncatedSeries<T> gap_tail_series_direct(const T& v, std::size_t order) {
  using std::cosh;
  using std::sinh;
  auto w = sqrt_one_minus_z<T>(order);
  auto base = w * T(cosh(v)) + T(sinh(v));
  return ipow(base, -2);
}

/// Density generating function sum_k p_k(v) z^k through z^N.
inline TruncatedSeries<double> gap_density_series(double v, std::size_t order) {
  if (!(v > 0.0)) throw std::domain_error("gap_density_series: need v > 0");
  if (order == 0) return TruncatedSeries<double>(0);
  const std::size_t n = order - 1;
  const auto rs = detail::root_series(n);
  const double a = std::exp(-2.0 * v);
  auto one = TruncatedSeries<double>::constant(1.0, n);
  auto h = reciprocal(one - rs.r * a);
  auto body = rs.c * rs.c * (one + rs.r * a) * h * h * h * (2.0 * a);
  return body.truncated(order).shifted_up(1);
}

// ---------------------------------------------------------------------------
// Scaling limit.

/// Scaled complementary error function e^{y^2} erfc(y), y >= 0.
inline double erfcx(double y) {
  if (y < 0.0) throw std::domain_error("erfcx: need y >= 0");
  if (y < 2.0) return std::exp(y * y) * std::erfc(y);
  // Continued fraction 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...)))), modified Lentz.
  constexpr double tiny = 1e-300;
  double f = y;
  double C = y;
  double D = 0.0;
  for (int n = 1; n < 500; ++n) {
    const double an = 0.5 * n;
    D = y + an * D;
    D = (D == 0.0) ? tiny : D;
    C = y + an / C;
    C = (C == 0.0) ? tiny : C;
    D = 1.0 / D;
    const double delta = C * D;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (f * std::sqrt(std::numbers::pi));
}

namespace detail {

inline constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)
inline constexpr double kAsymptoticFrom = 5.0;

// Large-x expansion p(x) = sum_{m>=2} C_m x^{-2m}; returns C_2..C_M.
inline const std::vector<double>& limit_tail_coefficients() {
  static const std::vector<double> coeffs = [] {
    std::vector<double> out;
    double a = 0.5;  // a_m = (2m-1)!!/2^m, starting at m = 1
    for (int m = 2; m <= 40; ++m) {
      a *= (2.0 * m - 1.0) / 2.0;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      out.push_back(4.0 * kSqrt2OverPi * sign * (m - 1) * a * std::ldexp(1.0, -m));
    }
    return out;
  }();
  return coeffs;
}

inline double limit_density_asymptotic(double x) {
  const double inv = 1.0 / (x * x);
  double term_scale = inv * inv;
  double sum = 0.0;
  double prev = kInf;
  for (double c : limit_tail_coefficients()) {
    const double term = c * term_scale;
    if (std::fabs(term) > prev) break;
    sum += term;
    prev = std::fabs(term);
    if (prev < 1e-18 * std::fabs(sum)) break;
    term_scale *= inv;
  }
  return sum;
}

}  // namespace detail

/// Density of the scaling limit of sqrt(k/2) D_k, i.e. of eps/(2 chi_3).
inline double limit_density(double x) {
  if (!(x > 0.0)) throw std::domain_error("limit_density: need x > 0");
  if (x >= detail::kAsymptoticFrom) return detail::limit_density_asymptotic(x);
  const double x2 = x * x;
  return 4.0 * (detail::kSqrt2OverPi * (1.0 + 2.0 * x2) - x * (4.0 * x2 + 3.0) * erfcx(std::sqrt(2.0) * x));
}

/// Mellin transform of the limit law, E X^s for -1 < s < 3.
inline double mellin_limit(double s) {
  if (!(s > -1.0 && s < 3.0)) throw std::domain_error("mellin_limit: need -1 < s < 3");
  using boost::math::tgamma;
  return std::exp2(-1.5 * s) * tgamma(s + 1.0) * tgamma(1.5 - 0.5 * s) / tgamma(1.5);
}

namespace detail {
inline constexpr double kQuadratureEnd = 12.0;

inline double gk_integrate(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13, &err);
}
}  // namespace detail

/// Integral of x^s p(x) over (0, inf) by adaptive Gauss-Kronrod on [0, 12]
/// plus the term-wise integrated large-x expansion.
inline double mellin_quadrature(double s) {
  if (!(s > -1.0 && s < 3.0)) throw std::domain_error("mellin_quadrature: need -1 < s < 3");
  const double A = detail::kQuadratureEnd;
  double body = 0.0;
  if (s < 0.0) {
    // x = t^2 removes the endpoint singularity.
    auto g = [s](double t) { return t <= 0.0 ? 0.0 : 2.0 * std::pow(t, 2.0 * s + 1.0) * limit_density(t * t); };
    body = detail::gk_integrate(g, 0.0, 1.0) + detail::gk_integrate([s](double x) { return std::pow(x, s) * limit_density(x); }, 1.0, A);
  } else {
    auto g = [s](double x) { return x <= 0.0 ? 0.0 : std::pow(x, s) * limit_density(x); };
    body = detail::gk_integrate(g, 0.0, 1.0) + detail::gk_integrate(g, 1.0, detail::kAsymptoticFrom) +
           detail::gk_integrate(g, detail::kAsymptoticFrom, A);
  }
  double tail = 0.0;
  int m = 2;
  for (double c : detail::limit_tail_coefficients()) {
    const double e = s - 2.0 * m + 1.0;
    tail += c * std::pow(A, e) / (-e);
    ++m;
  }
  return body + tail;
}

namespace detail {

inline constexpr double kCdfCell = 1.0 / 32.0;

inline double limit_density_or_origin(double t) { return t <= 0.0 ? 4.0 * kSqrt2OverPi : limit_density(t); }

inline double gauss_cell(double a, double b) {
  return boost::math::quadrature::gauss<double, 20>::integrate(limit_density_or_origin, a, b);
}

// Integral of limit_density over [0, i * kCdfCell].
inline const std::vector<double>& limit_cdf_table() {
  static const std::vector<double> table = [] {
    const auto cells = static_cast<std::size_t>(kQuadratureEnd / kCdfCell);
    std::vector<double> t(cells + 1, 0.0);
    for (std::size_t i = 0; i < cells; ++i) {
      t[i + 1] = t[i] + gauss_cell(static_cast<double>(i) * kCdfCell, static_cast<double>(i + 1) * kCdfCell);
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// CDF of the limit law by quadrature of limit_density: fixed Gauss-Legendre
/// cells up to 12, the integrated large-x expansion beyond.
inline double limit_cdf(double x) {
  if (x <= 0.0) return 0.0;
  const double A = detail::kQuadratureEnd;
  if (x <= A) {
    const auto& table = detail::limit_cdf_table();
    const auto i = std::min(static_cast<std::size_t>(x / detail::kCdfCell), table.size() - 1);
    const double lo = static_cast<double>(i) * detail::kCdfCell;
    const double part = x > lo ? detail::gauss_cell(lo, x) : 0.0;
    return std::min(table[i] + part, 1.0);
  }
  double tail = 0.0;
  int m = 2;
  for (double c : detail::limit_tail_coefficients()) {
    const double e = 1.0 - 2.0 * m;
    tail += c * std::pow(x, e) / (-e);
    ++m;
  }
  return 1.0 - tail;
}

// ---------------------------------------------------------------------------
// Moments of gaps.

/// u_m = C(2m, m) 4^{-m}.
inline double u_central(long m) {
  if (m < 0) throw std::domain_error("u_central: need m >= 0");
  double u = 1.0;
  for (long j = 0; j < m; ++j) u *= (2.0 * j + 1.0) / (2.0 * j + 2.0);
  return u;
}

/// E D_{k,n} = u_k + u_{n-k+1}.
inline double expected_gap(long k, long n) {
  if (k < 1 || n < k) throw std::domain_error("expected_gap: need 1 <= k <= n");
  return u_central(k) + u_central(n - k + 1);
}

/// Limit n -> infinity of E D_{k,n}.
inline double expected_gap_limit(long k) {
  if (k < 1) throw std::domain_error("expected_gap_limit: need k >= 1");
  return u_central(k);
}

// ---------------------------------------------------------------------------
// Counting laws of the stopped walk and its relatives.

/// (1 + w tanh(v w))^{-1} as a function of w = sqrt(1 - z); even in w.
inline double ndes_pgf_w(double v, double w) {
  if (std::isinf(v)) return 1.0 / (1.0 + std::fabs(w));
  return 1.0 / (1.0 + w * std::tanh(v * w));
}

/// pgf of the number of stopped-walk levels in (0, v].
inline double ndes_pgf(double v, double z) {
  if (!(v >= 0.0) || !(z >= 0.0 && z <= 1.0)) throw std::domain_error("ndes_pgf: need v >= 0, 0 <= z <= 1");
  return ndes_pgf_w(v, std::sqrt(1.0 - z));
}

/// pmf series of N_des(v); v = inf gives the law of nu.
inline TruncatedSeries<double> ndes_pmf_series(double v, std::size_t order) {
  if (!(v >= 0.0)) throw std::domain_error("ndes_pmf_series: need v >= 0");
  const auto rs = detail::root_series(order);
  auto one = TruncatedSeries<double>::constant(1.0, order);
  if (std::isinf(v)) return rs.c * 0.5;
  // E = e^{-2 v w} = e^{-2v} exp(2 v s)
  auto E = exp(rs.s * (2.0 * v)) * std::exp(-2.0 * v);
  return (one + E) * rs.c * 0.5 * reciprocal(one + rs.r * E);
}

/// P(M_k > v), counting the defective mass P(M_k = inf).
inline double mk_tail(long k, double v) {
  if (k < 1 || !(v >= 0.0)) throw std::domain_error("mk_tail: need k >= 1, v >= 0");
  const auto pmf = ndes_pmf_series(v, static_cast<std::size_t>(k - 1));
  detail::Accumulator<double> acc;
  for (long j = 0; j < k; ++j) acc.add(pmf[static_cast<std::size_t>(j)]);
  return acc.value();
}

/// pgf of N_des(u, v] in terms of w = sqrt(1 - z).
inline double interval_pgf_w(double u, double v, double w) {
  if (std::isinf(v)) return (1.0 + u * std::fabs(w)) / (1.0 + (u + 1.0) * std::fabs(w));
  const double t = w * std::tanh((v - u) * w);
  return (1.0 + u * t) / (1.0 + (u + 1.0) * t);
}

inline double interval_pgf(double u, double v, double z) {
  if (!(u >= 0.0) || !(v >= u) || !(z >= 0.0 && z <= 1.0))
    throw std::domain_error("interval_pgf: need 0 <= u <= v, 0 <= z <= 1");
  return interval_pgf_w(u, v, std::sqrt(1.0 - z));
}

/// (cosh(v w) + w sinh(v w))^{-lambda} in terms of w; even in w.
inline double cluster_pgf_w(double lambda, double v, double w) {
  return std::pow(std::cosh(v * w) + w * std::sinh(v * w), -lambda);
}

/// pgf of the Poisson-cluster count on [0, v] with center rate lambda.
inline double cluster_pgf(double lambda, double v, double z) {
  if (!(lambda > 0.0) || !(v >= 0.0) || !(z >= 0.0 && z <= 1.0))
    throw std::domain_error("cluster_pgf: need lambda > 0, v >= 0, 0 <= z <= 1");
  const double w = std::sqrt(1.0 - z);
  // e^{-v w} (2/(1+w)) / (1 + r e^{-2 v w}) avoids overflow of cosh.
  const double r = (1.0 - w) / (1.0 + w);
  const double one = std::exp(-v * w) * (2.0 / (1.0 + w)) / (1.0 + r * std::exp(-2.0 * v * w));
  return lambda == 1.0 ? one : (lambda == 2.0 ? one * one : std::pow(one, lambda));
}

/// pmf series of the Poisson-cluster count on [0, v].
inline TruncatedSeries<double> cluster_pmf_series(double lambda, double v, std::size_t order) {
  if (!(lambda > 0.0) || !(v >= 0.0)) throw std::domain_error("cluster_pmf_series: need lambda > 0, v >= 0");
  const auto rs = detail::root_series(order);
  auto one = TruncatedSeries<double>::constant(1.0, order);
  auto E = exp(rs.s * (2.0 * v)) * std::exp(-2.0 * v);
  auto unit = exp(rs.s * v) * std::exp(-v) * rs.c * reciprocal(one + rs.r * E);
  if (lambda == 1.0) return unit;
  if (lambda == 2.0) return unit * unit;
  return exp(log(unit) * lambda);
}

/// P(M_nu > t) = 1/(2 + t).
inline double max_mnu_tail(double t) {
  if (!(t >= 0.0)) throw std::domain_error("max_mnu_tail: need t >= 0");
  return 1.0 / (2.0 + t);
}

/// pgf of the first descending ladder time.
inline double tau_pgf(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("tau_pgf: need 0 <= z <= 1");
  return 1.0 - std::sqrt(1.0 - z);
}

/// pgf of nu = tau - 1.
inline double nu_pgf(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("nu_pgf: need 0 <= z <= 1");
  const double w = std::sqrt(1.0 - z);
  return 1.0 / (1.0 + w);
}

/// pgf of nu given nu >= 1.
inline double nu_cond_pgf(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("nu_cond_pgf: need 0 <= z <= 1");
  if (z == 0.0) return 0.0;
  // (2/z)(1 - w - z/2) = 2 nu_pgf(z) - 1
  return 2.0 * nu_pgf(z) - 1.0;
}

/// Exact pmf of nu through order N.
inline TruncatedSeries<Rational> nu_pmf_exact(std::size_t order) {
  auto s = TruncatedSeries<Rational>::constant(Rational(1), order + 1) - sqrt_one_minus_z<Rational>(order + 1);
  return s.shifted_down(1);
}

/// P(first death > t) for the Geiger process started from one particle.
inline double first_death_tail(double t) {
  if (!(t >= 0.0)) throw std::domain_error("first_death_tail: need t >= 0");
  const double e = std::exp(-2.0 * t);
  return 2.0 * e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// Agreement of the two representations of the gap tails.

struct AgreementResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double absError = 0.0;
  double tailBound = 0.0;
};

/// Truncated sum over k <= K of P(D_k > v) z^{k-1} against (w cosh v + sinh v)^{-2}.
inline AgreementResult agreement_check(double v, double z, long K) {
  if (!(v > 0.0) || !(std::fabs(z) < 1.0) || K < 1)
    throw std::domain_error("agreement_check: need v > 0, |z| < 1, K >= 1");
  detail::Accumulator<double> acc;
  double zp = 1.0;
  for (long k = 1; k <= K; ++k) {
    const long n = 2 * k - 2;
    const auto row = binomial_row(n);
    detail::Accumulator<double> inner;
    for (long i = 1; i <= k; ++i) {
      const long lo = k - 2 + i;
      const long hi = k + i;
      BigInt d = (lo <= n ? row[lo] : BigInt(0)) - (hi <= n ? row[hi] : BigInt(0));
      if (d == 0) continue;
      inner.add(static_cast<double>(i) * std::exp(-2.0 * i * v) * big_to_double(d, static_cast<int>(-n)));
    }
    acc.add(inner.value() * zp);
    zp *= z;
  }
  AgreementResult out;
  out.lhs = acc.value();
  const double base = std::sqrt(1.0 - z) * std::cosh(v) + std::sinh(v);
  out.rhs = 1.0 / (base * base);
  out.absError = std::fabs(out.lhs - out.rhs);
  out.tailBound = std::pow(std::fabs(z), static_cast<double>(K)) / (1.0 - std::fabs(z));
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form laws as first-class values.

enum class LawKind { tail, pmf, pdf, pgf, mellin };

struct ClosedFormLaw {
  std::string name;
  LawKind kind;
  std::function<double(double)> evaluator;
  double operator()(double x) const { return evaluator(x); }
};

inline ClosedFormLaw gap_tail_law(long k) {
  return {"tail_dk", LawKind::tail, [k](double v) { return tail_dk(k, v); }};
}
inline ClosedFormLaw mk_tail_law(long k) {
  return {"mk_tail", LawKind::tail, [k](double v) { return mk_tail(k, v); }};
}
inline ClosedFormLaw max_mnu_law() { return {"max_mnu_tail", LawKind::tail, max_mnu_tail}; }
inline ClosedFormLaw first_death_law() { return {"first_death_tail", LawKind::tail, first_death_tail}; }
inline ClosedFormLaw limit_density_law() { return {"limit_density", LawKind::pdf, limit_density}; }
inline ClosedFormLaw mellin_law() { return {"mellin", LawKind::mellin, mellin_limit}; }
inline ClosedFormLaw ndes_pgf_law(double v) {
  return {"ndes_pgf", LawKind::pgf, [v](double z) { return ndes_pgf(v, z); }};
}

}  // namespace lwos
