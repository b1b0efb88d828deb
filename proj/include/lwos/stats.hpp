#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

namespace lwos {

inline constexpr double kProbeSlack = 1e-12;

/// Named verification result.
struct TestReport {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  double statistic = 0.0;
  std::optional<double> pvalue;
  std::optional<double> absError;
  double threshold = 0.01;
  bool pass = false;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  std::optional<double> runtimeMs;
  std::string note;

  /// Recomputes `pass` from whichever of pvalue / absError is set.
  void decide() {
    if (pvalue) {
      pass = *pvalue >= threshold;
    } else if (absError) {
      pass = *absError <= threshold;
    } else {
      pass = false;
    }
  }
};

inline nlohmann::json optional_json(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

inline nlohmann::json to_json(const TestReport& r) {
  nlohmann::json j = nlohmann::json::object();
  j["name"] = r.name;
  j["params"] = r.params;
  j["statistic"] = std::isfinite(r.statistic) ? nlohmann::json(r.statistic) : nlohmann::json(nullptr);
  j["pvalue"] = optional_json(r.pvalue);
  j["absError"] = optional_json(r.absError);
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  j["replicas"] = r.replicas;
  j["seed"] = r.seed;
  j["runtimeMs"] = optional_json(r.runtimeMs);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

// ---------------------------------------------------------------------------
// Distributions of test statistics.

/// P(K > lambda) for the Kolmogorov distribution.
inline double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // theta-function form, fast for small lambda
    const double pi = std::numbers::pi;
    const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) sum += std::pow(y, (2 * k - 1) * (2 * k - 1));
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Upper tail of chi-square with `df` degrees of freedom.
inline double chi2_survival(double stat, double df) {
  if (df <= 0.0) return 1.0;
  if (!(stat > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * stat);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov.

inline double ks_pvalue(double D, double effectiveN) {
  const double sn = std::sqrt(effectiveN);
  return kolmogorov_survival((sn + 0.12 + 0.11 / sn) * D);
}

inline TestReport ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                                std::string name = "ks_one_sample") {
  if (samples.size() < 100) throw std::invalid_argument("ks_one_sample: need at least 100 samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double D = 0.0;
  double prevF = -kProbeSlack;
  // Tied values are one step of the empirical CDF; the lower side uses the
  // left limit of cdf so that atoms (censoring points) are handled.
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double F = cdf(x[i]);
    const double Fleft = std::min(F, cdf(std::nextafter(x[i], -std::numeric_limits<double>::infinity())));
    if (!(F >= prevF - kProbeSlack) || F < -kProbeSlack || F > 1.0 + kProbeSlack)
      throw std::domain_error("ks_one_sample: cdf is not monotone on the sample range");
    prevF = std::max(prevF, F);
    D = std::max({D, j / n - F, Fleft - i / n});
    i = j;
  }
  TestReport r;
  r.name = std::move(name);
  r.statistic = D;
  r.pvalue = ks_pvalue(D, n);
  r.replicas = x.size();
  r.decide();
  return r;
}

inline TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                                std::string name = "ks_two_sample") {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double D = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    D = std::max(D, std::fabs(i / n - j / m));
  }
  TestReport r;
  r.name = std::move(name);
  r.statistic = D;
  r.pvalue = ks_pvalue(D, n * m / (n + m));
  r.replicas = x.size() + y.size();
  r.decide();
  return r;
}

// ---------------------------------------------------------------------------
// Chi-square.

namespace detail {

// Groups consecutive classes so that every group's expected weight reaches
// `minExpected`; a short final group is merged into its predecessor.
inline std::vector<std::size_t> merge_classes(const std::vector<double>& expected, double minExpected) {
  std::vector<std::size_t> groupOf(expected.size());
  std::size_t group = 0;
  double acc = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    groupOf[k] = group;
    acc += expected[k];
    if (acc >= minExpected && k + 1 < expected.size()) {
      acc = 0.0;
      ++group;
    }
  }
  if (acc < minExpected && group > 0) {
    for (auto& g : groupOf) g = std::min(g, group - 1);
  }
  return groupOf;
}

}  // namespace detail

/// Pearson goodness of fit; `probs` must cover all outcomes (the last class
/// is usually a tail class). Classes with expected count < 5 are merged.
inline TestReport chi2_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                           std::string name = "chi2_gof") {
  if (counts.size() != probs.size() || counts.empty()) throw std::invalid_argument("chi2_gof: size mismatch");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double psum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("chi2_gof: negative probability");
    psum += p;
  }
  if (std::fabs(psum - 1.0) > 1e-9) throw std::invalid_argument("chi2_gof: probabilities must sum to 1");
  std::vector<double> expected(probs.size());
  for (std::size_t k = 0; k < probs.size(); ++k) expected[k] = total * probs[k];
  const auto groupOf = detail::merge_classes(expected, 5.0);
  const std::size_t groups = groupOf.empty() ? 0 : groupOf.back() + 1;
  std::vector<double> obs(groups, 0.0);
  std::vector<double> exp(groups, 0.0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    obs[groupOf[k]] += static_cast<double>(counts[k]);
    exp[groupOf[k]] += expected[k];
  }
  double stat = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    if (exp[g] > 0.0) stat += (obs[g] - exp[g]) * (obs[g] - exp[g]) / exp[g];
  }
  TestReport r;
  r.name = std::move(name);
  r.statistic = stat;
  r.pvalue = chi2_survival(stat, static_cast<double>(groups) - 1.0);
  r.replicas = static_cast<std::uint64_t>(total);
  r.params["classes"] = counts.size();
  r.params["mergedClasses"] = groups;
  r.decide();
  return r;
}

/// Two-sample chi-square homogeneity test on class counts.
inline TestReport chi2_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                  std::string name = "chi2_two_sample") {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("chi2_two_sample: size mismatch");
  double na = 0.0;
  double nb = 0.0;
  for (auto c : a) na += static_cast<double>(c);
  for (auto c : b) nb += static_cast<double>(c);
  const double n = na + nb;
  // Merge on the smaller expected of the two rows.
  std::vector<double> minExpected(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double col = static_cast<double>(a[k] + b[k]);
    minExpected[k] = col * std::min(na, nb) / n;
  }
  const auto groupOf = detail::merge_classes(minExpected, 5.0);
  const std::size_t groups = groupOf.empty() ? 0 : groupOf.back() + 1;
  std::vector<double> ga(groups, 0.0);
  std::vector<double> gb(groups, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    ga[groupOf[k]] += static_cast<double>(a[k]);
    gb[groupOf[k]] += static_cast<double>(b[k]);
  }
  double stat = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    const double col = ga[g] + gb[g];
    if (col <= 0.0) continue;
    const double ea = col * na / n;
    const double eb = col * nb / n;
    stat += (ga[g] - ea) * (ga[g] - ea) / ea + (gb[g] - eb) * (gb[g] - eb) / eb;
  }
  TestReport r;
  r.name = std::move(name);
  r.statistic = stat;
  r.pvalue = chi2_survival(stat, static_cast<double>(groups) - 1.0);
  r.replicas = static_cast<std::uint64_t>(n);
  r.params["classes"] = a.size();
  r.params["mergedClasses"] = groups;
  r.decide();
  return r;
}

/// Histogram of integer outcomes into classes 0..maxClass, the last one
/// collecting everything >= maxClass.
inline std::vector<std::uint64_t> class_counts(std::span<const std::uint64_t> values, std::size_t maxClass) {
  std::vector<std::uint64_t> out(maxClass + 1, 0);
  for (auto v : values) ++out[std::min<std::uint64_t>(v, maxClass)];
  return out;
}

// ---------------------------------------------------------------------------
// Moments.

struct Estimate {
  double value = 0.0;
  double standardError = 0.0;
};

inline Estimate mean_estimate(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("mean_estimate: need at least two values");
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : x) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

/// Mean of z^count with its standard error.
inline Estimate empirical_pgf(std::span<const std::uint64_t> counts, double z) {
  std::vector<double> vals;
  vals.reserve(counts.size());
  for (auto c : counts) vals.push_back(c == 0 ? 1.0 : std::pow(z, static_cast<double>(c)));
  return mean_estimate(vals);
}

/// Proportion with binomial standard error sqrt(p(1-p)/n) at the hypothesised p.
inline TestReport proportion_check(std::uint64_t successes, std::uint64_t n, double p, double sigmas,
                                   std::string name = "proportion") {
  TestReport r;
  r.name = std::move(name);
  const double phat = static_cast<double>(successes) / static_cast<double>(n);
  const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  r.statistic = phat;
  r.absError = std::fabs(phat - p);
  r.threshold = sigmas * sd;
  r.replicas = n;
  r.params["expected"] = p;
  r.params["sigmas"] = sigmas;
  r.decide();
  return r;
}

/// |estimate - target| <= sigmas * SE.
inline TestReport estimate_check(const Estimate& e, double target, double sigmas, std::uint64_t n,
                                 std::string name = "estimate") {
  TestReport r;
  r.name = std::move(name);
  r.statistic = e.value;
  r.absError = std::fabs(e.value - target);
  r.threshold = sigmas * e.standardError;
  r.replicas = n;
  r.params["expected"] = target;
  r.params["standardError"] = e.standardError;
  r.params["sigmas"] = sigmas;
  r.decide();
  return r;
}

/// |value - target| <= tolerance, for deterministic checks.
inline TestReport tolerance_check(double value, double target, double tolerance, std::string name = "exact") {
  TestReport r;
  r.name = std::move(name);
  r.statistic = value;
  r.absError = std::fabs(value - target);
  r.threshold = tolerance;
  r.params["expected"] = target;
  r.decide();
  return r;
}

// ---------------------------------------------------------------------------
// Anderson-Darling test of uniformity on (0, 1).

/// Limiting CDF of the Anderson-Darling statistic (Marsaglia & Marsaglia 2004).
inline double anderson_darling_cdf(double z) {
  if (z <= 0.0) return 0.0;
  if (z < 2.0) {
    return std::exp(-1.2337141 / z) / std::sqrt(z) *
           (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z);
  }
  return std::exp(-std::exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z));
}

inline TestReport anderson_darling_uniform(std::span<const double> u, std::string name = "anderson_darling") {
  if (u.size() < 5) throw std::invalid_argument("anderson_darling_uniform: need at least 5 values");
  std::vector<double> x(u.begin(), u.end());
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  constexpr double eps = 1e-300;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::max(x[i], eps);
    const double hi = std::max(1.0 - x[n - 1 - i], eps);
    s += (2.0 * i + 1.0) * (std::log(lo) + std::log(hi));
  }
  const double A2 = -static_cast<double>(n) - s / static_cast<double>(n);
  TestReport r;
  r.name = std::move(name);
  r.statistic = A2;
  r.pvalue = 1.0 - anderson_darling_cdf(A2);
  r.replicas = n;
  r.decide();
  return r;
}

}  // namespace lwos
