#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwos/rng.hpp"
#include "lwos/stats.hpp"

namespace lwos {

/// Increments X_1..X_n and partial sums S_0 = 0, ..., S_n.
struct WalkPath {
  std::vector<double> increments;
  std::vector<double> sums;
};

namespace detail {

inline bool has_tie(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) != v.end();
}

}  // namespace detail

/// Symmetric Laplace walk of n steps. Paths with an exact tie among the sums
/// are redrawn.
template <class G>
WalkPath sample_laplace_walk(std::size_t n, G& g) {
  WalkPath p;
  for (;;) {
    p.increments.resize(n);
    p.sums.resize(n + 1);
    p.sums[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      p.increments[k] = laplace(g);
      p.sums[k + 1] = p.sums[k] + p.increments[k];
    }
    if (!detail::has_tie(p.sums)) return p;
  }
}

/// Simple symmetric +-1 walk of n steps.
template <class G>
WalkPath sample_simple_walk(std::size_t n, G& g) {
  WalkPath p;
  p.increments.resize(n);
  p.sums.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    p.increments[k] = bernoulli_half(g) ? 1.0 : -1.0;
    p.sums[k + 1] = p.sums[k] + p.increments[k];
  }
  return p;
}

struct OrderStats {
  std::vector<double> sorted;   // M_{0,n} <= ... <= M_{n,n}
  std::vector<double> gaps;     // D_{k,n}, k = 1..n
  std::vector<double> shifted;  // W_{k,n} = M_{k,n} - M_{0,n}, k = 0..n
};

inline OrderStats order_stats(const WalkPath& path) {
  OrderStats o;
  o.sorted = path.sums;
  std::stable_sort(o.sorted.begin(), o.sorted.end());
  const std::size_t n = o.sorted.size();
  o.gaps.resize(n > 0 ? n - 1 : 0);
  o.shifted.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    o.shifted[k] = o.sorted[k] - o.sorted[0];
    if (k > 0) o.gaps[k - 1] = o.sorted[k] - o.sorted[k - 1];
  }
  return o;
}

/// Upward and downward Feller chains, each starting at 0.
struct FellerChains {
  std::vector<double> up;    // partial sums of X_k over steps with S_k > 0
  std::vector<double> down;  // partial sums of X_k over steps with S_k <= 0
};

inline FellerChains feller_chains(const WalkPath& path) {
  FellerChains f;
  f.up.push_back(0.0);
  f.down.push_back(0.0);
  for (std::size_t k = 0; k < path.increments.size(); ++k) {
    if (path.sums[k + 1] > 0.0) {
      f.up.push_back(f.up.back() + path.increments[k]);
    } else {
      f.down.push_back(f.down.back() + path.increments[k]);
    }
  }
  return f;
}

/// Largest |S_k - (up[N+_k] + down[N-_k])| over the path.
inline double reconstruction_error(const WalkPath& path, const FellerChains& f) {
  std::size_t nu = 0;
  std::size_t nd = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < path.increments.size(); ++k) {
    if (path.sums[k + 1] > 0.0) {
      ++nu;
    } else {
      ++nd;
    }
    if (nu >= f.up.size() || nd >= f.down.size()) throw std::invalid_argument("reconstruction_error: chains too short");
    worst = std::max(worst, std::fabs(path.sums[k + 1] - (f.up[nu] + f.down[nd])));
  }
  return worst;
}

/// W_1 <= ... <= W_K: order statistics of {-down} and {up_k, k >= 1} above W_0 = 0.
inline std::vector<double> feller_w(const FellerChains& f, std::size_t K) {
  std::vector<double> pool;
  pool.reserve(f.up.size() + f.down.size());
  for (std::size_t k = 1; k < f.up.size(); ++k) pool.push_back(f.up[k]);
  for (std::size_t k = 1; k < f.down.size(); ++k) pool.push_back(-f.down[k]);
  const std::size_t take = std::min(K, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end());
  pool.resize(take);
  return pool;
}

namespace detail {

// s in [0, limit) with density proportional to (1 + limit - s) e^{-s}.
template <class G>
double sample_tilted_truncated_exp(double limit, G& g) {
  const double mass = -std::expm1(-limit);
  for (;;) {
    const double s = -std::log1p(-uniform01(g) * mass);
    if (s < limit && uniform01(g) * (1.0 + limit) < 1.0 + limit - s) return s;
  }
}

}  // namespace detail

/// One step of the upward Feller chain of the infinite walk: the Laplace
/// walk from x >= 0 conditioned to stay positive (h(y) = 1 + y).
template <class G>
double feller_up_step(double x, G& g) {
  if (uniform01(g) * 2.0 * (1.0 + x) < 2.0 + x) {
    double u = exponential(g);
    if (uniform01(g) * (2.0 + x) < 1.0) u += exponential(g);
    return x + u;
  }
  return x - detail::sample_tilted_truncated_exp(x, g);
}

/// Values S_k, k >= 1, of an infinite-horizon upward Feller chain that lie in
/// (0, horizon], in time order. Above the horizon the chain returns with
/// probability horizon / (1 + x), at horizon - s with s drawn from
/// (1 + horizon - s) e^{-s}; otherwise it never comes back.
template <class G>
std::vector<double> sample_feller_up_levels(double horizon, G& g) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("sample_feller_up_levels: need finite horizon > 0");
  std::vector<double> out;
  double x = 0.0;
  for (;;) {
    x = feller_up_step(x, g);
    if (x > horizon) {
      if (uniform01(g) * (1.0 + x) >= horizon) return out;
      x = horizon - detail::sample_tilted_truncated_exp(horizon, g);
    }
    out.push_back(x);
  }
}

/// W_1 <= ... <= W_K from two independent infinite-horizon Feller chains.
template <class G>
std::vector<double> sample_feller_w_limit(std::size_t K, G& g, double horizon = 10.0) {
  for (;; horizon *= 2.0) {
    std::vector<double> pool = sample_feller_up_levels(horizon, g);
    const auto down = sample_feller_up_levels(horizon, g);
    pool.insert(pool.end(), down.begin(), down.end());
    if (pool.size() < K) continue;
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(K), pool.end());
    pool.resize(K);
    return pool;
  }
}

/// One cluster of the decomposition of the upward chain at its strictly
/// ascending future minimum times.
struct TanakaCluster {
  double center = 0.0;          // chain value at the future-minimum time
  std::vector<double> offsets;  // values in the block minus center, in reverse time order
};

/// Splits up[1..] into blocks ending at the strictly ascending future minimum
/// times; the future is limited to the available chain.
inline std::vector<TanakaCluster> tanaka_clusters(const std::vector<double>& up) {
  std::vector<TanakaCluster> out;
  const std::size_t n = up.size();
  if (n <= 1) return out;
  // suffix minima over indices >= j, keeping the last index attaining it
  std::vector<std::size_t> argmin(n);
  argmin[n - 1] = n - 1;
  for (std::size_t j = n - 1; j-- > 1;) {
    const std::size_t later = argmin[j + 1];
    argmin[j] = (up[j] < up[later]) ? j : later;
  }
  std::size_t prev = 0;
  while (prev + 1 < n) {
    const std::size_t t = argmin[prev + 1];
    TanakaCluster c;
    c.center = up[t];
    for (std::size_t i = 0; i + prev < t; ++i) c.offsets.push_back(up[t - i] - c.center);
    out.push_back(std::move(c));
    prev = t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Walk stopped at the first descending ladder time.

struct StoppedWalkOptions {
  std::uint64_t stepCap = 10'000'000;  // simulated steps before the sample is flagged truncated
  double horizon = 40.0;               // levels above are skipped in law, not simulated
  std::uint64_t nuLimit = std::numeric_limits<std::uint64_t>::max();  // stop once nu exceeds this
};

/// Levels S_1..S_nu of the walk before it first goes negative.
///
/// Levels at or below `horizon` are kept exactly. Each stretch above the
/// horizon is replaced by a draw of its length and of the re-entry point,
/// so nu and the levels below the horizon keep their exact joint law.
struct StoppedWalk {
  std::vector<double> path;    // simulated levels in time order (those <= horizon)
  std::vector<double> levels;  // the same, sorted: M_1 < M_2 < ...; empty when truncated
  std::uint64_t nu = 0;        // saturates at uint64 max
  std::uint64_t levelsAboveHorizon = 0;
  double horizon = std::numeric_limits<double>::infinity();
  double overshoot = 0.0;      // -S_tau; NaN when the walk did not finish
  bool truncated = false;
  bool stoppedEarly = false;   // nu exceeded nuLimit

  bool complete() const noexcept { return !truncated && !stoppedEarly; }
  /// Top level, exact when no level exceeded the horizon; 0 when nu = 0.
  double max_level() const noexcept {
    if (levelsAboveHorizon > 0) return std::numeric_limits<double>::infinity();
    return levels.empty() ? 0.0 : levels.back();
  }
  /// M_1, or +inf when there is no level at or below the horizon.
  double first_level() const noexcept {
    return levels.empty() ? std::numeric_limits<double>::infinity() : levels.front();
  }
  /// N_des(v), exact for v <= horizon.
  std::uint64_t count_le(double v) const {
    return static_cast<std::uint64_t>(std::upper_bound(levels.begin(), levels.end(), v) - levels.begin());
  }
  /// Spacings Delta_k = M_k - M_{k-1} with M_0 = 0, over the kept levels.
  std::vector<double> spacings() const {
    std::vector<double> out(levels.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      out[k] = levels[k] - prev;
      prev = levels[k];
    }
    return out;
  }
};

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

// u_n = C(2n, n) 4^{-n} for large n.
inline double u_asymptotic(double n) {
  const double inv = 1.0 / n;
  return (1.0 - inv / 8.0 + inv * inv / 128.0 + 5.0 * inv * inv * inv / 1024.0 -
          21.0 * inv * inv * inv * inv / 32768.0) /
         std::sqrt(std::numbers::pi * n);
}

}  // namespace detail

namespace detail {

// Smallest m >= 1 with factor * u_{m + shift} <= U, saturating.
inline std::uint64_t first_u_below(double U, double factor, std::uint64_t shift) {
  constexpr std::uint64_t kLinear = 1000;
  double u = 1.0;  // u_{m + shift}
  for (std::uint64_t j = 1; j <= 1 + shift; ++j) u *= (2.0 * static_cast<double>(j) - 1.0) / (2.0 * static_cast<double>(j));
  for (std::uint64_t m = 1; m < kLinear; ++m) {
    if (factor * u <= U) return m;
    const double j = static_cast<double>(m + shift + 1);
    u *= (2.0 * j - 1.0) / (2.0 * j);
  }
  // bisection on the asymptotic form
  constexpr double kMax = 4.0e18;
  const double guess = factor * factor / (std::numbers::pi * U * U);
  if (guess >= kMax) return std::numeric_limits<std::uint64_t>::max();
  std::uint64_t lo = kLinear - 1;  // factor * u_{lo + shift} > U
  std::uint64_t hi = static_cast<std::uint64_t>(2.0 * guess) + 2 * kLinear;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (factor * u_asymptotic(static_cast<double>(mid + shift)) > U) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace detail

/// Number of consecutive steps a Laplace walk spends above a level after
/// jumping over it: P(T > m) = 2 u_{m+1}.
template <class G>
std::uint64_t sample_sojourn_length(G& g) {
  return detail::first_u_below(uniform_open0(g), 2.0, 1);
}

/// First descending ladder time of the Laplace walk: P(tau > n) = u_n.
template <class G>
std::uint64_t sample_ladder_time(G& g) {
  return detail::first_u_below(uniform_open0(g), 1.0, 0);
}

template <class G>
StoppedWalk sample_stopped_walk(G& g, const StoppedWalkOptions& opt = {}) {
  if (!(opt.horizon > 0.0)) throw std::invalid_argument("sample_stopped_walk: horizon must be positive");
  for (;;) {
    StoppedWalk w;
    w.horizon = opt.horizon;
    double S = 0.0;
    std::uint64_t steps = 0;
    bool done = false;
    while (!done) {
      if (steps >= opt.stepCap) {
        w.truncated = true;
        break;
      }
      if (w.nu > opt.nuLimit) {
        w.stoppedEarly = true;
        break;
      }
      S += laplace(g);
      ++steps;
      if (S > opt.horizon) {
        const std::uint64_t T = sample_sojourn_length(g);
        w.nu = detail::saturating_add(w.nu, T);
        w.levelsAboveHorizon = detail::saturating_add(w.levelsAboveHorizon, T);
        S = opt.horizon - exponential(g);
      }
      if (S < 0.0) {
        w.overshoot = -S;
        done = true;
        break;
      }
      w.path.push_back(S);
      w.nu = detail::saturating_add(w.nu, 1);
    }
    if (!done) w.overshoot = std::numeric_limits<double>::quiet_NaN();
    if (w.truncated) return w;  // levels left empty
    w.levels = w.path;
    std::sort(w.levels.begin(), w.levels.end());
    if (std::adjacent_find(w.levels.begin(), w.levels.end()) == w.levels.end()) return w;
  }
}

enum class ExcursionMode { longer, higher };

struct ConditionedExcursion {
  StoppedWalk walk;
  std::uint64_t attempts = 0;
  double acceptanceRate = 0.0;
};

/// Stopped walk conditioned on nu >= m (longer) or on a level above m (higher).
template <class G>
ConditionedExcursion sample_conditioned_excursion(double m, ExcursionMode mode, G& g, StoppedWalkOptions opt = {}) {
  if (!(m >= 1.0)) throw std::invalid_argument("sample_conditioned_excursion: need m >= 1");
  if (mode == ExcursionMode::higher) opt.horizon = std::min(opt.horizon, m);
  constexpr std::uint64_t kCheckAfter = 10'000'000;
  ConditionedExcursion out;
  for (;;) {
    ++out.attempts;
    StoppedWalk w = sample_stopped_walk(g, opt);
    bool accept = false;
    if (mode == ExcursionMode::longer) {
      accept = static_cast<double>(w.nu) >= m;
    } else {
      accept = w.levelsAboveHorizon > 0 || w.max_level() > m;
    }
    if (accept && !w.truncated) {
      out.walk = std::move(w);
      out.acceptanceRate = 1.0 / static_cast<double>(out.attempts);
      return out;
    }
    if (out.attempts >= kCheckAfter) {
      throw std::runtime_error("sample_conditioned_excursion: acceptance below 1e-6 after " +
                               std::to_string(out.attempts) + " attempts");
    }
  }
}

/// Batch acceptance statistics for conditioned sampling.
struct AcceptanceStats {
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  double rate() const { return attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts); }
};

/// Reversibility of the spacings of the stopped walk given nu = n. The
/// accepted replicas are split in two halves; forward spacings from one half
/// are compared with reversed spacings of the other, componentwise and for
/// partial sums.
template <class G>
TestReport spacing_reversal_test(std::uint64_t n, std::uint64_t R, G& g, double threshold = 0.01) {
  if (n < 1) throw std::invalid_argument("spacing_reversal_test: need n >= 1");
  if (R < 200) throw std::invalid_argument("spacing_reversal_test: need at least 200 accepted replicas");
  StoppedWalkOptions opt;
  opt.horizon = std::numeric_limits<double>::infinity();
  opt.nuLimit = n;
  std::vector<std::vector<double>> rows;
  rows.reserve(R);
  std::uint64_t attempts = 0;
  const std::uint64_t maxAttempts = std::max<std::uint64_t>(R * 100000, 10'000'000);
  while (rows.size() < R) {
    if (++attempts > maxAttempts) throw std::runtime_error("spacing_reversal_test: too few accepted replicas");
    const auto w = sample_stopped_walk(g, opt);
    if (w.complete() && w.nu == n) rows.push_back(w.spacings());
  }
  const std::size_t half = rows.size() / 2;
  TestReport r;
  r.name = "spacing_reversal";
  r.threshold = threshold;
  r.replicas = rows.size();
  r.params["n"] = n;
  r.params["attempts"] = attempts;
  double worstP = 1.0;
  double worstD = 0.0;
  auto compare = [&](auto forward, auto backward) {
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < half; ++i) a.push_back(forward(rows[i]));
    for (std::size_t i = half; i < rows.size(); ++i) b.push_back(backward(rows[i]));
    const auto t = ks_two_sample(a, b);
    worstP = std::min(worstP, *t.pvalue);
    worstD = std::max(worstD, t.statistic);
  };
  for (std::uint64_t j = 0; j < n; ++j) {
    compare([j](const auto& d) { return d[j]; }, [j, n](const auto& d) { return d[n - 1 - j]; });
  }
  for (std::uint64_t j = 1; j < n; ++j) {
    auto fsum = [j](const auto& d) {
      double s = 0.0;
      for (std::uint64_t i = 0; i < j; ++i) s += d[i];
      return s;
    };
    auto bsum = [j, n](const auto& d) {
      double s = 0.0;
      for (std::uint64_t i = 0; i < j; ++i) s += d[n - 1 - i];
      return s;
    };
    compare(fsum, bsum);
  }
  r.statistic = worstD;
  r.pvalue = worstP;
  r.decide();
  return r;
}

}  // namespace lwos
