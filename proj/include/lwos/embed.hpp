#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwos/point_sample.hpp"
#include "lwos/rng.hpp"

namespace lwos {

enum class ProcessKind { brownian, bes3 };

/// A process observed at the times 2 gamma_1 < 2 gamma_2 < ...
struct PoissonSampledProcess {
  std::vector<double> times;
  std::vector<double> values;
  ProcessKind kind = ProcessKind::brownian;
};

/// Brownian motion from 0 at n Poisson times of rate 1/2; the values form a
/// Laplace walk.
template <class G>
PoissonSampledProcess sample_poisson_brownian(std::size_t n, G& g) {
  PoissonSampledProcess p;
  p.kind = ProcessKind::brownian;
  double t = 0.0;
  double b = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lag = 2.0 * exponential(g);
    t += lag;
    b += std::sqrt(lag) * normal(g);
    p.times.push_back(t);
    p.values.push_back(b);
  }
  return p;
}

/// Three-dimensional Bessel process from 0 at n Poisson times of rate 1/2.
template <class G>
PoissonSampledProcess sample_poisson_bes3(std::size_t n, G& g) {
  PoissonSampledProcess p;
  p.kind = ProcessKind::bes3;
  double t = 0.0;
  double x[3] = {0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double lag = 2.0 * exponential(g);
    const double s = std::sqrt(lag);
    t += lag;
    for (double& c : x) c += s * normal(g);
    p.times.push_back(t);
    p.values.push_back(std::hypot(x[0], x[1], x[2]));
  }
  return p;
}

struct Bes3Options {
  double safety = 2.0;  // switch to the minimum decomposition above safety * vTarget
  std::uint64_t stepBudget = 100'000'000;
};

/// All values <= vTarget of a three-dimensional Bessel process from 0
/// sampled at Poisson times of rate 1/2, over the whole time axis.
///
/// The 3D coordinates are advanced until the process is above
/// safety * vTarget. From there the future infimum J is uniform below the
/// current height; before J is reached the path is a Brownian motion killed
/// at J, afterwards it is J plus a fresh Bessel process. Stretches above
/// vTarget are skipped, which the memoryless sampling clock allows.
template <class G>
PointSample sample_bes3_poisson(double vTarget, G& g, const Bes3Options& opt = {}) {
  if (!(vTarget > 0.0) || !std::isfinite(vTarget)) throw std::invalid_argument("sample_bes3_poisson: need finite vTarget > 0");
  if (!(opt.safety >= 1.0)) throw std::invalid_argument("sample_bes3_poisson: need safety >= 1");
  std::vector<double> out;
  const double switchLevel = opt.safety * vTarget;
  std::uint64_t steps = 0;
  auto charge = [&]() {
    if (++steps > opt.stepBudget)
      throw std::runtime_error("sample_bes3_poisson: step budget of " + std::to_string(opt.stepBudget) +
                               " exceeded (vTarget " + std::to_string(vTarget) + ", safety " +
                               std::to_string(opt.safety) + ", " + std::to_string(out.size()) + " values kept)");
  };
  double base = 0.0;
  for (;;) {
    // Bessel part: base + |3D Brownian motion|
    double x[3] = {0.0, 0.0, 0.0};
    double r = 0.0;
    for (;;) {
      charge();
      const double s = std::sqrt(2.0 * exponential(g));
      for (double& c : x) c += s * normal(g);
      r = std::hypot(x[0], x[1], x[2]);
      if (base + r <= vTarget) out.push_back(base + r);
      if (base + r > switchLevel) break;
    }
    const double J = base + uniform01(g) * r;
    if (J >= vTarget) break;
    // Brownian part from the current height, killed at J
    double pos = vTarget;
    for (;;) {
      charge();
      const double y = pos + laplace(g);
      if (y <= J || uniform01(g) < std::exp(-2.0 * std::min(pos - J, y - J))) break;
      if (y <= vTarget) {
        out.push_back(y);
        pos = y;
      } else {
        pos = vTarget;
      }
    }
    base = J;
  }
  return PointSample(std::move(out));
}

/// M_{0,inf} <= ... <= M_{K,inf}: the K + 1 smallest values of two
/// independent Poisson-sampled Bessel processes.
template <class G>
PointSample sample_mk_infty(std::size_t K, double vTarget, G& g, const Bes3Options& opt = {}) {
  if (K < 1) throw std::invalid_argument("sample_mk_infty: need K >= 1");
  for (int attempt = 0; attempt < 64; ++attempt, vTarget *= 2.0) {
    std::vector<double> pool = sample_bes3_poisson(vTarget, g, opt).points();
    const auto other = sample_bes3_poisson(vTarget, g, opt).points();
    pool.insert(pool.end(), other.begin(), other.end());
    if (pool.size() < K + 1) continue;
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(K + 1), pool.end());
    pool.resize(K + 1);
    return PointSample(std::move(pool));
  }
  throw std::runtime_error("sample_mk_infty: too few values below the target level");
}

/// Default level for sample_mk_infty: the expected number of merged values
/// below v is v^2, so this leaves a wide margin over K + 1.
inline double default_mk_target(std::size_t K) { return 4.0 * std::sqrt(static_cast<double>(K) + 1.0) + 6.0; }

/// Minimum of a Brownian bridge from x to y over time t.
template <class G>
double sample_bridge_minimum(double x, double y, double t, G& g) {
  const double d = x - y;
  return 0.5 * (x + y - std::sqrt(d * d + 2.0 * t * exponential(g)));
}

/// M_{0,n} - M_{-,n} for the Laplace walk embedded in Brownian motion at
/// the times 2 gamma_k.
template <class G>
double sample_walk_minimum_gap(std::size_t n, G& g) {
  if (n < 1) throw std::invalid_argument("sample_walk_minimum_gap: need n >= 1");
  double b = 0.0;
  double walkMin = 0.0;
  double pathMin = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lag = 2.0 * exponential(g);
    const double next = b + std::sqrt(lag) * normal(g);
    pathMin = std::min(pathMin, sample_bridge_minimum(b, next, lag, g));
    b = next;
    walkMin = std::min(walkMin, b);
  }
  return walkMin - pathMin;
}

}  // namespace lwos
