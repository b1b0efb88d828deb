#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lwos/branching.hpp"
#include "lwos/point_sample.hpp"
#include "lwos/rng.hpp"
#include "lwos/walk.hpp"

namespace lwos {

/// Squared Bessel path on the grid 0, h, 2h, ...
struct BesqPath {
  double delta = 0.0;
  double initial = 0.0;
  double gridStep = 1e-3;
  std::vector<double> values;

  double time(std::size_t k) const { return gridStep * static_cast<double>(k); }
  double end_time() const { return values.empty() ? 0.0 : time(values.size() - 1); }
};

/// One exact transition of BESQ_delta over `lag` from q: a Poisson mixture of
/// gamma laws (the scaled noncentral chi-square).
template <class G>
double besq_step(double delta, double q, double lag, G& g) {
  const std::uint64_t K = poisson(g, q / (2.0 * lag));
  return 2.0 * lag * gamma(g, 0.5 * delta + static_cast<double>(K));
}

/// Exact BESQ_4 on a grid as the squared norm of a 4D Brownian motion,
/// started from (sqrt(x0), 0, 0, 0).
class Besq4Walker {
 public:
  explicit Besq4Walker(double x0 = 0.0) : c_{std::sqrt(x0), 0.0, 0.0, 0.0} {}

  template <class G>
  double step(double lag, G& g) {
    const double s = std::sqrt(lag);
    double q = 0.0;
    for (double& c : c_) {
      c += s * normal(g);
      q += c * c;
    }
    return q;
  }

 private:
  double c_[4];
};

inline std::size_t grid_steps(double h, double vMax) {
  if (!(h > 0.0) || !(vMax >= 0.0) || !std::isfinite(vMax))
    throw std::invalid_argument("besq: need h > 0 and finite vMax >= 0");
  return static_cast<std::size_t>(std::ceil(vMax / h - 1e-9));
}

template <class G>
BesqPath besq_path(double delta, double x0, double h, double vMax, G& g) {
  if (!(delta >= 0.0) || !(x0 >= 0.0)) throw std::invalid_argument("besq_path: need delta >= 0, x0 >= 0");
  BesqPath p;
  p.delta = delta;
  p.initial = x0;
  p.gridStep = h;
  const std::size_t n = grid_steps(h, vMax);
  p.values.reserve(n + 1);
  p.values.push_back(x0);
  double q = x0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(delta == 0.0 && q == 0.0)) q = besq_step(delta, q, h, g);
    p.values.push_back(q);
  }
  return p;
}

struct CoxSample {
  std::vector<double> points;  // sorted, within [0, vMax]
  BesqPath intensityPath;      // empty when not recorded
  double vMax = 0.0;
  std::uint64_t countBeyond = 0;  // points after vMax, where drawn

  std::size_t size() const { return points.size(); }
  std::uint64_t count_le(double v) const {
    return static_cast<std::uint64_t>(std::upper_bound(points.begin(), points.end(), v) - points.begin());
  }
  double first() const { return points.empty() ? std::numeric_limits<double>::infinity() : points.front(); }
  std::uint64_t total_count() const { return detail::saturating_add(points.size(), countBeyond); }
  PointSample as_points() const { return PointSample(points); }
};

/// Inverts the cumulative intensity theta * I(t) against a unit-rate Poisson
/// stream. I is the trapezoid integral, linear between grid nodes.
template <class G>
class CoxInverter {
 public:
  CoxInverter(double theta, G& g) : theta_(theta), g_(&g), next_(exponential(g)) {
    if (!(theta > 0.0)) throw std::invalid_argument("cox: theta must be positive");
  }

  /// Feeds the segment [t0, t0 + h] with end values q0, q1 and calls
  /// onPoint(time, fraction) for each point in it.
  template <class F>
  void segment(double t0, double h, double q0, double q1, F&& onPoint) {
    const double mass = theta_ * h * 0.5 * (q0 + q1);
    if (mass <= 0.0) return;
    while (cum_ + mass >= next_) {
      const double frac = (next_ - cum_) / mass;
      onPoint(t0 + frac * h, frac);
      next_ += exponential(*g_);
    }
    cum_ += mass;
  }

  double cumulative() const { return cum_; }

 private:
  double theta_;
  G* g_;
  double next_;
  double cum_ = 0.0;
};

template <class G>
CoxSample cox_points(const BesqPath& path, double theta, G& g) {
  CoxSample out;
  out.vMax = path.end_time();
  CoxInverter<G> inv(theta, g);
  for (std::size_t k = 0; k + 1 < path.values.size(); ++k) {
    inv.segment(path.time(k), path.gridStep, path.values[k], path.values[k + 1],
                [&](double t, double) { out.points.push_back(t); });
  }
  out.intensityPath = path;
  return out;
}

struct BesselOptions {
  double gridStep = 1e-3;
  double vMax = 8.0;
  bool recordPath = false;
};

/// Cox process driven by Q_0(2 gamma_1, .)/2. Points after vMax are not
/// located; their number is drawn in law as a Poisson(Q(vMax)/2) sum of
/// ladder times.
template <class G>
CoxSample simulate_ndes_bessel(G& g, const BesselOptions& opt = {}) {
  const double h = opt.gridStep;
  const std::size_t n = grid_steps(h, opt.vMax);
  CoxSample out;
  out.vMax = opt.vMax;
  double q = 2.0 * exponential(g);
  if (opt.recordPath) {
    out.intensityPath.delta = 0.0;
    out.intensityPath.initial = q;
    out.intensityPath.gridStep = h;
    out.intensityPath.values.push_back(q);
  }
  CoxInverter<G> inv(0.5, g);
  std::size_t k = 0;
  for (; k < n && q > 0.0; ++k) {
    const double next = besq_step(0.0, q, h, g);
    inv.segment(h * static_cast<double>(k), h, q, next, [&](double t, double) { out.points.push_back(t); });
    q = next;
    if (opt.recordPath) out.intensityPath.values.push_back(q);
  }
  if (opt.recordPath) out.intensityPath.values.resize(n + 1, 0.0);
  if (q > 0.0) {
    const std::uint64_t clusters = poisson(g, 0.5 * q);
    for (std::uint64_t c = 0; c < clusters; ++c) out.countBeyond = detail::saturating_add(out.countBeyond, sample_ladder_time(g));
  }
  return out;
}

enum class NwStart { gammaStart, fromZero };

/// Cox process driven by Q_4(2 gamma_2, .)/2, or equivalently by Q_4(0, 1 + .)/2.
template <class G>
CoxSample simulate_nw_bessel(G& g, const BesselOptions& opt = {}, NwStart start = NwStart::gammaStart) {
  const double h = opt.gridStep;
  const std::size_t n = grid_steps(h, opt.vMax);
  double q = 0.0;
  Besq4Walker walker;
  if (start == NwStart::gammaStart) {
    q = 2.0 * gamma(g, 2.0);
    walker = Besq4Walker(q);
  } else {
    const std::size_t pre = grid_steps(h, 1.0);
    for (std::size_t k = 0; k < pre; ++k) q = walker.step(h, g);
  }
  CoxSample out;
  out.vMax = opt.vMax;
  if (opt.recordPath) {
    out.intensityPath.delta = 4.0;
    out.intensityPath.initial = q;
    out.intensityPath.gridStep = h;
    out.intensityPath.values.push_back(q);
  }
  CoxInverter<G> inv(0.5, g);
  for (std::size_t k = 0; k < n; ++k) {
    const double next = walker.step(h, g);
    inv.segment(h * static_cast<double>(k), h, q, next, [&](double t, double) { out.points.push_back(t); });
    q = next;
    if (opt.recordPath) out.intensityPath.values.push_back(q);
  }
  return out;
}

/// Cox points 0 < T_1 < T_2 < ... driven by Q_4(0, .)/2, with Q at T_1.
struct DifferencesSample {
  std::vector<double> times;  // T_1..T_{K+1}
  double valueAtFirst = 0.0;  // Q_4(0, T_1), linear between grid nodes
};

template <class G>
DifferencesSample sample_q4_cox_times(std::size_t count, G& g, double h = 1e-3) {
  if (count < 1) throw std::invalid_argument("sample_q4_cox_times: need count >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("sample_q4_cox_times: need h > 0");
  constexpr std::uint64_t kMaxSteps = 1'000'000'000;
  DifferencesSample out;
  CoxInverter<G> inv(0.5, g);
  Besq4Walker walker;
  double q = 0.0;
  for (std::uint64_t k = 0; out.times.size() < count; ++k) {
    if (k >= kMaxSteps) throw std::runtime_error("sample_q4_cox_times: step budget exceeded");
    const double next = walker.step(h, g);
    inv.segment(h * static_cast<double>(k), h, q, next, [&](double t, double frac) {
      if (out.times.empty()) out.valueAtFirst = q + frac * (next - q);
      out.times.push_back(t);
    });
    q = next;
  }
  out.times.resize(count);
  return out;
}

/// W_k = T_{k+1} - T_1, k = 1..K.
template <class G>
PointSample w_via_differences(std::size_t K, G& g, double h = 1e-3) {
  if (K < 1) throw std::invalid_argument("w_via_differences: need K >= 1");
  const auto s = sample_q4_cox_times(K + 1, g, h);
  std::vector<double> w(K);
  for (std::size_t k = 0; k < K; ++k) w[k] = s.times[k + 1] - s.times[0];
  return PointSample(std::move(w));
}

enum class ClusterSource { walk, branching };

/// Centers at rate lambda on (0, vMax], each carrying the levels {0, M_1, ..., M_nu}
/// of an independent stopped walk; points <= vMax.
template <class G>
CoxSample poisson_cluster(double lambda, double vMax, G& g, ClusterSource source = ClusterSource::walk) {
  if (!(lambda > 0.0) || !(vMax > 0.0)) throw std::invalid_argument("poisson_cluster: need lambda > 0, vMax > 0");
  CoxSample out;
  out.vMax = vMax;
  double c = exponential(g) / lambda;
  while (c <= vMax) {
    out.points.push_back(c);
    const double room = vMax - c;
    if (room > 0.0) {
      if (source == ClusterSource::walk) {
        StoppedWalkOptions opt;
        opt.horizon = room;
        const auto w = sample_stopped_walk(g, opt);
        for (double m : w.levels) {
          if (c + m <= vMax) out.points.push_back(c + m);
        }
      } else {
        BranchingOptions opt;
        opt.levelCap = room;
        const auto run = run_marked_bd(g, bernoulli_half(g) ? 1 : 0, opt);
        for (const auto& [t, kind] : run.events) {
          if (c + t <= vMax) out.points.push_back(c + t);
        }
      }
    }
    c += exponential(g) / lambda;
  }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

}  // namespace lwos
