#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lwos/point_sample.hpp"
#include "lwos/rng.hpp"

namespace lwos {

enum class EventKind : std::uint8_t { birth, death, mark };

struct BranchingOptions {
  double levelCap = 12.0;
  /// After the level cap, keep counting events (without times) until
  /// extinction or until this many output events have been seen.
  std::uint64_t countCap = 0;
  bool recordPath = false;
};

/// One run of a birth-death process in level-time.
struct BranchingRun {
  std::vector<std::pair<double, EventKind>> events;  // events up to the level cap
  std::uint64_t initialCount = 0;
  std::vector<std::pair<double, std::uint64_t>> populationPath;  // (time, count from then on)
  std::uint64_t eventCount = 0;   // all events seen, including those past the cap
  std::uint64_t outputCount = 0;  // events of the output kind seen, including past the cap
  bool extinct = false;           // population reached 0 within what was simulated
  bool extinctByCap = false;      // population reached 0 before the level cap

  /// Times of the output events up to the cap.
  PointSample points(bool deathsOnly) const {
    std::vector<double> t;
    for (const auto& [time, kind] : events) {
      if (!deathsOnly || kind == EventKind::death) t.push_back(time);
    }
    return PointSample(std::move(t));
  }
};

namespace detail {

// Population-j holding times are Exp(2j); kind probabilities (birth, death)
// with the remainder a mark.
template <class G>
BranchingRun run_birth_death(G& g, std::uint64_t initial, double pBirth, double pDeath, bool deathsOnly,
                             const BranchingOptions& opt) {
  if (!(opt.levelCap > 0.0)) throw std::invalid_argument("branching: levelCap must be positive");
  BranchingRun run;
  run.initialCount = initial;
  std::uint64_t j = initial;
  double t = 0.0;
  if (opt.recordPath) run.populationPath.emplace_back(0.0, j);
  auto draw_kind = [&]() {
    const double u = uniform01(g);
    if (u < pBirth) return EventKind::birth;
    if (u < pBirth + pDeath) return EventKind::death;
    return EventKind::mark;
  };
  auto apply = [&](EventKind kind) {
    ++run.eventCount;
    if (!deathsOnly || kind == EventKind::death) ++run.outputCount;
    if (kind == EventKind::birth) ++j;
    if (kind == EventKind::death) --j;
  };
  while (j > 0) {
    t += exponential(g) / (2.0 * static_cast<double>(j));
    if (t > opt.levelCap) break;
    const EventKind kind = draw_kind();
    run.events.emplace_back(t, kind);
    apply(kind);
    if (opt.recordPath) run.populationPath.emplace_back(t, j);
  }
  run.extinctByCap = (j == 0);
  // Past the cap only the embedded jump chain matters for counts.
  while (j > 0 && run.outputCount < opt.countCap) apply(draw_kind());
  run.extinct = (j == 0);
  return run;
}

}  // namespace detail

/// Birth, death and mark events of the level-indexed process started from
/// `initial` particles: rate 2j, kinds with probabilities 1/4, 1/4, 1/2.
template <class G>
BranchingRun run_marked_bd(G& g, std::uint64_t initial, const BranchingOptions& opt = {}) {
  return detail::run_birth_death(g, initial, 0.25, 0.25, false, opt);
}

/// Critical binary branching (rate 2j, birth or death with probability 1/2)
/// from `initial` particles; death times are the output events.
template <class G>
BranchingRun run_geiger(G& g, std::uint64_t initial, const BranchingOptions& opt = {}) {
  return detail::run_birth_death(g, initial, 0.5, 0.5, true, opt);
}

/// Marked birth-death process with Z(0) ~ Bernoulli(1/2); all event times.
template <class G>
PointSample simulate_marked_bd(G& g, double levelCap = 12.0) {
  BranchingOptions opt;
  opt.levelCap = levelCap;
  return run_marked_bd(g, bernoulli_half(g) ? 1 : 0, opt).points(false);
}

/// Geiger's construction with Z(0) ~ Geometric(1/2); death times.
template <class G>
PointSample simulate_geiger(G& g, double levelCap = 12.0) {
  BranchingOptions opt;
  opt.levelCap = levelCap;
  return run_geiger(g, geometric_half(g), opt).points(true);
}

// ---------------------------------------------------------------------------
// Chain conditioned to survive.

/// States Y_1 = 1, Y_2, ..., Y_K of the lazy walk conditioned by h(j) = j.
struct HChainPath {
  std::vector<std::uint64_t> states;
};

template <class G>
HChainPath sample_h_chain(std::size_t K, G& g) {
  if (K < 1) throw std::invalid_argument("sample_h_chain: need K >= 1");
  HChainPath p;
  p.states.reserve(K);
  std::uint64_t i = 1;
  p.states.push_back(i);
  for (std::size_t k = 1; k < K; ++k) {
    const double u = uniform01(g);
    const double di = static_cast<double>(i);
    if (u < 0.5) {
      // stay
    } else if (u < 0.5 + (di + 1.0) / (4.0 * di)) {
      ++i;
    } else {
      --i;
    }
    p.states.push_back(i);
  }
  return p;
}

/// Simple walk conditioned to stay positive: S_0 = 0, S_1 = 1, then from
/// i up with probability (i+1)/(2i). Returns S_0..S_n.
template <class G>
std::vector<std::uint64_t> sample_doob_simple_walk(std::size_t n, G& g) {
  std::vector<std::uint64_t> s(n + 1, 0);
  if (n >= 1) s[1] = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    const double i = static_cast<double>(s[k - 1]);
    s[k] = uniform01(g) < (i + 1.0) / (2.0 * i) ? s[k - 1] + 1 : s[k - 1] - 1;
  }
  return s;
}

/// W_k = sum_{j <= k} eps_j / (2 Y_j), k = 1..K.
template <class G>
PointSample sample_w_branching(std::size_t K, G& g) {
  const auto chain = sample_h_chain(K, g);
  std::vector<double> w(K);
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    acc += exponential(g) / (2.0 * static_cast<double>(chain.states[k]));
    w[k] = acc;
  }
  return PointSample(std::move(w));
}

}  // namespace lwos
