#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lwos/bessel.hpp"
#include "lwos/branching.hpp"
#include "lwos/embed.hpp"
#include "lwos/exact.hpp"
#include "lwos/parallel.hpp"
#include "lwos/rng.hpp"
#include "lwos/stats.hpp"
#include "lwos/walk.hpp"

namespace lwos {

/// Everything a verification run depends on. Reports are a function of this
/// record alone; the thread count only changes the speed.
struct RunConfig {
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> replicas;  // replaces every per-check replica count
  std::optional<double> gridStep;         // replaces the per-suite grid steps
  double vMax = 8.0;
  double levelCap = 12.0;
  double safety = 2.0;
  unsigned threads = 1;
  bool retryOnFail = false;
  bool timing = false;  // fill runtimeMs (makes reports run-dependent)

  void validate() const {
    if (replicas && *replicas == 0) throw std::invalid_argument("replicas must be positive");
    if (gridStep && !(*gridStep > 0.0 && *gridStep <= 0.5)) throw std::invalid_argument("grid step must be in (0, 0.5]");
    if (!(vMax > 0.0) || !std::isfinite(vMax)) throw std::invalid_argument("v-max must be positive and finite");
    if (!(levelCap > 0.0) || !std::isfinite(levelCap)) throw std::invalid_argument("level cap must be positive and finite");
    if (!(safety >= 1.0) || !std::isfinite(safety)) throw std::invalid_argument("safety must be >= 1 and finite");
    if (threads == 0) throw std::invalid_argument("threads must be positive");
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    j["seed"] = seed;
    j["replicas"] = replicas ? nlohmann::json(*replicas) : nlohmann::json(nullptr);
    j["gridStep"] = gridStep ? nlohmann::json(*gridStep) : nlohmann::json(nullptr);
    j["vMax"] = vMax;
    j["levelCap"] = levelCap;
    j["safety"] = safety;
    j["retryOnFail"] = retryOnFail;
    return j;
  }
};

inline std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

/// Seed of the second attempt of a suite.
inline std::uint64_t retry_seed(std::uint64_t seed) { return mix64(seed ^ 0xD1B54A32D192ED03ull); }

/// Collects the reports of one suite attempt and hands out random streams.
class SuiteContext {
 public:
  SuiteContext(const RunConfig& cfg, std::string suite, std::uint64_t seed)
      : cfg_(&cfg), suite_(std::move(suite)), seed_(seed) {}

  const RunConfig& config() const { return *cfg_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t replicas(std::uint64_t fallback) const { return cfg_->replicas.value_or(fallback); }
  double grid_step(double fallback) const { return cfg_->gridStep.value_or(fallback); }

  /// Sequential stream for checks that cannot be split into replicas.
  Rng stream(std::string_view name) const { return replica_stream(seed_, id(name, "#sequential"), 0); }

  /// fn(rng) for replica i = 0..n-1, each on its own stream; index-ordered.
  template <class Fn>
  auto replicate(std::string_view name, std::uint64_t n, Fn&& fn) const {
    const std::uint64_t sid = id(name, "");
    return run_replicas(n, cfg_->threads, [&](std::size_t i) {
      Rng g = replica_stream(seed_, sid, i);
      return fn(g);
    });
  }

  void add(TestReport r, nlohmann::json params = nlohmann::json::object()) {
    for (auto& [k, v] : params.items()) r.params[k] = v;
    r.name = suite_ + "/" + r.name;
    r.seed = seed_;
    reports_.push_back(std::move(r));
  }

  std::vector<TestReport>& reports() { return reports_; }

 private:
  std::uint64_t id(std::string_view name, std::string_view tag) const {
    std::string key = suite_;
    key += '/';
    key += name;
    key += tag;
    return suite_id(key);
  }

  const RunConfig* cfg_;
  std::string suite_;
  std::uint64_t seed_;
  std::vector<TestReport> reports_;
};

namespace detail {

inline std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

template <std::size_t N>
std::vector<std::uint64_t> column(const std::vector<std::array<std::uint64_t, N>>& rows, std::size_t j) {
  std::vector<std::uint64_t> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

inline double exp2_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-2.0 * x); }

// Exp(2) with probability 2/3, Exp(4) with probability 1/3.
inline double spacing_mixture_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return 1.0 - (2.0 / 3.0) * std::exp(-2.0 * x) - (1.0 / 3.0) * std::exp(-4.0 * x);
}

// Exp(2) plus an independent draw from spacing_mixture_cdf.
inline double spacing_pair_sum_cdf(double x) {
  if (x <= 0.0) return 0.0;
  const double e2 = std::exp(-2.0 * x);
  const double gammaPart = 1.0 - (1.0 + 2.0 * x) * e2;
  const double twoRates = 1.0 - 2.0 * e2 + std::exp(-4.0 * x);
  return (2.0 / 3.0) * gammaPart + (1.0 / 3.0) * twoRates;
}

inline double twice_gamma2_cdf(double x) { return x <= 0.0 ? 0.0 : 1.0 - (1.0 + 0.5 * x) * std::exp(-0.5 * x); }

// First point, last point (both censored at the level cap) and total count
// of one stopped-walk point set.
struct PointSummary {
  double first = 0.0;
  double last = 0.0;
  std::uint64_t count = 0;
  bool truncated = false;
};

enum class StoppedSampler { walk, markedBd, geiger };

inline constexpr std::array<StoppedSampler, 3> kStoppedSamplers = {StoppedSampler::walk, StoppedSampler::markedBd,
                                                                   StoppedSampler::geiger};

inline const char* sampler_name(StoppedSampler s) {
  switch (s) {
    case StoppedSampler::walk:
      return "walk";
    case StoppedSampler::markedBd:
      return "marked_bd";
    case StoppedSampler::geiger:
      return "geiger";
  }
  return "?";
}

template <class G>
PointSummary summarize_stopped(StoppedSampler s, double levelCap, std::uint64_t countCap, G& g) {
  PointSummary out;
  if (s == StoppedSampler::walk) {
    StoppedWalkOptions opt;
    opt.horizon = std::max(opt.horizon, levelCap);
    const auto w = sample_stopped_walk(g, opt);
    out.first = std::min(w.first_level(), levelCap);
    out.last = std::min(w.max_level(), levelCap);
    out.count = w.nu;
    out.truncated = w.truncated;
    return out;
  }
  BranchingOptions opt;
  opt.levelCap = levelCap;
  opt.countCap = countCap;
  const bool geiger = s == StoppedSampler::geiger;
  const auto run = geiger ? run_geiger(g, geometric_half(g), opt) : run_marked_bd(g, bernoulli_half(g) ? 1 : 0, opt);
  const auto pts = run.points(geiger);
  out.first = std::min(pts.first(), levelCap);
  out.last = run.extinctByCap ? pts.last() : levelCap;
  out.count = run.outputCount;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Suites, one per acceptance criterion.

inline void suite_agreement(SuiteContext& ctx) {
  constexpr long K = 400;
  for (double v : {0.5, 1.0, 2.0}) {
    for (double z : {-0.5, 0.5, 0.9}) {
      const auto a = agreement_check(v, z, K);
      ctx.add(tolerance_check(a.lhs, a.rhs, 1e-9, "v=" + num(v) + ",z=" + num(z)),
              {{"v", v}, {"z", z}, {"K", K}, {"truncationBound", a.tailBound}});
    }
  }
}

inline void suite_series(SuiteContext& ctx) {
  constexpr long kMax = 30;
  for (double v : {0.25, 1.0, 3.0}) {
    const auto s = gap_tail_series(v, kMax);
    double worst = 0.0;
    long worstK = 1;
    for (long k = 1; k <= kMax; ++k) {
      const double e = std::fabs(s[static_cast<std::size_t>(k - 1)] - tail_dk(k, v));
      if (e > worst) {
        worst = e;
        worstK = k;
      }
    }
    TestReport r;
    r.name = "v=" + num(v);
    r.statistic = worst;
    r.absError = worst;
    r.threshold = 1e-10;
    r.decide();
    ctx.add(r, {{"v", v}, {"kMax", kMax}, {"worstK", worstK}});
  }
}

inline void suite_stopped_walk(SuiteContext& ctx) {
  constexpr std::size_t kMaxClass = 10;
  const double L = ctx.config().levelCap;
  const std::uint64_t n = ctx.replicas(1'000'000);
  std::vector<std::vector<detail::PointSummary>> samples;
  std::vector<std::uint64_t> truncated;
  for (auto s : detail::kStoppedSamplers) {
    samples.push_back(ctx.replicate(detail::sampler_name(s), n, [&](Rng& g) {
      return detail::summarize_stopped(s, L, kMaxClass, g);
    }));
    truncated.push_back(static_cast<std::uint64_t>(
        std::count_if(samples.back().begin(), samples.back().end(), [](const auto& x) { return x.truncated; })));
  }
  auto firsts = [&](std::size_t i) {
    std::vector<double> v;
    for (const auto& x : samples[i]) v.push_back(x.first);
    return v;
  };
  auto lasts = [&](std::size_t i) {
    std::vector<double> v;
    for (const auto& x : samples[i]) v.push_back(x.last);
    return v;
  };
  auto counts = [&](std::size_t i) {
    std::vector<std::uint64_t> v;
    for (const auto& x : samples[i]) v.push_back(x.count);
    return class_counts(v, kMaxClass);
  };
  const nlohmann::json common = {{"levelCap", L}, {"truncatedWalks", truncated[0]}};
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      const std::string pair =
          std::string(detail::sampler_name(detail::kStoppedSamplers[a])) + "_vs_" + detail::sampler_name(detail::kStoppedSamplers[b]);
      ctx.add(ks_two_sample(firsts(a), firsts(b), "first_point/" + pair), common);
      ctx.add(ks_two_sample(lasts(a), lasts(b), "last_point/" + pair), common);
      const auto ca = counts(a);
      const auto cb = counts(b);
      ctx.add(chi2_two_sample(ca, cb, "count/" + pair), {{"maxClass", kMaxClass}});
    }
  }
}

inline void suite_max_level(SuiteContext& ctx) {
  const double L = ctx.config().levelCap;
  const std::uint64_t n = ctx.replicas(1'000'000);
  for (auto s : detail::kStoppedSamplers) {
    const auto sample = ctx.replicate(detail::sampler_name(s), n, [&](Rng& g) {
      return detail::summarize_stopped(s, L, 0, g).last;
    });
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      if (t >= L) continue;
      const auto above = static_cast<std::uint64_t>(std::count_if(sample.begin(), sample.end(), [t](double x) { return x > t; }));
      ctx.add(proportion_check(above, n, max_mnu_tail(t), 3.0, std::string(detail::sampler_name(s)) + "/t=" + num(t)),
              {{"t", t}});
    }
  }
}

inline void suite_cox_besq(SuiteContext& ctx) {
  constexpr std::array<double, 3> kLevels = {0.5, 1.0, 2.0};
  constexpr std::size_t kMaxClass = 25;
  const std::uint64_t n = ctx.replicas(1'000'000);
  BesselOptions opt;
  opt.gridStep = ctx.grid_step(1e-2);
  opt.vMax = kLevels.back();
  auto countsAt = [&](const auto& sample) {
    std::array<std::uint64_t, 3> c{};
    for (std::size_t i = 0; i < kLevels.size(); ++i) c[i] = sample.count_le(kLevels[i]);
    return c;
  };
  const auto bessel = ctx.replicate("ndes_bessel", n, [&](Rng& g) { return countsAt(simulate_ndes_bessel(g, opt)); });
  const auto walk = ctx.replicate("walk", n, [&](Rng& g) { return countsAt(sample_stopped_walk(g)); });
  for (std::size_t i = 0; i < kLevels.size(); ++i) {
    const double v = kLevels[i];
    const auto cb = detail::column(bessel, i);
    for (double z : {0.3, 0.7}) {
      ctx.add(estimate_check(empirical_pgf(cb, z), ndes_pgf(v, z), 4.0, n, "pgf/v=" + num(v) + ",z=" + num(z)),
              {{"v", v}, {"z", z}, {"gridStep", opt.gridStep}});
    }
    ctx.add(chi2_two_sample(class_counts(cb, kMaxClass), class_counts(detail::column(walk, i), kMaxClass),
                            "pmf/v=" + num(v) + "/bessel_vs_walk"),
            {{"v", v}, {"gridStep", opt.gridStep}});
  }
}

inline void suite_w_representations(SuiteContext& ctx) {
  constexpr std::size_t K = 6;
  const std::uint64_t n = ctx.replicas(100'000);
  const double h = ctx.grid_step(1e-3);
  Bes3Options bes3;
  bes3.safety = ctx.config().safety;
  auto gaps = [](const std::vector<double>& w) {
    std::vector<double> d(K);
    for (std::size_t k = 0; k < K; ++k) d[k] = w[k] - (k > 0 ? w[k - 1] : 0.0);
    return d;
  };
  const std::vector<std::string> names = {"branching", "differences", "feller", "mk_infty"};
  std::vector<std::vector<std::vector<double>>> reps;
  reps.push_back(ctx.replicate(names[0], n, [&](Rng& g) { return gaps(sample_w_branching(K, g).points()); }));
  reps.push_back(ctx.replicate(names[1], n, [&](Rng& g) { return gaps(w_via_differences(K, g, h).points()); }));
  reps.push_back(ctx.replicate(names[2], n, [&](Rng& g) { return gaps(sample_feller_w_limit(K, g)); }));
  reps.push_back(ctx.replicate(names[3], n, [&](Rng& g) {
    const auto m = sample_mk_infty(K, default_mk_target(K), g, bes3);
    std::vector<double> w(K);
    for (std::size_t k = 0; k < K; ++k) w[k] = m[k + 1] - m[0];
    return gaps(w);
  }));
  for (std::size_t a = 0; a < reps.size(); ++a) {
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      for (std::size_t k : {1u, 3u, 5u}) {
        ctx.add(ks_two_sample(detail::column(reps[a], k - 1), detail::column(reps[b], k - 1),
                              "D" + std::to_string(k) + "/" + names[a] + "_vs_" + names[b]),
                {{"k", k}, {"gridStep", h}});
      }
    }
  }
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (std::size_t k = 1; k <= K; ++k) {
      for (double v : {0.2, 1.0}) {
        const auto col = detail::column(reps[r], k - 1);
        const auto above = static_cast<std::uint64_t>(std::count_if(col.begin(), col.end(), [v](double x) { return x > v; }));
        ctx.add(proportion_check(above, n, tail_dk(static_cast<long>(k), v), 3.0,
                                 "tail/" + names[r] + "/k=" + std::to_string(k) + ",v=" + num(v)),
                {{"k", k}, {"v", v}});
      }
    }
  }
}

inline void suite_q4_first(SuiteContext& ctx) {
  const std::uint64_t n = ctx.replicas(100'000);
  const double h = ctx.grid_step(1e-3);
  const auto x = ctx.replicate("q4_at_first_point", n, [&](Rng& g) { return sample_q4_cox_times(1, g, h).valueAtFirst; });
  ctx.add(ks_one_sample(x, detail::twice_gamma2_cdf, "value_at_first_point"), {{"gridStep", h}});
}

inline void suite_scaling_limit(SuiteContext& ctx) {
  constexpr std::size_t k = 200;
  const std::uint64_t n = ctx.replicas(100'000);
  const double scale = std::sqrt(static_cast<double>(k) / 2.0);
  const auto branching = ctx.replicate("branching", n, [&](Rng& g) {
    const auto w = sample_w_branching(k, g);
    return scale * (w[k - 1] - w[k - 2]);
  });
  ctx.add(ks_one_sample(branching, limit_cdf, "branching/k=" + std::to_string(k)), {{"k", k}});
  const auto direct = ctx.replicate("exp_over_chi3", n, [](Rng& g) {
    const double a = normal(g);
    const double b = normal(g);
    const double c = normal(g);
    return exponential(g) / (2.0 * std::sqrt(a * a + b * b + c * c));
  });
  ctx.add(ks_one_sample(direct, limit_cdf, "exp_over_chi3"));
}

inline void suite_mellin_moments(SuiteContext& ctx) {
  for (double s : {-0.5, 0.0, 1.0, 2.0, 2.5}) {
    ctx.add(tolerance_check(mellin_limit(s), mellin_quadrature(s), 1e-6, "mellin/s=" + num(s)), {{"s", s}});
  }
  const std::uint64_t n = ctx.replicas(100'000);
  for (auto [k, len] : {std::pair<std::size_t, std::size_t>{1, 50}, {3, 50}, {10, 200}}) {
    const std::string tag = "k=" + std::to_string(k) + ",n=" + std::to_string(len);
    const auto d = ctx.replicate(tag, n, [&](Rng& g) { return order_stats(sample_laplace_walk(len, g)).gaps[k - 1]; });
    ctx.add(estimate_check(mean_estimate(d), expected_gap(static_cast<long>(k), static_cast<long>(len)), 3.0, n,
                           "mean_gap/" + tag),
            {{"k", k}, {"n", len}});
  }
}

inline void suite_reversibility(SuiteContext& ctx) {
  constexpr std::uint64_t kNu = 3;
  {
    Rng g = ctx.stream("reversal");
    ctx.add(spacing_reversal_test(kNu, ctx.replicas(20'000), g));
  }
  // (Delta_1, Delta_2) and (Delta_nu, Delta_{nu-1}) given nu >= 2.
  struct Row {
    std::array<double, 4> d{};
    std::uint64_t truncated = 0;
  };
  const std::uint64_t n = ctx.replicas(100'000);
  const auto rows = ctx.replicate("top_spacings", n, [](Rng& g) {
    StoppedWalkOptions opt;
    opt.horizon = std::numeric_limits<double>::infinity();
    Row row;
    for (;;) {
      const auto w = sample_stopped_walk(g, opt);
      if (w.truncated) {
        ++row.truncated;
        continue;
      }
      if (w.nu < 2) continue;
      const auto s = w.spacings();
      row.d = {s[0], s[1], s[s.size() - 1], s[s.size() - 2]};
      return row;
    }
  });
  std::uint64_t truncated = 0;
  std::array<std::vector<double>, 4> col;
  std::vector<double> sumFirst;
  std::vector<double> sumLast;
  for (const auto& r : rows) {
    truncated += r.truncated;
    for (std::size_t j = 0; j < 4; ++j) col[j].push_back(r.d[j]);
    sumFirst.push_back(r.d[0] + r.d[1]);
    sumLast.push_back(r.d[2] + r.d[3]);
  }
  const nlohmann::json p = {{"truncatedWalks", truncated}};
  ctx.add(ks_one_sample(col[0], detail::exp2_cdf, "first_spacing"), p);
  ctx.add(ks_one_sample(col[1], detail::spacing_mixture_cdf, "second_spacing"), p);
  ctx.add(ks_one_sample(sumFirst, detail::spacing_pair_sum_cdf, "first_two_sum"), p);
  ctx.add(ks_one_sample(col[2], detail::exp2_cdf, "last_spacing"), p);
  ctx.add(ks_one_sample(col[3], detail::spacing_mixture_cdf, "second_last_spacing"), p);
  ctx.add(ks_one_sample(sumLast, detail::spacing_pair_sum_cdf, "last_two_sum"), p);
}

inline void suite_first_death(SuiteContext& ctx) {
  const double L = ctx.config().levelCap;
  const std::uint64_t n = ctx.replicas(1'000'000);
  BranchingOptions opt;
  opt.levelCap = L;
  auto censoredCdf = [L](std::function<double(double)> tail) {
    return [L, tail](double x) { return x < 0.0 ? 0.0 : (x < L ? 1.0 - tail(x) : 1.0); };
  };
  const auto one = ctx.replicate("one_particle", n, [&](Rng& g) {
    return std::min(run_geiger(g, 1, opt).points(true).first(), L);
  });
  ctx.add(ks_one_sample(one, censoredCdf(first_death_tail), "one_particle"), {{"levelCap", L}});
  // Given at least one initial particle the geometric start is 1 + Geometric(1/2)
  const auto some = ctx.replicate("geometric_start", n, [&](Rng& g) {
    return std::min(run_geiger(g, 1 + geometric_half(g), opt).points(true).first(), L);
  });
  ctx.add(ks_one_sample(some, censoredCdf([](double t) { return std::exp(-2.0 * t); }), "geometric_start_given_nonempty"),
          {{"levelCap", L}});

  // Unit mean number of points per unit level: E N(v) = v.
  std::vector<double> levels;
  for (double v : {0.5, 1.0, 2.0, 4.0}) {
    if (v <= L) levels.push_back(v);
  }
  for (auto s : {detail::StoppedSampler::geiger, detail::StoppedSampler::markedBd}) {
    const bool geiger = s == detail::StoppedSampler::geiger;
    const auto counts = ctx.replicate(std::string("rate/") + detail::sampler_name(s), n, [&](Rng& g) {
      const auto run = geiger ? run_geiger(g, geometric_half(g), opt) : run_marked_bd(g, bernoulli_half(g) ? 1 : 0, opt);
      const auto pts = run.points(geiger);
      std::vector<double> c;
      for (double v : levels) c.push_back(static_cast<double>(pts.count_le(v)));
      return c;
    });
    for (std::size_t i = 0; i < levels.size(); ++i) {
      ctx.add(estimate_check(mean_estimate(detail::column(counts, i)), levels[i], 3.0, n,
                             std::string("mean_count/") + detail::sampler_name(s) + "/v=" + num(levels[i])),
              {{"v", levels[i]}});
    }
  }
}

// ---------------------------------------------------------------------------
// Registry and driver.

struct SuiteInfo {
  std::string name;
  int criterion = 0;
  std::string summary;
  bool random = true;
  std::function<void(SuiteContext&)> run;
};

inline const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> suites = {
      {"agreement", 1, "truncated branching tail sum vs the squared-Bessel closed form", false, suite_agreement},
      {"series", 2, "gap tail generating function coefficients vs tail_dk", false, suite_series},
      {"stopped_walk", 3, "walk, marked birth-death and Geiger point sets agree", true, suite_stopped_walk},
      {"max_level", 4, "P(M_nu > t) = 1/(2+t) for the three samplers", true, suite_max_level},
      {"cox_besq", 5, "Cox process driven by BESQ_0 vs the stopped-walk counts", true, suite_cox_besq},
      {"w_representations", 6, "four constructions of the limiting gaps agree", true, suite_w_representations},
      {"q4_first", 7, "BESQ_4 at the first Cox point is 2 gamma_2", true, suite_q4_first},
      {"scaling_limit", 8, "scaled gap D_k at k = 200 vs the limit law", true, suite_scaling_limit},
      {"mellin_moments", 9, "Mellin transform and mean gaps", true, suite_mellin_moments},
      {"reversibility", 10, "spacings of the stopped walk are reversible", true, suite_reversibility},
      {"first_death", 11, "first death law and unit point rate per level", true, suite_first_death},
  };
  return suites;
}

inline const SuiteInfo* find_suite(std::string_view name) {
  for (const auto& s : suite_registry()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

struct SuiteOutcome {
  std::string name;
  int criterion = 0;
  bool pass = false;
  int attempts = 1;
  std::vector<TestReport> reports;
};

/// Runs one suite. With retryOnFail a failing suite is run again under a
/// derived seed, and a check fails only if it failed both times.
inline SuiteOutcome run_suite(const SuiteInfo& info, const RunConfig& cfg) {
  cfg.validate();
  auto attempt = [&](std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    SuiteContext ctx(cfg, info.name, seed);
    info.run(ctx);
    auto reports = std::move(ctx.reports());
    if (cfg.timing) {
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      for (auto& r : reports) r.runtimeMs = ms;
    }
    return reports;
  };
  SuiteOutcome out;
  out.name = info.name;
  out.criterion = info.criterion;
  out.reports = attempt(cfg.seed);
  auto allPass = [](const std::vector<TestReport>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const TestReport& r) { return r.pass; });
  };
  if (!allPass(out.reports) && cfg.retryOnFail && info.random) {
    out.attempts = 2;
    const auto second = attempt(retry_seed(cfg.seed));
    for (auto& r : out.reports) {
      if (r.pass) continue;
      const auto it = std::find_if(second.begin(), second.end(), [&](const TestReport& s) { return s.name == r.name; });
      std::ostringstream note;
      note << "first attempt failed (seed " << r.seed << ", statistic " << r.statistic;
      if (r.pvalue) note << ", p " << *r.pvalue;
      if (r.absError) note << ", error " << *r.absError;
      note << ")";
      if (it == second.end()) {
        r.note = note.str() + "; no matching check on retry";
        continue;
      }
      TestReport again = *it;
      again.note = note.str() + "; result of the retry";
      r = std::move(again);
    }
  }
  out.pass = allPass(out.reports);
  return out;
}

struct VerifyResult {
  std::vector<SuiteOutcome> suites;
  bool pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteOutcome& s) { return s.pass; });
  }
};

/// Suite names to run for "all" or a single name; throws on unknown names.
inline std::vector<const SuiteInfo*> resolve_suites(std::string_view name) {
  std::vector<const SuiteInfo*> out;
  if (name == "all") {
    for (const auto& s : suite_registry()) out.push_back(&s);
    return out;
  }
  const SuiteInfo* s = find_suite(name);
  if (!s) throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
  out.push_back(s);
  return out;
}

inline VerifyResult verify(std::string_view name, const RunConfig& cfg,
                           const std::function<void(const SuiteOutcome&)>& onSuite = {}) {
  VerifyResult res;
  for (const SuiteInfo* s : resolve_suites(name)) {
    res.suites.push_back(run_suite(*s, cfg));
    if (onSuite) onSuite(res.suites.back());
  }
  return res;
}

inline nlohmann::json to_json(const VerifyResult& res, const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  j["config"] = cfg.to_json();
  j["pass"] = res.pass();
  j["suites"] = nlohmann::json::array();
  j["reports"] = nlohmann::json::array();
  for (const auto& s : res.suites) {
    j["suites"].push_back({{"name", s.name}, {"criterion", s.criterion}, {"pass", s.pass}, {"attempts", s.attempts}});
    for (const auto& r : s.reports) j["reports"].push_back(to_json(r));
  }
  j["note"] = "each check uses threshold 0.01 or its stated tolerance; about 1% of p-value checks fail by chance";
  return j;
}

}  // namespace lwos
