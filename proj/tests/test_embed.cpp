#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lwos/bessel.hpp"
#include "lwos/branching.hpp"
#include "lwos/embed.hpp"
#include "lwos/exact.hpp"
#include "lwos/stats.hpp"

using namespace lwos;

TEST(Embed, BrownianAtPoissonTimesIsLaplaceWalk) {
  Rng g(Rng::Key{1, 1});
  std::vector<double> inc;
  for (int i = 0; i < 2000; ++i) {
    const auto p = sample_poisson_brownian(10, g);
    ASSERT_TRUE(std::is_sorted(p.times.begin(), p.times.end()));
    for (std::size_t k = 0; k < 10; ++k) inc.push_back(p.values[k] - (k > 0 ? p.values[k - 1] : 0.0));
  }
  EXPECT_TRUE(ks_one_sample(inc, [](double x) { return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x); }).pass);
}

TEST(Embed, BridgeMinimumReflectionFormula) {
  Rng g(Rng::Key{2, 2});
  constexpr int kReps = 100000;
  struct Case {
    double x, y, t, m;
  };
  for (const auto& c : {Case{0.0, 0.0, 1.0, -0.5}, Case{1.0, 0.0, 2.0, -0.3}, Case{0.5, 1.5, 0.5, 0.2}}) {
    std::uint64_t below = 0;
    for (int i = 0; i < kReps; ++i) {
      const double m = sample_bridge_minimum(c.x, c.y, c.t, g);
      EXPECT_LE(m, std::min(c.x, c.y));
      below += m < c.m;
    }
    const double p = std::exp(-2.0 * (c.x - c.m) * (c.y - c.m) / c.t);
    EXPECT_TRUE(proportion_check(below, kReps, p, 3.0).pass) << c.x << " " << c.y;
  }
}

TEST(Bes3Poisson, ValuesArePositiveAndDistinct) {
  Rng g(Rng::Key{3, 3});
  for (int i = 0; i < 200; ++i) {
    const auto s = sample_bes3_poisson(3.0, g);
    for (std::size_t k = 0; k < s.size(); ++k) {
      EXPECT_GT(s[k], 0.0);
      EXPECT_LE(s[k], 3.0);
      if (k > 0) EXPECT_LT(s[k - 1], s[k]);
    }
  }
}

TEST(Bes3Poisson, MatchesCoxWithBesq2Intensity) {
  Rng g(Rng::Key{4, 4});
  constexpr int kReps = 10000;
  std::vector<double> counts;
  std::vector<double> firstBes;
  std::vector<double> firstCox;
  for (int i = 0; i < kReps; ++i) {
    const auto s = sample_bes3_poisson(2.0, g);
    counts.push_back(static_cast<double>(s.count_le(1.0)));
    firstBes.push_back(std::min(s.first(), 2.0));
    const auto c = cox_points(besq_path(2.0, 0.0, 0.01, 2.0, g), 0.5, g);
    firstCox.push_back(std::min(c.first(), 2.0));
  }
  // E count <= 1 = int_0^1 (1/2) E Q_2(0, v) dv = 1/2
  EXPECT_TRUE(estimate_check(mean_estimate(counts), 0.5, 4.0, kReps).pass);
  EXPECT_TRUE(ks_two_sample(firstBes, firstCox).pass);
}

TEST(Bes3Poisson, SafetyDoesNotChangeLaw) {
  Rng g(Rng::Key{5, 5});
  Bes3Options tight;
  tight.safety = 1.0;
  Bes3Options loose;
  loose.safety = 6.0;
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  std::vector<double> fa;
  std::vector<double> fb;
  for (int i = 0; i < 10000; ++i) {
    const auto x = sample_bes3_poisson(2.0, g, tight);
    const auto y = sample_bes3_poisson(2.0, g, loose);
    a.push_back(x.count_le(2.0));
    b.push_back(y.count_le(2.0));
    fa.push_back(x.empty() ? 2.0 : x.last());
    fb.push_back(y.empty() ? 2.0 : y.last());
  }
  EXPECT_TRUE(chi2_two_sample(class_counts(a, 12), class_counts(b, 12)).pass);
  EXPECT_TRUE(ks_two_sample(fa, fb).pass);
}

TEST(Bes3Poisson, StepBudgetIsReported) {
  Rng g(Rng::Key{6, 6});
  Bes3Options opt;
  opt.stepBudget = 3;
  EXPECT_THROW(sample_bes3_poisson(50.0, g, opt), std::runtime_error);
}

TEST(MkInfty, GapsMatchBranchingW) {
  Rng g(Rng::Key{7, 7});
  std::vector<double> a1, a2, b1, b2;
  for (int i = 0; i < 10000; ++i) {
    const auto m = sample_mk_infty(2, default_mk_target(2), g);
    ASSERT_EQ(m.size(), 3u);
    a1.push_back(m[1] - m[0]);
    a2.push_back(m[2] - m[1]);
    const auto w = sample_w_branching(2, g);
    b1.push_back(w[0]);
    b2.push_back(w[1] - w[0]);
  }
  EXPECT_TRUE(ks_two_sample(a1, b1).pass);
  EXPECT_TRUE(ks_two_sample(a2, b2).pass);
}

TEST(MkInfty, CountAboveMinimumIsClusterLaw) {
  constexpr std::size_t kMax = 15;
  Rng g(Rng::Key{8, 8});
  std::vector<std::uint64_t> n;
  for (int i = 0; i < 10000; ++i) {
    const auto m = sample_mk_infty(40, default_mk_target(40), g);
    std::uint64_t c = 0;
    for (std::size_t k = 1; k < m.size(); ++k) c += m[k] - m[0] <= 1.0;
    n.push_back(c);
  }
  const auto s = cluster_pmf_series(2.0, 1.0, kMax);
  std::vector<double> p(kMax + 1);
  double acc = 0.0;
  for (std::size_t k = 0; k < kMax; ++k) {
    p[k] = s[k];
    acc += s[k];
  }
  p[kMax] = 1.0 - acc;
  EXPECT_TRUE(chi2_gof(class_counts(n, kMax), p).pass);
}

TEST(MinimumGap, StabilizesAndMatchesBesselLimit) {
  Rng g(Rng::Key{9, 9});
  std::vector<double> small;
  std::vector<double> large;
  std::vector<double> limit;
  for (int i = 0; i < 5000; ++i) {
    const double x = sample_walk_minimum_gap(500, g);
    EXPECT_GE(x, 0.0);
    small.push_back(x);
    large.push_back(sample_walk_minimum_gap(2000, g));
    limit.push_back(sample_mk_infty(1, default_mk_target(1), g)[0]);
  }
  EXPECT_TRUE(ks_two_sample(small, large).pass);
  EXPECT_TRUE(ks_two_sample(large, limit).pass);
}
