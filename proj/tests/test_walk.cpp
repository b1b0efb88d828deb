#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lwos/exact.hpp"
#include "lwos/walk.hpp"

using namespace lwos;

namespace {

// pmf of N_des(v) through classes 0..maxClass-1, remainder in the last class.
std::vector<double> ndes_probs(double v, std::size_t maxClass) {
  const auto s = ndes_pmf_series(v, maxClass);
  std::vector<double> p(maxClass + 1);
  double acc = 0.0;
  for (std::size_t k = 0; k < maxClass; ++k) {
    p[k] = s[k];
    acc += s[k];
  }
  p[maxClass] = 1.0 - acc;
  return p;
}

}  // namespace

TEST(OrderStats, HandCase) {
  WalkPath p;
  p.increments = {-1.2, 1.9};
  p.sums = {0.0, -1.2, 0.7};
  const auto o = order_stats(p);
  EXPECT_EQ(o.sorted, (std::vector<double>{-1.2, 0.0, 0.7}));
  ASSERT_EQ(o.gaps.size(), 2u);
  EXPECT_DOUBLE_EQ(o.gaps[0], 1.2);
  EXPECT_DOUBLE_EQ(o.gaps[1], 0.7);
  EXPECT_DOUBLE_EQ(o.shifted[2], 1.9);
}

TEST(LaplaceWalk, SumsAreDistinct) {
  Rng g(Rng::Key{1, 1});
  const auto p = sample_laplace_walk(500, g);
  ASSERT_EQ(p.sums.size(), 501u);
  EXPECT_FALSE(detail::has_tie(p.sums));
  for (std::size_t k = 0; k < 500; ++k) EXPECT_NEAR(p.sums[k + 1] - p.sums[k], p.increments[k], 1e-12);
}

TEST(Feller, ReconstructsPath) {
  Rng g(Rng::Key{2, 2});
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = sample_laplace_walk(2000, g);
    const auto f = feller_chains(p);
    EXPECT_EQ(f.up.size() + f.down.size(), 2002u);
    EXPECT_LT(reconstruction_error(p, f), 1e-9);
  }
}

TEST(Feller, ChainsFromSimpleWalk) {
  WalkPath p;
  p.increments = {1, -1, -1, 1, 1};
  p.sums = {0, 1, 0, -1, 0, 1};
  const auto f = feller_chains(p);
  EXPECT_EQ(f.up, (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(f.down, (std::vector<double>{0, -1, -2, -1}));
  EXPECT_EQ(reconstruction_error(p, f), 0.0);
}

TEST(Feller, WIsSortedAndPositive) {
  Rng g(Rng::Key{3, 3});
  const auto f = feller_chains(sample_laplace_walk(1000, g));
  const auto w = feller_w(f, 50);
  ASSERT_EQ(w.size(), 50u);
  EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
  EXPECT_GT(w.front(), 0.0);
}

TEST(Tanaka, HandCase) {
  const auto c = tanaka_clusters({0.0, 2.0, 1.0, 3.0, 4.0, 3.5});
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[0].center, 1.0);
  EXPECT_EQ(c[0].offsets, (std::vector<double>{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(c[1].center, 3.0);
  EXPECT_EQ(c[1].offsets, (std::vector<double>{0.0}));
  EXPECT_DOUBLE_EQ(c[2].center, 3.5);
  EXPECT_EQ(c[2].offsets, (std::vector<double>{0.0, 0.5}));
}

TEST(Tanaka, CentersIncreaseAndOffsetsNonnegative) {
  Rng g(Rng::Key{4, 4});
  const auto f = feller_chains(sample_laplace_walk(5000, g));
  const auto c = tanaka_clusters(f.up);
  std::size_t total = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) EXPECT_GT(c[i].center, c[i - 1].center);
    ASSERT_FALSE(c[i].offsets.empty());
    EXPECT_EQ(c[i].offsets.front(), 0.0);
    for (double o : c[i].offsets) EXPECT_GE(o, 0.0);
    total += c[i].offsets.size();
  }
  EXPECT_EQ(total + 1, f.up.size());
}

TEST(Sojourn, AsymptoticMatchesExact) {
  for (long n : {1000L, 5000L, 100000L}) {
    EXPECT_NEAR(detail::u_asymptotic(static_cast<double>(n)) / u_central(n), 1.0, 1e-13);
  }
}

TEST(Sojourn, MatchesDirectSimulation) {
  // Oracle: a walk entering above a level at Exp(1) and the number of its
  // positions above the level.
  constexpr std::size_t kMax = 25;
  Rng g(Rng::Key{5, 5});
  std::vector<std::uint64_t> direct(20000);
  for (auto& t : direct) {
    double x = exponential(g);
    std::uint64_t m = 0;
    while (x > 0.0 && m < kMax) {
      ++m;
      x += laplace(g);
    }
    t = m;
  }
  std::vector<std::uint64_t> drawn(20000);
  for (auto& t : drawn) t = sample_sojourn_length(g);
  std::vector<double> p(kMax + 1, 0.0);
  for (std::size_t m = 1; m < kMax; ++m) p[m] = 2.0 * u_central(static_cast<long>(m)) - 2.0 * u_central(static_cast<long>(m + 1));
  p[kMax] = 2.0 * u_central(kMax);
  EXPECT_TRUE(chi2_gof(class_counts(direct, kMax), p).pass);
  EXPECT_TRUE(chi2_gof(class_counts(drawn, kMax), p).pass);
}

TEST(StoppedWalk, OvershootIsExponential) {
  Rng g(Rng::Key{6, 6});
  std::vector<double> o;
  for (int i = 0; i < 20000; ++i) o.push_back(sample_stopped_walk(g).overshoot);
  EXPECT_TRUE(ks_one_sample(o, [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x); }).pass);
}

TEST(StoppedWalk, NuLaw) {
  constexpr std::size_t kMax = 30;
  const auto exact = nu_pmf_exact(kMax);
  std::vector<double> p(kMax + 1);
  double acc = 0.0;
  for (std::size_t k = 0; k < kMax; ++k) {
    p[k] = static_cast<double>(exact[k]);
    acc += p[k];
  }
  p[kMax] = 1.0 - acc;
  Rng g(Rng::Key{7, 7});
  std::vector<std::uint64_t> nu;
  for (int i = 0; i < 20000; ++i) nu.push_back(sample_stopped_walk(g).nu);
  EXPECT_TRUE(chi2_gof(class_counts(nu, kMax), p).pass);
}

TEST(StoppedWalk, FirstAndLastLevelLaws) {
  constexpr double L = 12.0;
  Rng g(Rng::Key{8, 8});
  std::vector<double> first;
  std::vector<double> last;
  for (int i = 0; i < 20000; ++i) {
    const auto w = sample_stopped_walk(g);
    first.push_back(std::min(w.first_level(), L));
    last.push_back(std::min(w.max_level(), L));
  }
  EXPECT_TRUE(ks_one_sample(first, [](double x) { return x < 0.0 ? 0.0 : (x < L ? 1.0 - mk_tail(1, x) : 1.0); }).pass);
  EXPECT_TRUE(ks_one_sample(last, [](double x) { return x < 0.0 ? 0.0 : (x < L ? 1.0 - max_mnu_tail(x) : 1.0); }).pass);
}

TEST(StoppedWalk, CountLaw) {
  constexpr std::size_t kMax = 12;
  Rng g(Rng::Key{9, 9});
  std::vector<std::uint64_t> n;
  for (int i = 0; i < 20000; ++i) n.push_back(sample_stopped_walk(g).count_le(1.0));
  EXPECT_TRUE(chi2_gof(class_counts(n, kMax), ndes_probs(1.0, kMax)).pass);
}

TEST(StoppedWalk, HorizonDoesNotChangeLawBelowIt) {
  Rng g(Rng::Key{10, 10});
  StoppedWalkOptions low;
  low.horizon = 6.0;
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  std::vector<std::uint64_t> na;
  std::vector<std::uint64_t> nb;
  for (int i = 0; i < 20000; ++i) {
    const auto w = sample_stopped_walk(g, low);
    a.push_back(w.count_le(5.0));
    na.push_back(w.nu);
    const auto u = sample_stopped_walk(g);
    b.push_back(u.count_le(5.0));
    nb.push_back(u.nu);
  }
  EXPECT_TRUE(chi2_two_sample(class_counts(a, 15), class_counts(b, 15)).pass);
  EXPECT_TRUE(chi2_two_sample(class_counts(na, 30), class_counts(nb, 30)).pass);
}

TEST(StoppedWalk, SpacingsSumToLevels) {
  Rng g(Rng::Key{11, 11});
  for (int i = 0; i < 100; ++i) {
    const auto w = sample_stopped_walk(g);
    const auto d = w.spacings();
    double s = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      EXPECT_GT(d[k], 0.0);
      s += d[k];
      EXPECT_NEAR(s, w.levels[k], 1e-9);
    }
    EXPECT_EQ(w.levels.size() + w.levelsAboveHorizon, w.nu);
  }
}

TEST(StoppedWalk, StepCapFlagsTruncation) {
  Rng g(Rng::Key{12, 12});
  StoppedWalkOptions opt;
  opt.stepCap = 1;
  opt.horizon = kInf;
  int truncated = 0;
  for (int i = 0; i < 200; ++i) {
    const auto w = sample_stopped_walk(g, opt);
    if (w.truncated) {
      ++truncated;
      EXPECT_TRUE(std::isnan(w.overshoot));
      EXPECT_FALSE(w.complete());
    }
  }
  EXPECT_GT(truncated, 50);
  EXPECT_LT(truncated, 150);
}

TEST(Conditioned, AcceptanceRates) {
  Rng g(Rng::Key{13, 13});
  const auto nu = nu_pmf_exact(5);
  double below = 0.0;
  for (std::size_t k = 0; k < 5; ++k) below += static_cast<double>(nu[k]);
  std::uint64_t attempts = 0;
  constexpr int kDraws = 4000;
  for (int i = 0; i < kDraws; ++i) {
    const auto c = sample_conditioned_excursion(5.0, ExcursionMode::longer, g);
    EXPECT_GE(c.walk.nu, 5u);
    attempts += c.attempts;
  }
  EXPECT_NEAR(kDraws / static_cast<double>(attempts), 1.0 - below, 0.03 * (1.0 - below) * 3.0);

  attempts = 0;
  for (int i = 0; i < kDraws; ++i) {
    const auto c = sample_conditioned_excursion(3.0, ExcursionMode::higher, g);
    EXPECT_GT(c.walk.levelsAboveHorizon, 0u);
    attempts += c.attempts;
  }
  EXPECT_NEAR(kDraws / static_cast<double>(attempts), max_mnu_tail(3.0), 0.02);
}

TEST(Reversal, SpacingsGivenNuAreExchangeableInReverse) {
  Rng g(Rng::Key{14, 14});
  const auto r = spacing_reversal_test(3, 4000, g, 0.001);
  EXPECT_TRUE(r.pass) << *r.pvalue;
}

TEST(LadderTime, MatchesExactLaw) {
  constexpr std::size_t kMax = 30;
  Rng g(Rng::Key{15, 15});
  std::vector<std::uint64_t> t(40000);
  for (auto& x : t) x = sample_ladder_time(g);
  std::vector<double> p(kMax + 1, 0.0);
  for (std::size_t n = 1; n < kMax; ++n) p[n] = u_central(static_cast<long>(n - 1)) - u_central(static_cast<long>(n));
  p[kMax] = u_central(kMax - 1);
  EXPECT_TRUE(chi2_gof(class_counts(t, kMax), p).pass);
}

TEST(LadderTime, TailBeyondLinearRange) {
  // P(tau > n) = u_n across the switch to the asymptotic inversion.
  Rng g(Rng::Key{16, 16});
  constexpr std::uint64_t kDraws = 200000;
  std::uint64_t above500 = 0;
  std::uint64_t above5000 = 0;
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    const auto t = sample_ladder_time(g);
    above500 += t > 500;
    above5000 += t > 5000;
  }
  EXPECT_TRUE(proportion_check(above500, kDraws, u_central(500), 4.0).pass);
  EXPECT_TRUE(proportion_check(above5000, kDraws, u_central(5000), 4.0).pass);
}

TEST(FellerLimit, StepKeepsChainPositive) {
  Rng g(Rng::Key{17, 17});
  double x = 0.0;
  for (int i = 0; i < 100000; ++i) {
    x = feller_up_step(x, g);
    ASSERT_GT(x, 0.0);
  }
}

TEST(FellerLimit, PrefixMatchesWalkChains) {
  // The first values of the upward chain of a long walk are those of the
  // infinite chain.
  Rng g(Rng::Key{18, 18});
  std::vector<double> a1, a3, b1, b3;
  for (int i = 0; i < 5000; ++i) {
    const auto f = feller_chains(sample_laplace_walk(2000, g));
    if (f.up.size() < 4) continue;
    a1.push_back(f.up[1]);
    a3.push_back(f.up[3]);
    double x = feller_up_step(0.0, g);
    b1.push_back(x);
    x = feller_up_step(feller_up_step(x, g), g);
    b3.push_back(x);
  }
  EXPECT_TRUE(ks_two_sample(a1, b1).pass);
  EXPECT_TRUE(ks_two_sample(a3, b3).pass);
}

TEST(FellerLimit, GapsMatchExactTails) {
  Rng g(Rng::Key{19, 19});
  std::vector<std::vector<double>> d(5);
  for (int i = 0; i < 20000; ++i) {
    const auto w = sample_feller_w_limit(5, g);
    for (std::size_t k = 0; k < 5; ++k) d[k].push_back(w[k] - (k > 0 ? w[k - 1] : 0.0));
  }
  for (long k = 1; k <= 5; ++k) {
    const auto r = ks_one_sample(d[static_cast<std::size_t>(k - 1)], [k](double x) { return x <= 0.0 ? 0.0 : 1.0 - tail_dk(k, x); });
    EXPECT_TRUE(r.pass) << k;
  }
}

TEST(FellerLimit, HorizonDoesNotChangeLaw) {
  Rng g(Rng::Key{20, 20});
  std::vector<double> a, b;
  for (int i = 0; i < 20000; ++i) {
    a.push_back(sample_feller_w_limit(3, g, 4.0)[2]);
    b.push_back(sample_feller_w_limit(3, g, 30.0)[2]);
  }
  EXPECT_TRUE(ks_two_sample(a, b).pass);
}
