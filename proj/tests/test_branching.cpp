#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lwos/branching.hpp"
#include "lwos/exact.hpp"
#include "lwos/stats.hpp"
#include "lwos/walk.hpp"

using namespace lwos;

namespace {

std::vector<double> nu_probs(std::size_t maxClass) {
  const auto exact = nu_pmf_exact(maxClass);
  std::vector<double> p(maxClass + 1);
  double acc = 0.0;
  for (std::size_t k = 0; k < maxClass; ++k) {
    p[k] = static_cast<double>(exact[k]);
    acc += p[k];
  }
  p[maxClass] = 1.0 - acc;
  return p;
}

}  // namespace

TEST(Branching, CountsAndPathAreConsistent) {
  Rng g(Rng::Key{1, 1});
  BranchingOptions opt;
  opt.recordPath = true;
  for (int i = 0; i < 200; ++i) {
    const auto run = run_marked_bd(g, 3, opt);
    std::int64_t pop = 3;
    ASSERT_EQ(run.populationPath.size(), run.events.size() + 1);
    for (std::size_t k = 0; k < run.events.size(); ++k) {
      if (run.events[k].second == EventKind::birth) ++pop;
      if (run.events[k].second == EventKind::death) --pop;
      EXPECT_EQ(static_cast<std::int64_t>(run.populationPath[k + 1].second), pop);
      EXPECT_LE(run.events[k].first, opt.levelCap);
    }
    EXPECT_EQ(run.extinct, pop == 0);
  }
}

TEST(Branching, EmptyStart) {
  Rng g(Rng::Key{2, 2});
  const auto run = run_geiger(g, 0);
  EXPECT_TRUE(run.events.empty());
  EXPECT_TRUE(run.extinct);
}

TEST(Branching, MarkedCountMatchesNu) {
  constexpr std::size_t kMax = 20;
  Rng g(Rng::Key{3, 3});
  BranchingOptions opt;
  opt.countCap = 1'000'000;
  std::vector<std::uint64_t> n;
  for (int i = 0; i < 20000; ++i) n.push_back(run_marked_bd(g, bernoulli_half(g) ? 1 : 0, opt).outputCount);
  EXPECT_TRUE(chi2_gof(class_counts(n, kMax), nu_probs(kMax)).pass);
}

TEST(Branching, GeigerDeathCountMatchesNu) {
  constexpr std::size_t kMax = 20;
  Rng g(Rng::Key{4, 4});
  BranchingOptions opt;
  opt.countCap = 1'000'000;
  std::vector<std::uint64_t> n;
  for (int i = 0; i < 20000; ++i) n.push_back(run_geiger(g, geometric_half(g), opt).outputCount);
  EXPECT_TRUE(chi2_gof(class_counts(n, kMax), nu_probs(kMax)).pass);
}

TEST(Branching, FirstDeathFromOneParticle) {
  Rng g(Rng::Key{5, 5});
  std::vector<double> t;
  for (int i = 0; i < 20000; ++i) t.push_back(std::min(run_geiger(g, 1).points(true).first(), 12.0));
  EXPECT_TRUE(ks_one_sample(t, [](double x) { return x < 0.0 ? 0.0 : (x < 12.0 ? 1.0 - first_death_tail(x) : 1.0); }).pass);
}

TEST(Branching, MatchesStoppedWalkLevels) {
  constexpr double L = 12.0;
  Rng g(Rng::Key{6, 6});
  std::vector<double> walkFirst, bdFirst, gFirst;
  std::vector<double> walkLast, bdLast, gLast;
  std::vector<std::uint64_t> walkCount, bdCount, gCount;
  for (int i = 0; i < 20000; ++i) {
    const auto w = sample_stopped_walk(g);
    walkFirst.push_back(std::min(w.first_level(), L));
    walkLast.push_back(std::min(w.max_level(), L));
    walkCount.push_back(w.count_le(3.0));
    BranchingOptions opt;
    opt.levelCap = L;
    const auto rb = run_marked_bd(g, bernoulli_half(g) ? 1 : 0, opt);
    const auto b = rb.points(false);
    bdFirst.push_back(std::min(b.first(), L));
    bdLast.push_back(rb.extinct ? b.last() : L);
    bdCount.push_back(b.count_le(3.0));
    const auto rk = run_geiger(g, geometric_half(g), opt);
    const auto k = rk.points(true);
    gFirst.push_back(std::min(k.first(), L));
    gLast.push_back(rk.extinct ? k.last() : L);
    gCount.push_back(k.count_le(3.0));
  }
  EXPECT_TRUE(ks_two_sample(walkFirst, bdFirst).pass);
  EXPECT_TRUE(ks_two_sample(walkFirst, gFirst).pass);
  EXPECT_TRUE(ks_two_sample(walkLast, bdLast).pass);
  EXPECT_TRUE(ks_two_sample(walkLast, gLast).pass);
  EXPECT_TRUE(chi2_two_sample(class_counts(walkCount, 10), class_counts(bdCount, 10)).pass);
  EXPECT_TRUE(chi2_two_sample(class_counts(walkCount, 10), class_counts(gCount, 10)).pass);
}

TEST(HChain, MarginalLaw) {
  constexpr std::size_t K = 10;
  Rng g(Rng::Key{7, 7});
  std::vector<std::uint64_t> y;
  for (int i = 0; i < 20000; ++i) y.push_back(sample_h_chain(K, g).states.back());
  std::vector<double> p(K + 2, 0.0);
  for (long j = 1; j <= static_cast<long>(K); ++j) p[static_cast<std::size_t>(j)] = j * p0_power(K - 1, 1, j);
  double sum = 0.0;
  for (double q : p) sum += q;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  p.pop_back();
  EXPECT_TRUE(chi2_gof(class_counts(y, K), p).pass);
}

TEST(HChain, MatchesDoobWalkAtEvenTimes) {
  constexpr std::size_t K = 8;
  Rng g(Rng::Key{8, 8});
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  for (int i = 0; i < 20000; ++i) {
    a.push_back(sample_h_chain(K, g).states.back());
    b.push_back(sample_doob_simple_walk(2 * K, g)[2 * K] / 2);
  }
  EXPECT_TRUE(chi2_two_sample(class_counts(a, K), class_counts(b, K)).pass);
}

TEST(HChain, StaysPositive) {
  Rng g(Rng::Key{9, 9});
  const auto p = sample_h_chain(5000, g);
  for (auto s : p.states) EXPECT_GE(s, 1u);
  const auto d = sample_doob_simple_walk(5000, g);
  for (std::size_t k = 1; k < d.size(); ++k) EXPECT_GE(d[k], 1u);
}

TEST(WBranching, MatchesFellerRepresentation) {
  constexpr std::size_t K = 4;
  Rng g(Rng::Key{10, 10});
  std::vector<double> a;
  std::vector<double> b;
  for (int i = 0; i < 4000; ++i) {
    a.push_back(sample_w_branching(K, g)[K - 1]);
    b.push_back(feller_w(feller_chains(sample_laplace_walk(4000, g)), K)[K - 1]);
  }
  EXPECT_TRUE(ks_two_sample(a, b).pass);
}
