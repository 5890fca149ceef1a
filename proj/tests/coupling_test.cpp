#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "rkg/coupling.hpp"
#include "rkg/exactmath.hpp"

namespace rkg {
namespace {

ModelParams random_small(Rng& gen, std::int64_t max_P = 50) {
  ModelParams p;
  p.n = static_cast<std::int64_t>(3 + gen.below(198));
  p.m = static_cast<int>(1 + gen.below(3));
  p.P = static_cast<std::int64_t>(p.m + gen.below(max_P - p.m + 1));
  double total = 0.0;
  for (int j = 0; j < p.m; ++j) {
    p.a.push_back(0.05 + gen.unit());
    total += p.a.back();
  }
  for (auto& x : p.a) x /= total;
  for (int j = 0; j < p.m; ++j) p.K.push_back(static_cast<std::int64_t>(1 + gen.below(p.P)));
  std::sort(p.K.begin(), p.K.end());
  return p;
}

TEST(BetaTilde, Clamps) {
  EXPECT_NEAR(beta_tilde_star(-5.0, 1000), -1.932644733916065491, 1e-12);
  EXPECT_NEAR(beta_tilde_pound(5.0, 1000), 1.932644733916065491, 1e-12);
  EXPECT_EQ(beta_tilde_star(0.5, 1000), 0.5);
  EXPECT_EQ(beta_tilde_pound(-0.5, 1000), -0.5);
  EXPECT_NEAR(beta_tilde_star(-1.0, 3), -0.094047827616699016, 1e-12);
  EXPECT_THROW(beta_tilde_star(0.0, 2), std::domain_error);
  EXPECT_THROW(beta_tilde_pound(0.0, 2), std::domain_error);
}

TEST(Bounds, RelativeSlack) {
  EXPECT_TRUE(at_most_bound(1.0 + 1e-14, 1.0));
  EXPECT_FALSE(at_most_bound(1.0 + 1e-9, 1.0));
  EXPECT_TRUE(at_least_bound(1.0 - 1e-14, 1.0));
  EXPECT_FALSE(at_least_bound(1.0 - 1e-9, 1.0));
}

TEST(Search, BinaryMatchesLinear) {
  Rng gen({5, 5});
  for (int i = 0; i < 500; ++i) {
    const auto P = static_cast<std::int64_t>(1 + gen.below(80));
    const auto k = static_cast<std::int64_t>(gen.below(P + 1));
    const double bound = gen.unit();
    auto f = [&](std::int64_t x) { return edge_prob(P, k, x); };
    EXPECT_EQ(search_last_at_most(0, P, f, bound), search_last_at_most(0, P, f, bound, {true}));
    EXPECT_EQ(search_first_at_least(0, P, f, bound), search_first_at_least(0, P, f, bound, {true}));
  }
  auto id = [](std::int64_t x) { return static_cast<double>(x); };
  EXPECT_EQ(search_last_at_most(0, 10, id, -1.0), -1);
  EXPECT_EQ(search_first_at_least(0, 10, id, 11.0), 11);
}

TEST(Tn, MatchesExactScan) {
  Rng gen({6, 0});
  for (int i = 0; i < 300; ++i) {
    const auto P = static_cast<std::int64_t>(1 + gen.below(60));
    const auto n = static_cast<std::int64_t>(3 + gen.below(500));
    const double bt = beta_tilde_pound(-3.0 + 6.0 * gen.unit(), n);
    const auto tn = compute_Tn(P, n, bt);
    const double bound = critical_bound(n, bt);
    ASSERT_EQ(tn.negative_bound, bound < 0.0);
    if (tn.negative_bound) continue;
    std::int64_t want = -1;
    for (std::int64_t y = 0; y <= P; ++y)
      if (oracle::to_double(oracle::edge_prob(P, y, y)) <= bound) want = y;
    EXPECT_EQ(tn.value, want) << P << ' ' << n << ' ' << bt;
  }
}

TEST(Tn, NegativeBound) {
  const auto tn = compute_Tn(100, 10, -5.0);
  EXPECT_TRUE(tn.negative_bound);
  EXPECT_EQ(tn.value, 0);
}

TEST(Qjn, PrefixShapeChecked) {
  ModelParams p{100, 2, 50, {0.5, 0.5}, {3, 6}};
  const std::vector<std::int64_t> none;
  EXPECT_THROW(compute_Qjn(p, none, 1, 0.0), std::invalid_argument);
  EXPECT_EQ(compute_Qjn(p, std::vector<std::int64_t>{3}, 1, beta_from_params(p)), 6);
}

TEST(Pound, MatchesExactOracle) {
  Rng gen({21, 0});
  for (int inst = 0; inst < 300; ++inst) {
    const auto p = random_small(gen, 40);
    const auto r = pound_coupling(p);
    const auto t = oracle::pound(p.n, p.P, p.a, p.K);
    ASSERT_EQ(r.T_n.value, t.T) << inst;
    ASSERT_EQ(r.all_Tn_branch, t.all_T) << inst;
    ASSERT_EQ(r.ell, t.ell) << inst;
    ASSERT_EQ(r.Q.size(), t.Q.size()) << inst;
    for (std::size_t i = 0; i < r.Q.size(); ++i) EXPECT_EQ(r.Q[i].value, t.Q[i]) << inst;
    EXPECT_EQ(r.K_out, t.K_out) << inst;
    EXPECT_TRUE(r.all_checks_pass()) << inst;
  }
}

TEST(Pound, LinearScanAgrees) {
  Rng gen({22, 0});
  for (int inst = 0; inst < 200; ++inst) {
    const auto p = random_small(gen);
    const auto a = pound_coupling(p);
    const auto b = pound_coupling(p, SearchOptions{true});
    EXPECT_EQ(a.K_out, b.K_out);
    EXPECT_EQ(a.T_n.value, b.T_n.value);
  }
}

TEST(Pound, DominatedAndReachesBound) {
  Rng gen({23, 0});
  for (int inst = 0; inst < 300; ++inst) {
    const auto p = random_small(gen);
    const auto r = pound_coupling(p);
    for (int j = 0; j < p.m; ++j) EXPECT_LE(r.K_out[j], p.K[j]);
    EXPECT_TRUE(std::is_sorted(r.K_out.begin(), r.K_out.end()));
    if (!r.all_Tn_branch) EXPECT_GE(r.beta_out, r.beta_tilde - 1e-9);
  }
}

TEST(Star, MatchesExactOracle) {
  Rng gen({24, 0});
  for (int inst = 0; inst < 300; ++inst) {
    const auto p = random_small(gen);
    const auto r = star_coupling(p);
    const auto want = oracle::star_last(p.n, p.P, p.a, p.K);
    ASSERT_TRUE(want.has_value());
    EXPECT_EQ(r.K_out.back(), *want) << inst;
    EXPECT_TRUE(std::equal(p.K.begin(), p.K.end() - 1, r.K_out.begin()));
    EXPECT_TRUE(r.all_checks_pass()) << inst;
    EXPECT_EQ(r.K_out, star_coupling(p, SearchOptions{true}).K_out);
  }
}

TEST(Star, SingleGroupUsesSelfPairing) {
  ModelParams p{1000, 1, 10000, {1.0}, {9}};
  const auto r = star_coupling(p, -5.0);
  const double bound = critical_bound(1000, r.beta_tilde);
  EXPECT_LE(edge_prob(10000, r.K_out[0], r.K_out[0]), bound);
  EXPECT_GT(edge_prob(10000, r.K_out[0] + 1, r.K_out[0] + 1), bound);
  EXPECT_TRUE(r.beta_overridden);
  EXPECT_TRUE(r.in_regime);
}

// b_1 is within 1e-12 of 1 here, so b_1(K with K_m := x) rounds to the same
// double for every x >= K_m; only the complement sees that K_m is maximal.
TEST(Star, SaturatedEdgeProbabilities) {
  ModelParams p{13, 2, 44, {0.5393162292107766, 0.4606837707892234}, {21, 23}};
  const auto r = star_coupling(p);
  EXPECT_TRUE(r.bound_is_b1);
  EXPECT_EQ(r.K_out, (std::vector<std::int64_t>{21, 23}));
  EXPECT_TRUE(r.all_checks_pass());
  EXPECT_EQ(*oracle::star_last(p.n, p.P, p.a, p.K), 23);
}

TEST(Regime, LabelsFollowBetaSign) {
  ModelParams p{1000, 1, 10000, {1.0}, {9}};  // beta ~ 1.17
  EXPECT_FALSE(star_coupling(p).in_regime);
  EXPECT_TRUE(pound_coupling(p).in_regime);
  EXPECT_FALSE(pound_coupling(p).beta_overridden);
}

TEST(Verify, DetectsCorruptedOutputs) {
  Rng gen({25, 0});
  int star_tested = 0, pound_tested = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const auto p = random_small(gen);
    auto s = star_coupling(p);
    if (s.K_out.back() < p.P) {
      s.K_out.back() += 1;
      s.beta_out = beta_from_b1(p.n, mean_edge_prob(p.P, p.a, s.K_out, 0));
      auto checks = verify_coupling(s, p);
      EXPECT_FALSE(std::all_of(checks.begin(), checks.end(), [](auto& c) { return c.passed; })) << inst;
      ++star_tested;
    }
    auto q = pound_coupling(p);
    if (q.K_out.back() < p.P) {
      q.K_out.back() = p.K.back() + 1 <= p.P ? p.K.back() + 1 : q.K_out.back() + 1;
      auto checks = verify_coupling(q, p);
      EXPECT_FALSE(std::all_of(checks.begin(), checks.end(), [](auto& c) { return c.passed; })) << inst;
      ++pound_tested;
    }
  }
  EXPECT_GT(star_tested, 50);
  EXPECT_GT(pound_tested, 50);
}

TEST(Coupling, LargePoolsPassChecks) {
  Rng gen({26, 0});
  for (int inst = 0; inst < 30; ++inst) {
    ModelParams p;
    p.n = static_cast<std::int64_t>(100 + gen.below(100000));
    p.m = static_cast<int>(1 + gen.below(4));
    p.P = static_cast<std::int64_t>(1000 + gen.below(1000000));
    p.a.assign(p.m, 1.0 / p.m);
    const auto kmax = static_cast<std::int64_t>(std::sqrt(static_cast<double>(p.P)));
    for (int j = 0; j < p.m; ++j) p.K.push_back(static_cast<std::int64_t>(1 + gen.below(kmax)));
    std::sort(p.K.begin(), p.K.end());
    EXPECT_TRUE(star_coupling(p).all_checks_pass()) << inst;
    EXPECT_TRUE(pound_coupling(p).all_checks_pass()) << inst;
  }
}

}  // namespace
}  // namespace rkg
