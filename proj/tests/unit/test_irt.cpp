#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mc_oracles.hpp"
#include "sbrel/errors.hpp"
#include "sbrel/irt.hpp"

using sbrel::ItemParams;
using sbrel::NormalRule;

TEST(Irf, Values) {
  EXPECT_DOUBLE_EQ(sbrel::irf({1.0, 0.0, 1}, 0.0), 0.5);
  EXPECT_NEAR(sbrel::irf({1.0, 0.0, 1}, 1.0), 1.0 / (1.0 + std::exp(-1.7)), 1e-15);
  EXPECT_NEAR(sbrel::irf({1.0, 0.0, 1}, 1.0), 0.845535, 5e-7);
  EXPECT_LT(sbrel::irf({2.0, 1.0, 1}, -50.0), 1e-70);
  EXPECT_EQ(sbrel::irf({2.0, 1.0, 1}, -1e6), 0.0);
  EXPECT_EQ(sbrel::irf({2.0, 1.0, 1}, 1e6), 1.0);
}

TEST(Irf, StrictlyIncreasing) {
  const ItemParams it{1.3, -0.4, 1};
  for (double t = -6.0; t < 6.0; t += 0.05) EXPECT_LT(sbrel::irf(it, t), sbrel::irf(it, t + 0.05));
}

TEST(ItemMoments, FlatItem) {
  const auto m = sbrel::item_moments({1e-9, 0.0, 1}, NormalRule::grid(61));
  EXPECT_NEAR(m.mu, 0.5, 1e-9);
  EXPECT_NEAR(m.tau_sq, 0.0, 1e-12);
  EXPECT_NEAR(m.eps_sq, 0.25, 1e-9);
}

TEST(ItemMoments, SymmetricItemHasMeanHalf) {
  for (double a : {0.3, 1.0, 5.0}) {
    EXPECT_NEAR(sbrel::item_moments({a, 0.0, 1}, NormalRule::grid(61)).mu, 0.5, 1e-14);
  }
}

TEST(ItemMoments, BinaryDecomposition) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.01, 5.0), ub(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const auto m = sbrel::item_moments({ua(rng), ub(rng), 1}, NormalRule::grid(61));
    EXPECT_NEAR(m.sigma_sq, m.mu * (1.0 - m.mu), 0.0);
    EXPECT_NEAR(m.sigma_sq, m.tau_sq + m.eps_sq, 1e-8);
    EXPECT_GT(m.eps_sq, 0.0);
    EXPECT_LE(m.eps_sq, 0.25);
    EXPECT_GE(m.tau_sq, 0.0);
    EXPECT_LE(m.tau_sq, 0.25);
    EXPECT_GT(m.mu, 0.0);
    EXPECT_LT(m.mu, 1.0);
  }
}

TEST(ItemMoments, MatchesMonteCarloOracle) {
  const auto m = sbrel::item_moments({1.2, 0.4, 1}, NormalRule::grid(61));
  const auto mc = sbrel::testing::mc_item_moments(1.2, 0.4, 10'000'000, 20240611);
  EXPECT_NEAR(m.mu, mc.mu.mean, 3.0 * mc.mu.se);
  EXPECT_NEAR(m.tau_sq, mc.tau_sq.mean, 3.0 * mc.tau_sq.se);
  EXPECT_NEAR(m.eps_sq, mc.eps_sq.mean, 3.0 * mc.eps_sq.se);
}

TEST(ItemMoments, FocusedRuleConvergedAt61Nodes) {
  const NormalRule r61 = NormalRule::grid(61);
  const NormalRule r201 = NormalRule::grid(201);
  for (double a : {0.05, 0.5, 1.0, 2.0, 3.5, 5.0}) {
    for (double b : {-2.0, -0.7, 0.0, 1.1, 2.0, 3.5}) {
      const auto m1 = sbrel::item_moments({a, b, 1}, r61);
      const auto m2 = sbrel::item_moments({a, b, 1}, r201);
      EXPECT_NEAR(m1.mu, m2.mu, 1e-10) << a << " " << b;
      EXPECT_NEAR(m1.tau_sq, m2.tau_sq, 1e-10) << a << " " << b;
      EXPECT_NEAR(m1.eps_sq, m2.eps_sq, 1e-10) << a << " " << b;
    }
  }
}

TEST(TrueScoreCov, AcrossDimensionsIsZero) {
  EXPECT_EQ(sbrel::true_score_cov({1.0, 0.0, 1}, {1.5, 0.3, 2}, NormalRule::grid()), 0.0);
}

TEST(TrueScoreCov, SameItemIsTauSq) {
  const ItemParams it{1.7, -0.3, 1};
  const NormalRule r = NormalRule::grid();
  EXPECT_EQ(sbrel::true_score_cov(it, it, r), sbrel::item_moments(it, r).tau_sq);
}

TEST(TrueScoreCov, Symmetric) {
  const NormalRule r = NormalRule::grid();
  const ItemParams i{0.8, 1.0, 1}, j{2.2, -1.2, 1};
  EXPECT_DOUBLE_EQ(sbrel::true_score_cov(i, j, r), sbrel::true_score_cov(j, i, r));
}

TEST(TrueScoreCov, MatchesMonteCarloOracle) {
  const double cov = sbrel::true_score_cov({1.0, -0.5, 1}, {1.5, 0.5, 1}, NormalRule::grid());
  const auto mc = sbrel::testing::mc_pair_cov(1.0, -0.5, 1.5, 0.5, 10'000'000, 99);
  EXPECT_NEAR(cov, mc.mean, 3.0 * mc.se);
}

TEST(ItemPool, Validation) {
  EXPECT_THROW(sbrel::ItemPool({1}, {}), sbrel::ParameterError);
  EXPECT_THROW(sbrel::ItemPool({1}, {{0.0, 0.0, 1}}), sbrel::ParameterError);
  EXPECT_THROW(sbrel::ItemPool({1}, {{1.0, NAN, 1}}), sbrel::ParameterError);
  EXPECT_THROW(sbrel::ItemPool({2}, {{1.0, 0.0, 3}}), sbrel::ParameterError);
  EXPECT_NO_THROW(sbrel::ItemPool({2}, {{1.0, 0.0, 2}}));
}
