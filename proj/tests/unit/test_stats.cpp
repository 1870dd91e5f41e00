#include <gtest/gtest.h>

#include <vector>

#include "sbrel/stats.hpp"

TEST(Stats, MedianMidpointForEvenCounts) {
  const std::vector<double> odd{3.0, 1.0, 2.0};
  const std::vector<double> even{4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(sbrel::median(odd), 2.0);
  EXPECT_DOUBLE_EQ(sbrel::median(even), 2.5);
}

TEST(Stats, SampleSd) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_NEAR(sbrel::sample_sd(v), 2.138089935299395, 1e-14);
  EXPECT_EQ(sbrel::sample_sd(std::vector<double>{1.0}), 0.0);
}

TEST(Stats, QuantileType7) {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(i);
  EXPECT_DOUBLE_EQ(sbrel::quantile(v, 0.9), 9.1);
  EXPECT_DOUBLE_EQ(sbrel::quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(sbrel::quantile(v, 1.0), 10.0);
}

TEST(Stats, PairwiseSumMatchesExactSmallIntegers) {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(sbrel::pairwise_sum(v), 500500.0);
}
