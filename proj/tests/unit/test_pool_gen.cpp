#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "sbrel/errors.hpp"
#include "sbrel/pool_gen.hpp"
#include "sbrel/stats.hpp"

using namespace sbrel;

namespace {

struct Sample {
  double mean;
  double se;
};

Sample draw_mean(const ParamDistribution& d, std::size_t count, std::uint64_t seed) {
  Engine rng = RandomStream(seed).engine();
  std::vector<double> x(count);
  for (double& v : x) v = sample_param(d, rng);
  return {mean(x), sample_sd(x) / std::sqrt(static_cast<double>(count))};
}

}  // namespace

TEST(Beta4, FromMeanSolvesShapes) {
  // a_max = 2, mean 1/3, alpha + beta = 12 -> (2, 10).
  const Beta4Spec u = Beta4Spec::from_mean(2.0 / 6.0, 12.0, 0.0, 2.0);
  EXPECT_NEAR(u.alpha, 2.0, 1e-12);
  EXPECT_NEAR(u.beta, 10.0, 1e-12);
  const Beta4Spec b = Beta4Spec::from_mean(0.0, 4.0, -2.0, 2.0);
  EXPECT_NEAR(b.alpha, 2.0, 1e-12);
  EXPECT_NEAR(b.beta, 2.0, 1e-12);
  EXPECT_NEAR(Beta4Spec::from_mean(1.0, 4.0, -2.0, 2.0).mean(), 1.0, 1e-12);
}

TEST(Beta4, FromMeanRejectsImpossible) {
  EXPECT_THROW(Beta4Spec::from_mean(2.0, 4.0, -2.0, 2.0), ParameterError);
  EXPECT_THROW(Beta4Spec::from_mean(0.0, 0.0, -2.0, 2.0), ParameterError);
  EXPECT_THROW(Beta4Spec::from_mean(0.0, 4.0, 2.0, -2.0), ParameterError);
  EXPECT_THROW((Beta4Spec{0.0, 1.0, 0.0, 1.0}.validate()), ParameterError);
}

TEST(Beta4, EmpiricalMeansWithinThreeSe) {
  for (const auto& spec : study1_case_grid(5)) {
    if (spec.num_dimensions != 1) continue;
    for (const auto* d : {&spec.a_spec, &spec.b_spec}) {
      const Sample s = draw_mean(*d, 100'000, 17);
      EXPECT_NEAR(s.mean, distribution_mean(*d), 3.0 * s.se) << spec.case_id;
    }
  }
}

TEST(Beta4, JShapedDensityIsMonotoneOverDeciles) {
  for (double frac : {1.0 / 6.0, 5.0 / 6.0}) {
    const Beta4Spec s = Beta4Spec::from_mean(frac * 2.0, 2.0, 0.0, 2.0);
    Engine rng = RandomStream(5).engine();
    std::vector<int> hist(10, 0);
    for (int i = 0; i < 200'000; ++i) {
      const double x = sample_beta4(s, rng) / 2.0;
      ++hist[std::min(9, static_cast<int>(x * 10.0))];
    }
    for (int k = 0; k + 1 < 10; ++k) {
      if (s.alpha < s.beta) {
        EXPECT_GT(hist[k], hist[k + 1]);
      } else {
        EXPECT_LT(hist[k], hist[k + 1]);
      }
    }
  }
}

TEST(Discrete, Validation) {
  EXPECT_THROW((DiscreteSpec{{1.0, 2.0}, {0.5, 0.6}}.validate()), ParameterError);
  EXPECT_THROW((DiscreteSpec{{1.0}, {0.5, 0.5}}.validate()), ParameterError);
  EXPECT_NO_THROW((DiscreteSpec{{0.5, 2.0}, {0.1, 0.9}}.validate()));
  EXPECT_NEAR((DiscreteSpec{{0.5, 2.0}, {0.1, 0.9}}.mean()), 1.85, 1e-15);
}

TEST(CaseGrid, Counts) {
  EXPECT_EQ(study1_case_grid(2).size(), 54u);
  EXPECT_EQ(study1_case_grid(5).size(), 54u);
  EXPECT_EQ(study2_case_grid(1).size(), 15u);
  EXPECT_EQ(study2_case_grid(2).size(), 15u);
  EXPECT_EQ(study2_case_grid(3).size(), 100u);
  EXPECT_THROW(study2_case_grid(4), ParameterError);
  std::set<std::string> ids;
  for (const auto& c : study1_case_grid(2)) ids.insert(c.case_id);
  EXPECT_EQ(ids.size(), 54u);
}

TEST(CaseGrid, Study1Means) {
  std::set<double> a_means, b_means, sums;
  for (const auto& c : study1_case_grid(2)) {
    a_means.insert(std::round(distribution_mean(c.a_spec) * 1000.0) / 1000.0);
    b_means.insert(distribution_mean(c.b_spec));
    const auto& a = std::get<Beta4Spec>(c.a_spec);
    sums.insert(std::round(a.alpha + a.beta));
  }
  EXPECT_EQ(a_means, (std::set<double>{0.333, 1.0, 1.667}));
  EXPECT_EQ(b_means, (std::set<double>{-1.0, 0.0, 1.0}));
  EXPECT_EQ(sums, (std::set<double>{2.0, 12.0}));
}

TEST(BuildPool, Deterministic) {
  const auto spec = study1_case_grid(2, 99)[40];
  const ItemPool p1 = build_pool(spec);
  const ItemPool p2 = build_pool(spec);
  ASSERT_EQ(p1.size(), p2.size());
  for (std::size_t i = 0; i < p1.size(); ++i) EXPECT_EQ(p1[i], p2[i]);
  auto other = spec;
  other.seed = 100;
  EXPECT_FALSE(build_pool(other)[0] == p1[0]);
}

TEST(BuildPool, DimensionCountsWithinBinomialBand) {
  // Binomial(1000, 0.2): the central 99.9% interval is [159, 243].
  for (const auto& spec : study1_case_grid(2, 3)) {
    if (spec.num_dimensions != 5) continue;
    const ItemPool pool = build_pool(spec);
    std::vector<int> counts(5, 0);
    for (const auto& it : pool.items()) ++counts[static_cast<std::size_t>(it.dim - 1)];
    for (int c : counts) {
      EXPECT_GE(c, 159) << spec.case_id;
      EXPECT_LE(c, 243) << spec.case_id;
    }
  }
}

TEST(BuildPool, SupportBounds) {
  for (int a_max : {2, 5}) {
    for (const auto& spec : study1_case_grid(a_max, 1)) {
      for (const auto& it : build_pool(spec).items()) {
        ASSERT_GT(it.a, 0.0);
        ASSERT_LE(it.a, a_max);
        ASSERT_GE(it.b, -2.0);
        ASSERT_LE(it.b, 2.0);
      }
    }
  }
  for (const auto& spec : study2_case_grid(1)) {
    for (const auto& it : build_pool(spec).items()) {
      ASSERT_TRUE(it.a == 0.5 || it.a == 2.0);
      ASSERT_TRUE(it.b == -1.7 || it.b == 1.7);
    }
  }
}

TEST(CaseSpecJson, RoundTrip) {
  for (const auto& spec : {study1_case_grid(5, 7)[3], study2_case_grid(2, 7)[4]}) {
    nlohmann::json j = spec;
    const auto back = j.get<PoolCaseSpec>();
    EXPECT_EQ(back.case_id, spec.case_id);
    const ItemPool p1 = build_pool(spec);
    const ItemPool p2 = build_pool(back);
    for (std::size_t i = 0; i < p1.size(); ++i) ASSERT_EQ(p1[i], p2[i]);
  }
}

TEST(PoolFile, ParsesVariants) {
  const ItemPool p = parse_pool_text("\xEF\xBB\xBF# comment\na;b;dim\n1.0;0.5;1\n\n2.0;-1;3\n");
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.num_dimensions(), 3);
  EXPECT_EQ(p[1], (ItemParams{2.0, -1.0, 3}));
  const ItemPool q = parse_pool_text("a\tb\r\n0.7\t0.1\r\n");
  EXPECT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0].dim, 1);
}

TEST(PoolFile, ErrorsNameTheLine) {
  try {
    parse_pool_text("a,b\n1,0\n1,zero\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  try {
    parse_pool_text("a,b\n1,0\n-1,0\n");
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_pool_text("x,y\n1,0\n"), ParseError);
  EXPECT_THROW(parse_pool_text("a,b\n1,0,2\n"), ParseError);
  EXPECT_THROW(parse_pool_text("a,b\n"), ParseError);
  EXPECT_THROW(parse_pool_text("a,b,dim\n1,0,1.5\n"), ParseError);
}

TEST(PoolFile, SixtyItemFile) {
  const auto path = std::filesystem::temp_directory_path() / "sbrel_pool60.csv";
  {
    std::ofstream out(path);
    out << "a,b\n";
    for (int i = 0; i < 60; ++i) out << 0.5 + 0.02 * i << "," << -1.5 + 0.05 * i << "\n";
  }
  EXPECT_EQ(load_external_pool(path).size(), 60u);
  std::filesystem::remove(path);
  try {
    load_external_pool(path);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
  }
}
