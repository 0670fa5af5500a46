#include <gtest/gtest.h>

#include <stdexcept>

#include "wald/missing_data.hpp"

using namespace wald;

TEST(MidpointEstimate, Examples) {
  EXPECT_DOUBLE_EQ(midpoint_estimate(0.5, {1.0, 10}), 0.5);
  EXPECT_NEAR(midpoint_estimate(0.4, {0.8, 10}), 0.42, 1e-15);
  for (double m : {0.0, 0.3, 1.0}) EXPECT_EQ(midpoint_estimate(m, {0.0, std::nullopt}), 0.5);
}

TEST(MidpointEstimate, IsTheCenterOfTheIdentificationInterval) {
  for (double share : {0.1, 0.5, 0.9})
    for (double m : {0.0, 0.25, 1.0}) {
      const double lo = m * share, hi = m * share + (1.0 - share);
      EXPECT_NEAR(midpoint_estimate(m, {share, 5}), 0.5 * (lo + hi), 1e-15);
    }
}

TEST(MidpointMaxRegret, Examples) {
  EXPECT_NEAR(midpoint_max_regret({1.0, 25}), 0.01, 1e-15);
  EXPECT_NEAR(midpoint_max_regret({0.8, 100}), 0.0116, 1e-15);
  EXPECT_NEAR(midpoint_max_regret({0.0, std::nullopt}), 0.25, 1e-15);
}

TEST(MidpointMaxRegret, StrictlyDecreasingInK) {
  for (double share : {0.3, 0.8, 1.0})
    for (int k = 1; k < 200; ++k) EXPECT_LT(midpoint_max_regret({share, k + 1}), midpoint_max_regret({share, k}));
}

TEST(MidpointMaxRegret, CompleteDataIsQuarterOverK) {
  for (int k : {1, 9, 400}) EXPECT_NEAR(midpoint_max_regret({1.0, k}), 0.25 / k, 1e-15);
}

TEST(MidpointMaxRegret, Validation) {
  EXPECT_THROW(midpoint_max_regret({1.2, 10}), std::invalid_argument);
  EXPECT_THROW(midpoint_max_regret({0.5, std::nullopt}), std::invalid_argument);
  EXPECT_THROW(midpoint_max_regret({0.5, 0}), std::invalid_argument);
}

TEST(Counterfactual, Examples) {
  const auto a = counterfactual_midpoints(0.5, 0.6, 0.25);
  EXPECT_NEAR(a.if_all_a, 0.5, 1e-15);
  EXPECT_NEAR(a.if_all_b, 0.4, 1e-15);
  const auto b = counterfactual_midpoints(0.3, 1.0, std::nullopt);
  EXPECT_NEAR(b.if_all_a, 0.3, 1e-15);
  EXPECT_NEAR(b.if_all_b, 0.5, 1e-15);
  for (double s : {0.0, 0.2, 1.0}) {
    const auto c = counterfactual_midpoints(0.5, s, 0.5);
    EXPECT_NEAR(c.if_all_a, 0.5, 1e-15);
    EXPECT_NEAR(c.if_all_b, 0.5, 1e-15);
  }
  EXPECT_THROW(counterfactual_midpoints(std::nullopt, 0.5, 0.5), std::invalid_argument);
}

TEST(DesignTable, RanksByMaxRegret) {
  const auto t = design_max_regret_table({{0.8, 100}, {1.0, 25}});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].setting.observed_share, 1.0);
  EXPECT_NEAR(t[0].max_regret, 0.01, 1e-15);
  EXPECT_NEAR(t[1].max_regret, 0.0116, 1e-15);
  EXPECT_EQ(design_max_regret_table({{0.9, 50}}).size(), 1u);
}

TEST(DesignTable, TiesKeepAStableOrder) {
  const auto t = design_max_regret_table({{0.9, 50}, {0.9, 50}});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].max_regret, t[1].max_regret);
  for (const auto& row : t) {
    EXPECT_EQ(row.setting.observed_share, 0.9);
    EXPECT_EQ(row.setting.observed_count, 50);
  }
}
