#include <gtest/gtest.h>

#include <algorithm>
#include <stdexcept>

#include "wald/decision_model.hpp"

using namespace wald;

TEST(Welfare, ThresholdExamples) {
  EXPECT_NEAR(threshold(WelfareModel::normalized(0.6)), 0.4, 1e-15);
  EXPECT_NEAR(threshold(WelfareModel::normalized(0.5)), 0.5, 1e-15);
  EXPECT_NEAR(threshold(WelfareModel(0.9, 0.2, 0.4, 0.8)), 5.0 / 11.0, 1e-15);
}

TEST(Welfare, RejectsDegenerateUtilities) {
  EXPECT_THROW(WelfareModel(0.4, 0.2, 0.9, 0.8), std::invalid_argument);
  EXPECT_THROW(WelfareModel(0.9, 0.8, 0.4, 0.2), std::invalid_argument);
  EXPECT_THROW(WelfareModel::normalized(1.0), std::invalid_argument);
}

TEST(Welfare, GeneralModelMatchesItsNormalization) {
  const WelfareModel general(0.9, 0.2, 0.4, 0.8);
  const auto norm = WelfareModel::normalized(1.0 - threshold(general));
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    EXPECT_EQ(optimal_action(p, general), optimal_action(p, norm)) << p;
  }
}

TEST(ChooseTreatment, Examples) {
  const auto w = WelfareModel::normalized(0.6);
  EXPECT_EQ(choose_treatment(0.4, w), Action::surveillance);
  EXPECT_EQ(choose_treatment(0.0, w), Action::surveillance);
  EXPECT_EQ(choose_treatment(0.0, WelfareModel(0.9, 0.2, 0.4, 0.8)), Action::surveillance);
  EXPECT_EQ(choose_treatment(0.5, w), Action::aggressive);
  EXPECT_EQ(to_string(Action::surveillance), "A");
  EXPECT_EQ(to_string(Action::aggressive), "B");
}

TEST(ChooseTreatment, DependsOnlyOnTheSideOfTheThreshold) {
  const auto w = WelfareModel::normalized(0.6);
  for (int i = 0; i <= 1000; ++i) {
    const double e = i / 1000.0;
    EXPECT_EQ(choose_treatment(e, w) == Action::surveillance, e <= threshold(w));
  }
}

TEST(StateRegret, Examples) {
  const auto w = WelfareModel::normalized(0.6);
  EXPECT_NEAR(state_regret(Action::aggressive, 0.3, w), 0.1, 1e-15);
  EXPECT_EQ(state_regret(Action::aggressive, 0.55, w), 0.0);
  EXPECT_NEAR(state_regret(Action::surveillance, 0.55, w), 0.15, 1e-15);
  EXPECT_NEAR(state_regret(Action::surveillance, threshold(w), w), 0.0, 1e-15);
  EXPECT_NEAR(state_regret(Action::aggressive, threshold(w), w), 0.0, 1e-15);
}

TEST(StateRegret, ContinuousAcrossTheThreshold) {
  const auto w = WelfareModel::normalized(0.6);
  const double eps = 1e-9;
  for (auto a : {Action::surveillance, Action::aggressive}) {
    EXPECT_NEAR(state_regret(a, 0.4 - eps, w), state_regret(a, 0.4 + eps, w), 1e-8);
  }
}

TEST(LossRegret, MseExamples) {
  EXPECT_EQ(mse_regret(0.0, 0.0), 0.0);
  EXPECT_NEAR(mse_regret(1.0, 0.3), 0.49, 1e-15);
  EXPECT_NEAR(mse_regret(0.5, 0.5), 0.25, 1e-15);
}

TEST(LossRegret, McrExamples) {
  EXPECT_NEAR(mcr_regret(1.0, 0.7), 0.0, 1e-15);
  for (double q : {0.0, 0.3, 1.0}) EXPECT_NEAR(mcr_regret(q, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(mcr_regret(0.0, 0.7), 0.4, 1e-15);
}

TEST(LossRegret, IdentitiesOnAFineGrid) {
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) {
      const double q = i / 100.0, p = j / 100.0;
      EXPECT_NEAR(mcr_regret(q, p) - mse_regret(q, p), p * (1 - p) - std::min(p, 1 - p), 1e-12);
      EXPECT_NEAR(mse_regret(q, p), q * (1 - q) + (p - q) * (p - q), 1e-12);
    }
}

TEST(LossRegret, SquareLossIsVariancePlusBiasSquared) {
  EXPECT_DOUBLE_EQ(square_loss_regret(0.01, 0.3, 0.5), 0.01 + 0.04);
}
