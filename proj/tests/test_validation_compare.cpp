#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "wald/validation_compare.hpp"

using namespace wald;

namespace {

const WelfareModel kWelfare = WelfareModel::normalized(0.6);

std::vector<KernelWeights> pair_grid() { return {KernelWeights::binary(0.5), KernelWeights::binary(1.0)}; }

// Exhaustive leave-one-out squared error for a two-cell sample, written
// directly from the definition: drop each target observation in turn.
double loo_error(int n0, int big_n0, int n1, int big_n1, double w0) {
  double total = 0.0;
  for (int i = 0; i < big_n0; ++i) {
    const int y = i < n0 ? 1 : 0;
    const double fit = (w0 * (n0 - y) + (1.0 - w0) * n1) / (w0 * (big_n0 - 1) + (1.0 - w0) * big_n1);
    total += (y - fit) * (y - fit);
  }
  return total / big_n0;
}

}  // namespace

TEST(KFold, LeaveOneOutMatchesExhaustiveOracle) {
  const SampleDesign d({10, 10});
  const CvProtocol protocol{CvProtocol::leave_one_out, pair_grid(), 3};
  const auto sel = kfold_cv(OutcomeCounts({2, 8}, d), d, 0, protocol);
  const double e_half = loo_error(2, 10, 8, 10, 0.5);
  const double e_one = loo_error(2, 10, 8, 10, 1.0);
  EXPECT_NEAR(sel.cv_error[0], e_half, 1e-14);
  EXPECT_NEAR(sel.cv_error[1], e_one, 1e-14);
  EXPECT_EQ(sel.index, e_one < e_half ? 1u : 0u);
  EXPECT_EQ(kfold_weight_select(OutcomeCounts({2, 8}, d), d, 0, protocol)[0], 1.0);
}

TEST(KFold, AllZeroSampleTiesToSmallestWeight) {
  const SampleDesign d({10, 10});
  const CvProtocol protocol{5, {KernelWeights::binary(0.9), KernelWeights::binary(0.6), KernelWeights::binary(0.8)}, 1};
  EXPECT_EQ(kfold_weight_select(OutcomeCounts({0, 0}, d), d, 0, protocol)[0], 0.6);
}

TEST(KFold, SeededDeterminism) {
  const SampleDesign d({12, 20});
  const CvProtocol protocol{4, binary_weight_grid(0.5, 1.0, 0.05), 77};
  const auto a = kfold_cv(OutcomeCounts({5, 9}, d), d, 0, protocol);
  const auto b = kfold_cv(OutcomeCounts({5, 9}, d), d, 0, protocol);
  EXPECT_EQ(a.index, b.index);
  EXPECT_EQ(a.cv_error, b.cv_error);
}

TEST(KFold, RejectsTooManyFolds) {
  const SampleDesign d({3, 10});
  EXPECT_THROW(kfold_cv(OutcomeCounts({1, 2}, d), d, 0, {5, pair_grid(), 0}), std::invalid_argument);
  EXPECT_THROW(kfold_cv(OutcomeCounts({1, 2}, d), d, 0, {1, pair_grid(), 0}), std::invalid_argument);
  EXPECT_THROW(kfold_cv(OutcomeCounts({1, 2}, d), d, 0, {2, {}, 0}), std::invalid_argument);
}

TEST(CompareCv, SingletonGridGivesUnitRatio) {
  const auto g = build_grid(BernoulliStateSpace::banded_pair(0.2, 0.6, -0.1, 0.1), {10, 10});
  const CvProtocol protocol{CvProtocol::leave_one_out, {KernelWeights::binary(0.8)}, 5};
  const auto c = compare_cv_vs_mmr(SampleDesign({10, 10}), g, kWelfare, protocol, 1, State{{0.4, 0.4}}, 0);
  ASSERT_EQ(c.ratios.size(), 1u);
  EXPECT_EQ(c.ratios[0], 1.0);
}

TEST(CompareCv, RatiosAreBoundedAndBookkeepingAddsUp) {
  const auto g = build_grid(BernoulliStateSpace::banded_pair(0.2, 0.6, -0.1, 0.1), {25, 25});
  const CvProtocol protocol{5, binary_weight_grid(0.5, 1.0, 0.05), 11};
  const std::size_t reps = 60;
  const auto c = compare_cv_vs_mmr(SampleDesign({10, 10}), g, kWelfare, protocol, reps, State{{0.35, 0.3}}, 0);
  EXPECT_EQ(std::accumulate(c.selection_histogram.begin(), c.selection_histogram.end(), std::uint64_t{0}), reps);
  const double worst = *std::max_element(c.max_regret_by_weight.begin(), c.max_regret_by_weight.end());
  for (double r : c.ratios) {
    EXPECT_GE(r, 1.0);
    EXPECT_LE(r, worst / c.mmr_value + 1e-12);
  }
}

TEST(CompareCv, WorkerCountDoesNotChangeTheResult) {
  const auto g = build_grid(BernoulliStateSpace::banded_pair(0.2, 0.6, -0.1, 0.1), {15, 15});
  const CvProtocol protocol{CvProtocol::leave_one_out, binary_weight_grid(0.5, 1.0, 0.1), 9};
  EvaluationOptions one, many;
  many.workers = 4;
  const auto a = compare_cv_vs_mmr(SampleDesign({8, 12}), g, kWelfare, protocol, 30, State{{0.5, 0.45}}, 0, one);
  const auto b = compare_cv_vs_mmr(SampleDesign({8, 12}), g, kWelfare, protocol, 30, State{{0.5, 0.45}}, 0, many);
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.ratios, b.ratios);
}

TEST(CompareCv, RejectsInfeasibleGeneratingState) {
  const auto g = build_grid(BernoulliStateSpace::banded_pair(0.2, 0.6, -0.1, 0.1), {5, 5});
  const CvProtocol protocol{CvProtocol::leave_one_out, pair_grid(), 0};
  EXPECT_THROW(compare_cv_vs_mmr(SampleDesign({10, 10}), g, kWelfare, protocol, 3, State{{0.2, 0.5}}, 0),
               std::invalid_argument);
}
