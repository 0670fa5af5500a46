#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "wald/predictors.hpp"

using namespace wald;

namespace {
double wavg(std::vector<int> n, std::vector<int> big_n, std::vector<double> w) {
  const SampleDesign d(big_n);
  return weighted_average_estimate(OutcomeCounts(n, d), d, KernelWeights(w));
}
}  // namespace

TEST(WeightedAverage, Examples) {
  EXPECT_NEAR(wavg({3, 5}, {10, 10}, {0.5, 0.5}), 0.4, 1e-15);
  EXPECT_NEAR(wavg({3, 5}, {10, 10}, {1.0, 0.0}), 0.3, 1e-15);
  EXPECT_NEAR(wavg({3, 5}, {10, 10}, {0.8, 0.2}), 0.34, 1e-15);
}

TEST(WeightedAverage, ExtremeCountsGiveZeroAndOne) {
  EXPECT_EQ(wavg({0, 0}, {7, 4}, {0.7, 0.3}), 0.0);
  EXPECT_EQ(wavg({7, 4}, {7, 4}, {0.7, 0.3}), 1.0);
}

TEST(WeightedAverage, ScaleInvariantInTheWeights) {
  for (double c : {0.01, 0.5, 3.0, 1000.0}) {
    EXPECT_NEAR(wavg({2, 9}, {5, 15}, {0.7 * c, 0.3 * c}), wavg({2, 9}, {5, 15}, {0.7, 0.3}), 1e-14);
  }
}

TEST(WeightedAverage, EmptyWeightedCellsAreRejected) {
  EXPECT_THROW(wavg({0, 3}, {0, 5}, {1.0, 0.0}), std::domain_error);
}

TEST(SampleDesign, Validation) {
  EXPECT_THROW(SampleDesign({}), std::invalid_argument);
  EXPECT_THROW(SampleDesign({0, 0}), std::invalid_argument);
  EXPECT_THROW(SampleDesign({-1, 3}), std::invalid_argument);
  EXPECT_EQ(SampleDesign({10, 30}).total(), 40);
}

TEST(OutcomeCounts, MustFitTheDesign) {
  EXPECT_THROW(OutcomeCounts({11, 0}, SampleDesign({10, 10})), std::invalid_argument);
  EXPECT_THROW(OutcomeCounts({1}, SampleDesign({10, 10})), std::invalid_argument);
}

TEST(KernelWeights, NormalizesAndValidates) {
  const KernelWeights w({2.0, 6.0});
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[1], 0.75);
  EXPECT_THROW(KernelWeights({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(KernelWeights({-0.1, 1.1}), std::invalid_argument);
  EXPECT_THROW(KernelWeights::binary(1.2), std::invalid_argument);
}

TEST(KernelWeights, BinaryComplementIsExact) {
  for (int i = 500; i <= 1000; ++i) {
    const auto w = KernelWeights::binary(i / 1000.0);
    EXPECT_EQ(w[0] + w[1], 1.0);
    EXPECT_EQ(w[0], i / 1000.0);
  }
}

TEST(HodgesLehmann, Examples) {
  for (int n : {1, 7, 100}) EXPECT_DOUBLE_EQ(hodges_lehmann_estimate(0.5, n), 0.5);
  EXPECT_DOUBLE_EQ(hodges_lehmann_estimate(1.0, 1), 0.75);
  EXPECT_NEAR(hodges_lehmann_estimate(0.0, 100), 0.5 / 11.0, 1e-15);
  EXPECT_NEAR(hodges_lehmann_estimate(0.0, 100), 0.045455, 1e-6);
}

TEST(HodgesLehmann, RangeIsStrictlyInsideTheUnitInterval) {
  for (int n : {1, 4, 25, 100, 1000}) {
    const double r = std::sqrt(static_cast<double>(n));
    const double lo = 1.0 / (2.0 * (r + 1.0));
    const double hi = (r + 0.5) / (r + 1.0);
    for (int k = 0; k <= n; ++k) {
      const double e = hodges_lehmann_estimate(sample_mean(k, n), n);
      EXPECT_GE(e, lo - 1e-15);
      EXPECT_LE(e, hi + 1e-15);
      EXPECT_GT(e, 0.0);
      EXPECT_LT(e, 1.0);
    }
  }
}

TEST(HodgesLehmann, RejectsBadInput) {
  EXPECT_THROW(hodges_lehmann_estimate(1.5, 4), std::invalid_argument);
  EXPECT_THROW(hodges_lehmann_estimate(0.5, 0), std::invalid_argument);
}
