#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "wald/state_space.hpp"

using namespace wald;

namespace {

BernoulliStateSpace band_space() { return BernoulliStateSpace::banded_pair(0.2, 0.6, -0.1, 0.1); }

}  // namespace

TEST(StateSpace, BandedPairProjectsTheBandOntoTheSecondAxis) {
  const auto s = band_space();
  EXPECT_DOUBLE_EQ(s.lower(1), 0.1);
  EXPECT_DOUBLE_EQ(s.upper(1), 0.7);
  ASSERT_EQ(s.variation().size(), 1u);
}

TEST(StateSpace, FeasibilityExamples) {
  const auto s = band_space();
  EXPECT_TRUE(is_feasible(State{{0.4, 0.4}}, s));
  EXPECT_FALSE(is_feasible(State{{0.2, 0.4}}, s));
  EXPECT_TRUE(is_feasible(State{{0.6, 0.7}}, s));
}

TEST(StateSpace, RejectsEmptyOrMalformedSpaces) {
  EXPECT_THROW(BernoulliStateSpace({0.5}, {0.4}), std::invalid_argument);
  EXPECT_THROW(BernoulliStateSpace({0.0, 0.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(BernoulliStateSpace({-0.1}, {0.5}), std::invalid_argument);
  // Boxes that cannot meet the band.
  EXPECT_THROW(BernoulliStateSpace({0.0, 0.8}, {0.1, 1.0}, {{0, 1, -0.1, 0.1}}), std::invalid_argument);
}

TEST(StateGrid, CoarseGridKeepsTheDiagonal) {
  const auto g = build_grid(band_space(), {3, 3});
  ASSERT_EQ(g.size(), 3u);
  const double expected[3][2] = {{0.2, 0.1}, {0.4, 0.4}, {0.6, 0.7}};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(g[i].p[0], expected[i][0], 1e-15);
    EXPECT_NEAR(g[i].p[1], expected[i][1], 1e-15);
  }
}

TEST(StateGrid, VacuousBandGivesTheFullProduct) {
  const auto g = build_grid(BernoulliStateSpace::banded_pair(0.2, 0.6, -1.0, 1.0), {3, 3});
  EXPECT_EQ(g.size(), 9u);
}

TEST(StateGrid, FiftyByFiftyCountMatchesIntegerCounter) {
  // p0 = 0.2 + 0.4 i/49 and p1 = 0.1 + 0.6 j/49, so p0 - p1 = 0.1 + (0.4 i - 0.6 j)/49
  // and the band |p0 - p1| <= 0.1 is exactly -49 <= 2i - 3j <= 0.
  std::size_t count = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const int d = 2 * i - 3 * j;
      if (d >= -49 && d <= 0) ++count;
    }
  EXPECT_EQ(count, 834u);
  EXPECT_EQ(build_grid(band_space(), {50, 50}).size(), count);
}

TEST(StateGrid, RejectsBadResolution) {
  EXPECT_THROW(build_grid(band_space(), {50}), std::invalid_argument);
  EXPECT_THROW(build_grid(band_space(), {0, 3}), std::invalid_argument);
}

TEST(StateGrid, SubsetKeepsOrder) {
  const auto g = build_grid(band_space(), {5, 5});
  const std::size_t pick[] = {2, 0};
  const auto sub = g.subset(pick);
  ASSERT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub[0].p, g[2].p);
  EXPECT_EQ(sub[1].p, g[0].p);
}

TEST(StateGridProperty, EveryGridStateIsFeasible) {
  for (std::size_t r : {2u, 7u, 20u, 50u}) {
    const auto g = build_grid(band_space(), {r, r});
    for (const auto& s : g) EXPECT_TRUE(is_feasible(s, g.space()));
  }
}

TEST(StateGridProperty, WideningTheBandNeverDropsStates) {
  const BernoulliStateSpace narrow({0.2, 0.1}, {0.6, 0.7}, {{0, 1, -0.1, 0.1}});
  const BernoulliStateSpace wide({0.2, 0.1}, {0.6, 0.7}, {{0, 1, -0.2, 0.15}});
  for (std::size_t r : {3u, 11u, 50u}) {
    const auto small = build_grid(narrow, {r, r});
    const auto large = build_grid(wide, {r, r});
    EXPECT_GE(large.size(), small.size());
    for (const auto& s : small) {
      bool found = false;
      for (const auto& t : large) found = found || t.p == s.p;
      EXPECT_TRUE(found);
    }
  }
}

TEST(StateGridProperty, RectangularSpaceGivesProductSize) {
  const BernoulliStateSpace box({0.0, 0.3, 0.1}, {1.0, 0.4, 0.9});
  EXPECT_EQ(build_grid(box, {4, 5, 6}).size(), 120u);
}
