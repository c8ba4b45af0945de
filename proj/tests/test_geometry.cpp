#include "common.hpp"

#include <gtest/gtest.h>

using namespace rankone;
using namespace testing_support;

TEST(Geometry, ZeroSpacerStageHalvesWidth) {
  RankOneSchedule s{1, 1, {StageParams::zero_spacers(2)}};
  auto g = derive_geometry(s);
  EXPECT_EQ(g.height(2), 2);
  EXPECT_EQ(g.width(2), Rational(1, 2));
}

TEST(Geometry, HeightRecursionAndOffsets) {
  RankOneSchedule s{2, 1, {{3, {0, 1, 2}, StageKind::Custom}}};
  auto g = derive_geometry(s);
  EXPECT_EQ(g.height(2), 9);
  ASSERT_EQ(g.offsets(1).size(), 3u);
  EXPECT_EQ(g.offsets(1)[0], 0);
  EXPECT_EQ(g.offsets(1)[1], 2);
  EXPECT_EQ(g.offsets(1)[2], 5);
  EXPECT_EQ(g.measure(2), 3);
}

TEST(Geometry, HalfStagePlaceholderSpacers) {
  // tower 2 of height 5, then a half stage with 4 cuts
  RankOneSchedule s{5, 1, {StageParams::zero_spacers(1)}};
  StageParams half;
  half.cuts = 4;
  half.kind = StageKind::HalfJPrime;
  s.stages.push_back(half);
  auto g = derive_geometry(s);
  EXPECT_EQ(g.height(2), 5);
  const auto& sp = g.cutting(2).spacers;
  ASSERT_EQ(sp.size(), 4u);
  EXPECT_EQ(sp[0], 0);
  EXPECT_EQ(sp[1], 0);
  EXPECT_EQ(sp[2], 5);
  EXPECT_EQ(sp[3], 5);
  EXPECT_EQ(g.height(3), 30);
}

TEST(Geometry, MatchesPhysicalCutAndStack) {
  std::vector<oracle::ToyStage> st{{3, {0, 2, 1}}, {2, {1, 0}}, {3, {2, 0, 2}}};
  auto g = derive_geometry(toy_schedule(3, st));
  auto phys = oracle::build_towers(3, 1, st);
  for (int j = 1; j <= 4; ++j) {
    EXPECT_EQ(g.height(j), phys[static_cast<std::size_t>(j - 1)].height());
    EXPECT_EQ(g.width(j), to_rational(phys[static_cast<std::size_t>(j - 1)].width()));
  }
}

TEST(Geometry, DescendFollowsColumns) {
  RankOneSchedule s{2, 1, {{3, {0, 1, 2}, StageKind::Custom}}};
  auto g = derive_geometry(s);
  EXPECT_EQ(*g.descend(2, 0, 1), 0);
  EXPECT_EQ(*g.descend(2, 3, 1), 1);
  EXPECT_FALSE(g.descend(2, 4, 1).has_value());  // spacer above column 1
  EXPECT_FALSE(g.descend(2, 8, 1).has_value());
  EXPECT_EQ(*g.descend(2, 6, 1), 1);
}

TEST(Geometry, RejectsMalformedStages) {
  EXPECT_THROW(derive_geometry(RankOneSchedule{0, 1, {}}), ConfigError);
  EXPECT_THROW(derive_geometry(RankOneSchedule{1, 0, {}}), ConfigError);
  EXPECT_THROW(derive_geometry(RankOneSchedule{1, 1, {{2, {0}, StageKind::Custom}}}), ConfigError);
  EXPECT_THROW(derive_geometry(RankOneSchedule{1, 1, {{2, {1, 0}, StageKind::RigidJ}}}), ConfigError);
  EXPECT_THROW(derive_geometry(RankOneSchedule{1, 1, {{2, {1, 0}, StageKind::HalfJPrime}}}), ConfigError);
  EXPECT_THROW(derive_geometry(RankOneSchedule{1, 1, {{3, {}, StageKind::HalfJPrime}}}), ConfigError);
}

TEST(Geometry, CuttingBeyondDepthIsCapError) {
  auto g = derive_geometry(RankOneSchedule{1, 1, {StageParams::zero_spacers(2)}});
  EXPECT_THROW(g.cutting(2), DepthCapError);
  EXPECT_THROW(g.height(3), DepthCapError);
}

TEST(Generator, CoprimeTuningSmallestResidue) {
  // h r = 24 is 0 mod 6; one extra spacer level gives 25 = 1 mod 6
  EXPECT_EQ(coprime_tuning(24, 6), 1);
  EXPECT_EQ(coprime_tuning(25, 6), 0);
  EXPECT_EQ(coprime_tuning(6, 30), 1);
  EXPECT_EQ(coprime_tuning(8, 1), 0);
}

TEST(Generator, StageFamilies) {
  auto s = paper_schedule(alternate_rule, {2, 3, 5}, 12);
  auto g = derive_geometry(s);
  std::int64_t last_rigid = 0;
  for (int j = 1; j < g.depth(); ++j) {
    const auto& c = g.cutting(j);
    if (j % 2 == 0) {
      EXPECT_EQ(c.kind, StageKind::RigidJ);
      for (const auto& sp : c.spacers) EXPECT_EQ(sp, 0);
      EXPECT_GT(c.cuts, last_rigid);
      last_rigid = c.cuts;
      EXPECT_EQ(gcd(g.height(j), Int(30)), 1) << "stage " << j;
    } else {
      EXPECT_EQ(c.kind, StageKind::HalfJPrime);
      EXPECT_EQ(c.cuts, 2 * j);
      for (int i = 0; i < j; ++i) EXPECT_EQ(c.spacers[static_cast<std::size_t>(i)], 0);
      for (int i = j; i < 2 * j - 1; ++i) EXPECT_EQ(c.spacers[static_cast<std::size_t>(i)], g.height(j));
      EXPECT_GE(c.spacers.back(), g.height(j));
      EXPECT_LT(c.spacers.back(), g.height(j) + 30);
      EXPECT_GE(g.measure(j + 1), Rational(3, 2) * g.measure(j));
    }
  }
}

TEST(Generator, UntunedHalfStageGrowsByExactlyThreeHalves) {
  auto g = derive_geometry(paper_schedule(alternate_rule, {}, 8));
  for (int j = 1; j < g.depth(); j += 2) EXPECT_EQ(g.measure(j + 1), Rational(3, 2) * g.measure(j));
}

TEST(Generator, MeasureDiverges) {
  const auto& g = generated_geometry();
  Rational floor_bound = g.measure(1);
  for (int j = 2; j <= g.depth(); ++j) {
    if (g.cutting(j - 1).kind == StageKind::HalfJPrime) floor_bound *= Rational(3, 2);
    EXPECT_GE(g.measure(j), floor_bound);
  }
}

TEST(Generator, RejectsBadInputs) {
  EXPECT_THROW(paper_schedule([](int) { return true; }, {2}, 6), ConfigError);
  EXPECT_THROW(paper_schedule(alternate_rule, {1}, 6), ConfigError);
  EXPECT_THROW(paper_schedule(alternate_rule, {2}, 1), ConfigError);
  GeneratorOptions o;
  o.initial_height = 4;
  EXPECT_THROW(paper_schedule([](int j) { return j % 2 == 1; }, {2}, 6, o), ConfigError);
}
