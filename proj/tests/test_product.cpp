#include "common.hpp"
#include "oracle/perm_brute.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace rankone;
using namespace testing_support;

TEST(Factor, WholeGroupAlwaysOne) {
  auto z = GroupSet::whole(7);
  for (long n : {0L, 1L, -3L, 100L}) EXPECT_EQ(s_correlation(z, z, n), 1);
}

TEST(Factor, FullPeriodReturns) {
  GroupSet d(6, {0});
  EXPECT_EQ(s_correlation(d, d, 6), Rational(1, 6));
  EXPECT_EQ(s_correlation(d, d, 5), 0);
}

TEST(Factor, ShiftedPair) {
  EXPECT_EQ(s_correlation(GroupSet(4, {0, 1}), GroupSet(4, {2}), 2), Rational(1, 4));
  EXPECT_EQ(s_correlation(GroupSet(4, {0, 1}), GroupSet(4, {2}), -1), Rational(1, 4));
  EXPECT_THROW(s_correlation(GroupSet(4, {0}), GroupSet(5, {0}), 1), std::invalid_argument);
}

TEST(Factor, ProductAtZeroAndTrivialFactor) {
  const auto& g = generated_geometry();
  auto a = CellSet::levels(2, {0, 1, 2}), b = CellSet::levels(2, {1, 2, 5});
  GroupSet d(6, {0, 1, 3}), e(6, {1, 3});
  auto iv = product_correlation(a, d, b, e, 0, Rational(1, 100), g);
  EXPECT_EQ(iv, MeasureInterval::point(Rational(1, 3) * 2 * g.width(2)));
  auto z = GroupSet::whole(6);
  for (long n : {1L, 7L, 56L})
    EXPECT_EQ(product_correlation(a, z, b, z, n, Rational(1, 1000), g),
              correlation(a, b, n, Rational(1, 1000), g));
}

TEST(Factor, RigidityTimesCloseTheFactor) {
  const auto& g = generated_geometry();
  auto times = product_rigidity_times(g, {2, 3, 5}, 3, 6);
  ASSERT_EQ(times.size(), 3u);
  GroupSet d(6, {0, 2}), e(6, {2, 5});
  for (const auto& t : times) {
    EXPECT_EQ(t.time, 30 * g.height(t.stage));
    EXPECT_EQ(s_correlation(d, e, t.time), s_correlation(d, e, 0));
  }
  EXPECT_THROW(product_rigidity_times(g, {2, 3, 5}, 1, 7), ConfigError);
}

TEST(Skew, Passages) {
  // from fiber 0 the base moves on the first step of every p
  EXPECT_EQ(skew_passages(0, 3, 3), 1);
  EXPECT_EQ(skew_passages(0, 4, 3), 2);
  EXPECT_EQ(skew_passages(1, 1, 3), 0);
  EXPECT_EQ(skew_passages(2, 1, 3), 0);
  EXPECT_EQ(skew_passages(0, 1, 3), 1);
  EXPECT_EQ(skew_passages(0, -1, 3), 0);
  EXPECT_EQ(skew_passages(1, -1, 3), -1);
  EXPECT_EQ(skew_passages(0, 0, 5), 0);
}

TEST(Skew, PassagesMatchDirectSimulation) {
  for (std::int64_t p : {2, 3, 5})
    for (std::int64_t z0 = 0; z0 < p; ++z0)
      for (long n = -20; n <= 20; ++n) {
        // forward: T acts when leaving fibre 0; backward undoes it on arrival
        long base = 0;
        std::int64_t z = z0;
        for (long k = 0; k < std::abs(n); ++k) {
          if (n > 0) {
            if (z == 0) ++base;
            z = (z + 1) % p;
          } else {
            z = (z + p - 1) % p;
            if (z == 0) --base;
          }
        }
        EXPECT_EQ(skew_passages(z0, n, p), base) << p << ' ' << z0 << ' ' << n;
      }
}

TEST(Skew, CorrelationExamples) {
  const auto& g = generated_geometry();
  SkewSystem sys{3};
  auto a = CellSet::levels(2, {0, 1, 4}), b = CellSet::levels(2, {1, 2});
  const Rational tol(1, 1'000'000);
  EXPECT_EQ(skew_correlation(a, 0, b, 0, 3, tol, sys, g), correlation(a, b, 1, tol, g));
  EXPECT_EQ(skew_correlation(a, 2, b, 1, 1, tol, sys, g), MeasureInterval::point(g.width(2)));
  EXPECT_EQ(skew_correlation(a, 1, b, 1, 1, tol, sys, g), MeasureInterval::point(0));
}

TEST(Skew, HalfLimitAlongPTimesHalfHeights) {
  const auto& g = generated_geometry();
  SkewSystem sys{2};
  auto a = CellSet::levels(1, {0});
  for (int j : {3, 5, 7}) {
    auto iv = skew_correlation(a, 0, a, 0, 2 * g.height(j), default_tolerance(a, g), sys, g);
    EXPECT_TRUE(iv.contains(a.measure(g) / 2));
  }
}

TEST(CyclicApprox, BaseOnlyIsOneCycle) {
  auto p = cyclic_approximation(ApproxSystem{9});
  EXPECT_EQ(p.cycle_lengths(), std::vector<std::size_t>{9});
}

TEST(CyclicApprox, ProductWithGroupGivesGcdCycles) {
  for (auto [m, h, want] : {std::tuple{3, 5, 1}, {2, 4, 2}, {6, 9, 3}}) {
    ApproxSystem s{h, CyclicFactor{m}};
    EXPECT_EQ(count_ergodic_components(cyclic_approximation(s), 1), static_cast<std::uint64_t>(want));
    EXPECT_EQ(approximation_components(s, 1), want);
  }
}

TEST(CyclicApprox, PowerCounts) {
  EXPECT_EQ(count_ergodic_components(FinitePermutation::identity(7), 4), 7u);
  EXPECT_EQ(count_ergodic_components(FinitePermutation::cycle(12), 3), 3u);
  ApproxSystem skew{4, std::nullopt, SkewSystem{3}};
  EXPECT_EQ(count_ergodic_components(cyclic_approximation(skew), 3), 3u);
  EXPECT_EQ(approximation_components(skew, 3), 3);
}

TEST(CyclicApprox, ClosedFormMatchesWalkedOrbits) {
  for (std::int64_t m = 1; m <= 6; ++m)
    for (std::int64_t h = 1; h <= 7; ++h)
      for (std::int64_t p : {0, 2, 3})
        for (std::uint64_t k : {1u, 2u, 3u, 5u}) {
          ApproxSystem s{h, CyclicFactor{m}};
          if (p) s.skew = SkewSystem{p};
          const std::uint64_t pp = p ? static_cast<std::uint64_t>(p) : 1;
          const std::uint64_t size = static_cast<std::uint64_t>(m * h) * pp;
          // label = (grp, z, level) walked directly
          auto step = [&](std::uint64_t x) {
            std::uint64_t l = x % h, z = (x / h) % pp, grp = x / (h * pp);
            std::uint64_t l2 = l, z2 = z;
            if (p) {
              z2 = (z + 1) % pp;
              if (z == 0) l2 = (l + 1) % h;
            } else {
              l2 = (l + 1) % h;
            }
            return ((grp + 1) % m * pp + z2) * h + l2;
          };
          auto power = [&](std::uint64_t x) {
            for (std::uint64_t i = 0; i < k; ++i) x = step(x);
            return x;
          };
          const auto want = oracle::count_orbits(size, power);
          EXPECT_EQ(approximation_components(s, k), want);
          EXPECT_EQ(count_ergodic_components(cyclic_approximation(s), k), want);
        }
}

TEST(CyclicApprox, SizeCap) {
  ApproxSystem s{Int(1000000), CyclicFactor{1000}};
  EXPECT_THROW(cyclic_approximation(s), ResourceCapError);
}
