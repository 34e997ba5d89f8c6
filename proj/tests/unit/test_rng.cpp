#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "sparselv/rng.hpp"

using namespace sparselv;

TEST(Rng, WordsArePureFunctionsOfSeedAndCounter) {
  EXPECT_EQ(random_word(7, 3), random_word(7, 3));
  EXPECT_NE(random_word(7, 3), random_word(7, 4));
  EXPECT_NE(random_word(7, 3), random_word(8, 3));
  CounterStream a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_word(), b.next_word());
}

TEST(Rng, DerivedSeedsDependOnEveryTag) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 20; ++k) {
    for (std::uint64_t t = 0; t < 50; ++t) seen.insert(derive_seed(1, {k, t}));
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, {0, 1}), derive_seed(1, {1, 0}));
  EXPECT_NE(derive_seed(1, {5}), derive_seed(2, {5}));
}

TEST(Rng, UniformStaysInUnitInterval) {
  double sum = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = uniform_at(5, static_cast<std::uint64_t>(i));
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean is 1/sqrt(12 count) ~ 6.5e-4.
  EXPECT_NEAR(sum / count, 0.5, 4e-3);
}

TEST(Rng, UniformIndexCoversRangeEvenly) {
  CounterStream s(11);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const auto k = s.uniform_index(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_NEAR(c, draws / 7, 400);
}

TEST(Rng, GaussianMoments) {
  const int count = 200000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < count; ++i) {
    const double g = gaussian_at(3, static_cast<std::uint64_t>(i));
    ASSERT_TRUE(std::isfinite(g));
    s1 += g;
    s2 += g * g;
    s4 += g * g * g * g;
  }
  EXPECT_NEAR(s1 / count, 0.0, 0.015);
  EXPECT_NEAR(s2 / count, 1.0, 0.02);
  EXPECT_NEAR(s4 / count, 3.0, 0.1);
}

TEST(Rng, GaussianLaneIsIndependentOfUniformDraws) {
  CounterStream a(4), b(4);
  b.uniform();
  b.next_word();
  EXPECT_EQ(a.gaussian(), b.gaussian());
}
