#include <gtest/gtest.h>

#include <set>

#include "fractalkit/random.hpp"

using fractalkit::RandomStream;

// Reference values from an independent SplitMix64 written in Python.
TEST(Random, MatchesReferenceOutputs) {
  RandomStream s0(0);
  EXPECT_EQ(s0.next_u64(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(s0.next_u64(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(s0.next_u64(), 0x06C45D188009454FULL);

  RandomStream s42(42);
  EXPECT_EQ(s42.next_u64(), 0xBDD732262FEB6E95ULL);
  EXPECT_EQ(s42.next_u64(), 0x28EFE333B266F103ULL);
}

TEST(Random, DerivedStreamMatchesReference) {
  auto d = fractalkit::derived_stream(5, 2);
  EXPECT_EQ(d.next_u64(), 0xB8B4C2977EABCE45ULL);
}

TEST(Random, SameSeedSameStream) {
  RandomStream a(123), b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Random, DerivedStreamsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t t = 0; t < 100; ++t) firsts.insert(fractalkit::derived_stream(9, t).next_u64());
  EXPECT_EQ(firsts.size(), 100u);
}

TEST(Random, UnitInterval) {
  RandomStream s(7);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    double u = s.next_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Random, Choice) {
  RandomStream s(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(s.next_choice(1), 0u);
  EXPECT_THROW(s.next_choice(0), fractalkit::InvalidArgument);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(s.next_choice(3));
  EXPECT_EQ(seen, (std::set<std::uint64_t>{0, 1, 2}));
}

TEST(Random, SplitIsIndependentOfParentContinuation) {
  RandomStream a(11);
  RandomStream child = a.split();
  EXPECT_NE(child.next_u64(), a.next_u64());
}
