#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fractalkit/cantor_sets.hpp"
#include "fractalkit/random.hpp"

namespace fk = fractalkit;
using fk::CantorSpec;
using fk::Interval;
using fk::IntervalSet;
using fk::Membership;
using fk::Rational;

namespace {

Rational q(long n, unsigned long d) { return fk::make_rational(n, d); }

IntervalSet set_of(std::vector<Interval> v) { return IntervalSet(std::move(v)); }

}  // namespace

TEST(CantorSets, TriadicFirstGenerations) {
  EXPECT_EQ(fk::generate(CantorSpec::triadic(), 0), set_of({{0, 1}}));
  EXPECT_EQ(fk::generate(CantorSpec::triadic(), 1), set_of({{0, q(1, 3)}, {q(2, 3), 1}}));
  EXPECT_EQ(fk::generate(CantorSpec::triadic(), 2),
            set_of({{0, q(1, 9)}, {q(2, 9), q(1, 3)}, {q(2, 3), q(7, 9)}, {q(8, 9), 1}}));
}

TEST(CantorSets, MiddleFifth) {
  auto s = fk::generate(CantorSpec::middle_remove(5), 1);
  EXPECT_EQ(s, set_of({{0, q(2, 5)}, {q(3, 5), 1}}));
  EXPECT_EQ(fk::largest_gap(s), q(1, 5));
  for (unsigned n = 0; n <= 6; ++n)
    EXPECT_EQ(fk::total_length(fk::generate(CantorSpec::middle_remove(5), n)), fk::rpow(q(4, 5), n));
}

TEST(CantorSets, EveryVariantStartsFromTheUnitSegment) {
  for (auto spec : {CantorSpec::triadic(), CantorSpec::fat(), CantorSpec::middle_remove(7),
                    CantorSpec::two_scale(q(1, 4), q(1, 2)), CantorSpec::keep_digits(10, {0, 1, 2, 4, 5, 6, 7, 8, 9})}) {
    EXPECT_EQ(fk::generate(spec, 0), set_of({{0, 1}}));
    EXPECT_EQ(fk::removed_length(spec, 0), 0);
  }
}

TEST(CantorSets, TotalLengthExact) {
  EXPECT_EQ(fk::total_length(fk::generate(CantorSpec::triadic(), 3)), q(8, 27));
  for (unsigned n = 0; n <= 14; ++n)
    EXPECT_EQ(fk::total_length(fk::generate(CantorSpec::triadic(), n)), fk::rpow(q(2, 3), n));
}

TEST(CantorSets, TriadicRemovedLengthIsTheGeometricSeries) {
  for (unsigned n = 0; n <= 12; ++n) {
    Rational series = 0;
    for (unsigned k = 1; k <= n; ++k) series += Rational(fk::ipow(2, k - 1), fk::ipow(3, k));
    EXPECT_EQ(fk::removed_length(CantorSpec::triadic(), n), series);
  }
}

TEST(CantorSets, FatLengths) {
  EXPECT_EQ(fk::total_length(fk::generate(CantorSpec::fat(), 2)), q(16, 27));
  for (unsigned n = 0; n <= 8; ++n) {
    Rational product = 1;
    for (unsigned k = 0; k < n; ++k) product *= 1 - fk::inv_pow(3, 1UL << k);
    EXPECT_EQ(fk::total_length(fk::generate(CantorSpec::fat(), n)), product);
    EXPECT_EQ(fk::fat_length(n), product);
  }
  EXPECT_NEAR(fk::fat_length_real(30), 0.585187, 1e-5);
  EXPECT_NEAR(fk::fat_length_real(60), 0.585187, 1e-5);
}

TEST(CantorSets, SimilarityDimensions) {
  EXPECT_NEAR(fk::similarity_dimension(CantorSpec::triadic()), 0.63093, 1e-5);
  EXPECT_NEAR(fk::similarity_dimension(CantorSpec::middle_remove(5)), 0.86135, 1e-5);
  EXPECT_NEAR(fk::similarity_dimension(CantorSpec::keep_digits(10, {0, 1, 2, 4, 5, 6, 7, 8, 9})), 0.95424, 1e-5);
  EXPECT_NEAR(fk::similarity_dimension(CantorSpec::keep_digits(10, {0, 1, 2, 3, 4, 5, 6})), 0.8451, 1e-4);
  EXPECT_THROW(fk::similarity_dimension(CantorSpec::fat()), fk::Unsupported);
  EXPECT_THROW(fk::similarity_dimension(CantorSpec::two_scale(q(1, 4), q(1, 2))), fk::Unsupported);
}

TEST(CantorSets, Membership) {
  auto t = CantorSpec::triadic();
  EXPECT_EQ(fk::contains(t, q(1, 4), 20), Membership::in);
  EXPECT_EQ(fk::contains(t, q(1, 2), 1), Membership::out);
  for (unsigned d : {1u, 2u, 10u, 40u}) {
    EXPECT_NE(fk::contains(t, q(1, 3), d), Membership::out);
    EXPECT_NE(fk::contains(t, Rational(0), d), Membership::out);
    EXPECT_NE(fk::contains(t, Rational(1), d), Membership::out);
  }
  EXPECT_EQ(fk::contains(t, q(1, 3), 40), Membership::in);
  EXPECT_THROW(fk::contains(t, q(3, 2), 5), fk::InvalidArgument);
  EXPECT_THROW(fk::contains(CantorSpec::fat(), q(1, 2), 5), fk::Unsupported);
}

TEST(CantorSets, MembershipAgreesWithGenerate) {
  fk::RandomStream rng(3);
  std::vector<std::pair<CantorSpec, IntervalSet>> cases;
  for (auto spec : {CantorSpec::triadic(), CantorSpec::middle_remove(5), CantorSpec::keep_digits(4, {0, 3})})
    cases.emplace_back(spec, fk::generate(spec, 6));
  for (int i = 0; i < 2000; ++i) {
    unsigned long den = 1 + rng.next_choice(2000);
    Rational x = fk::make_rational(static_cast<long>(rng.next_choice(den + 1)), den);
    for (const auto& [spec, gen] : cases)
      ASSERT_EQ(fk::contains(spec, x, 6) != Membership::out, gen.contains(x)) << x.get_str();
  }
}

TEST(CantorSets, NestingAndDisjointness) {
  for (auto spec : {CantorSpec::triadic(), CantorSpec::fat(), CantorSpec::middle_remove(5),
                    CantorSpec::two_scale(q(1, 5), q(2, 5)), CantorSpec::keep_digits(5, {0, 2, 4})}) {
    IntervalSet prev = fk::generate(spec, 0);
    for (unsigned n = 1; n <= 6; ++n) {
      IntervalSet cur = fk::generate(spec, n);
      for (std::size_t i = 1; i < cur.size(); ++i) ASSERT_LT(cur[i - 1].hi, cur[i].lo);
      ASSERT_TRUE(cur.subset_of(prev)) << spec.describe() << " n=" << n;
      prev = std::move(cur);
    }
  }
}

TEST(CantorSets, TriadicSelfSimilarity) {
  for (unsigned n = 0; n <= 8; ++n) {
    auto next = fk::generate(CantorSpec::triadic(), n + 1);
    std::vector<Interval> left;
    for (const auto& iv : next)
      if (iv.hi <= q(1, 3)) left.push_back({iv.lo * 3, iv.hi * 3});
    EXPECT_EQ(IntervalSet(left), fk::generate(CantorSpec::triadic(), n));
  }
}

TEST(CantorSets, TwoScaleGeometry) {
  auto s = fk::generate(CantorSpec::two_scale(q(1, 4), q(1, 2)), 1);
  EXPECT_EQ(s, set_of({{0, q(1, 4)}, {q(1, 2), 1}}));
  EXPECT_EQ(fk::generate(CantorSpec::two_scale(q(1, 4), q(1, 2)), 5).size(), 32u);
}

TEST(CantorSets, LargestGap) {
  for (unsigned n = 1; n <= 6; ++n) EXPECT_EQ(fk::largest_gap(fk::generate(CantorSpec::triadic(), n)), q(1, 3));
  EXPECT_EQ(fk::largest_gap(set_of({{0, 1}})), 0);
  EXPECT_THROW(fk::largest_gap(IntervalSet()), fk::InvalidArgument);
}

TEST(CantorSets, TriadicIsSymmetric) {
  for (unsigned n = 0; n <= 7; ++n) {
    auto s = fk::generate(CantorSpec::triadic(), n);
    EXPECT_EQ(fk::reflect(s), s);
  }
}

TEST(CantorSets, CsvRoundTrip) {
  auto s = fk::generate(CantorSpec::fat(), 3);
  std::stringstream ss;
  fk::write_csv(ss, s);
  EXPECT_EQ(ss.str().substr(0, 24), "lo_num,lo_den,hi_num,hi_");
  EXPECT_EQ(fk::read_csv(ss), s);

  std::istringstream bad_header("a,b,c,d\n0,1,1,1\n");
  EXPECT_THROW(fk::read_csv(bad_header), fk::InvalidArgument);
  std::istringstream bad_row("lo_num,lo_den,hi_num,hi_den\n0,1,x,1\n");
  EXPECT_THROW(fk::read_csv(bad_row), fk::InvalidArgument);
  std::istringstream overlap("lo_num,lo_den,hi_num,hi_den\n0,1,1,2\n1,3,1,1\n");
  EXPECT_THROW(fk::read_csv(overlap), fk::InvalidArgument);
}

TEST(CantorSets, RejectsInvalidSpecs) {
  EXPECT_THROW(CantorSpec::keep_digits(3, {1}), fk::InvalidArgument);
  EXPECT_THROW(CantorSpec::keep_digits(3, {0, 1, 2}), fk::InvalidArgument);
  EXPECT_THROW(CantorSpec::keep_digits(3, {0, 3}), fk::InvalidArgument);
  EXPECT_THROW(CantorSpec::middle_remove(4), fk::InvalidArgument);
  EXPECT_THROW(CantorSpec::two_scale(q(1, 2), q(1, 2)), fk::InvalidArgument);
  EXPECT_THROW(CantorSpec::two_scale(Rational(0), q(1, 2)), fk::InvalidArgument);
  EXPECT_THROW(fk::parse_cantor_variant("nonsense"), fk::InvalidArgument);
}

TEST(CantorSets, ParsesVariants) {
  EXPECT_EQ(fk::generate(fk::parse_cantor_variant("middle:5"), 2), fk::generate(CantorSpec::middle_remove(5), 2));
  EXPECT_EQ(fk::generate(fk::parse_cantor_variant("digits:3:02"), 3), fk::generate(CantorSpec::triadic(), 3));
}

TEST(CantorSets, CapacityIsExplicit) {
  EXPECT_THROW(fk::generate(CantorSpec::triadic(), 40), fk::CapacityError);
}
