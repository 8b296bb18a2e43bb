#include <gtest/gtest.h>

#include <cmath>

#include "fractalkit/rational.hpp"

namespace fk = fractalkit;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(fk::parse_rational("2/6"), fk::Rational(1, 3));
  EXPECT_EQ(fk::parse_rational("5"), fk::Rational(5));
  EXPECT_EQ(fk::parse_rational("0.6"), fk::Rational(3, 5));
  EXPECT_EQ(fk::parse_rational("-0.25"), fk::Rational(-1, 4));
  EXPECT_EQ(fk::parse_rational(".5"), fk::Rational(1, 2));
  EXPECT_EQ(fk::parse_rational("010/4"), fk::Rational(5, 2));
  EXPECT_EQ(fk::parse_rational("0.08"), fk::Rational(2, 25));
}

TEST(Rational, RejectsMalformed) {
  EXPECT_THROW(fk::parse_rational(""), fk::InvalidArgument);
  EXPECT_THROW(fk::parse_rational("1/0"), fk::InvalidArgument);
  EXPECT_THROW(fk::parse_rational("abc"), fk::InvalidArgument);
  EXPECT_THROW(fk::parse_rational("1.5/2"), fk::InvalidArgument);
  EXPECT_THROW(fk::make_rational(1, 0), fk::InvalidArgument);
}

TEST(Rational, Powers) {
  EXPECT_EQ(fk::ipow(3, 4), fk::Integer(81));
  EXPECT_EQ(fk::inv_pow(2, 10), fk::Rational(1, 1024));
  EXPECT_EQ(fk::rpow(fk::Rational(2, 3), 3), fk::Rational(8, 27));
  EXPECT_EQ(fk::floor_rat(fk::Rational(-1, 3)), fk::Rational(-1));
  EXPECT_TRUE(fk::is_power_of_two(fk::Integer(64)));
  EXPECT_FALSE(fk::is_power_of_two(fk::Integer(96)));
}

TEST(Rational, LogOfHugeValuesStaysFinite) {
  EXPECT_NEAR(fk::log_rat(fk::Rational(1, 3)), -std::log(3.0), 1e-15);
  // 3^-2000 underflows a double; the log must not.
  EXPECT_NEAR(fk::log_rat(fk::inv_pow(3, 2000)), -2000 * std::log(3.0), 1e-9);
  EXPECT_THROW(fk::log_rat(fk::Rational(0)), fk::InvalidArgument);
}
