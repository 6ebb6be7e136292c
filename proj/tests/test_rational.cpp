#include <gtest/gtest.h>

#include "packetgrid/errors.hpp"
#include "packetgrid/rational.hpp"

using packetgrid::ConfigError;
using packetgrid::Rational;

TEST(Rational, ReducesOnConstruction) {
  const Rational r(18, 20);
  EXPECT_EQ(r.num(), 9);
  EXPECT_EQ(r.den(), 10);
  EXPECT_EQ(r.to_string(), "9/10");
  EXPECT_EQ(Rational(4, 2).to_string(), "2");
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(Rational::parse("9/10"), Rational(9, 10));
  EXPECT_EQ(Rational::parse("2"), Rational(2, 1));
  EXPECT_EQ(Rational::parse("0.95"), Rational(19, 20));
  EXPECT_EQ(Rational::parse("2.0"), Rational(2, 1));
}

TEST(Rational, RejectsMalformedAndNegative) {
  EXPECT_THROW(Rational::parse("abc"), ConfigError);
  EXPECT_THROW(Rational::parse("1/0"), ConfigError);
  EXPECT_THROW(Rational::parse("-1/2"), ConfigError);
  EXPECT_THROW(Rational::parse(""), ConfigError);
}

TEST(Rational, FloorAndCeilMultiply) {
  const Rational r(9, 10);
  EXPECT_EQ(r.mul_floor(100), 90);
  EXPECT_EQ(r.mul_floor(15), 13);
  EXPECT_EQ(r.mul_ceil(15), 14);
  EXPECT_EQ(Rational(1, 20).mul_ceil(20), 1);
  EXPECT_EQ(Rational(1, 20).mul_ceil(21), 2);
  EXPECT_EQ(Rational(0, 1).mul_ceil(50), 0);
}

TEST(Rational, OrdersExactly) {
  EXPECT_LT(Rational(1, 3), Rational(34, 100));
  EXPECT_GT(Rational(1, 1), Rational(999, 1000));
  EXPECT_EQ(Rational(3, 9), Rational(1, 3));
}
