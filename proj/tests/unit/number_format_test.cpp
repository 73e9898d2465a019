#include <gtest/gtest.h>

#include "seechart/number_format.hpp"

using namespace seechart;

TEST(NumberFormat, ShortestAfterTwoDecimals) {
  EXPECT_EQ(format_number(829), "829");
  EXPECT_EQ(format_number(36.62), "36.62");
  EXPECT_EQ(format_number(33.0), "33");
  EXPECT_EQ(format_number(1.005), "1.01");
  EXPECT_EQ(format_number(10601), "10601");
  EXPECT_EQ(format_number(-0.001), "0");
}

TEST(NumberFormat, FixedDecimals) {
  EXPECT_EQ(format_number(33.0, 1), "33.0");
  EXPECT_EQ(format_number(252.40476, 1), "252.4");
  EXPECT_EQ(format_number(Number{283.7837, 2, "%"}), "283.78%");
}

TEST(NumberFormat, PercentStep) {
  // (14.2 - 3.7) / 3.7 * 100 = 283.7837...
  EXPECT_EQ(format_percent((14.2 - 3.7) / 3.7 * 100.0), "283.78%");
}

TEST(NumberFormat, RoundHalfAwayFromZero) {
  EXPECT_DOUBLE_EQ(round_to(2.5, 0), 3.0);
  EXPECT_DOUBLE_EQ(round_to(-2.5, 0), -3.0);
  EXPECT_DOUBLE_EQ(round_to(0.125, 2), 0.13);
}
