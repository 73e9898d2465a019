#pragma once

#include <string>

namespace seechart {

/// A numeric message parameter together with the precision it is spoken at.
struct Number {
  double value = 0.0;
  int decimals = -1;   // >= 0: fixed decimals; -1: shortest form after rounding to 2 places
  std::string suffix;  // e.g. "%"

  bool operator==(const Number&) const = default;
};

/// Round half away from zero to `decimals` places.
double round_to(double value, int decimals);

/// Plain rendering: no thousands separators, no trailing zeros unless fixed.
std::string format_number(double value, int decimals = -1);
std::string format_number(const Number& number);

/// "283.78%" style rendering of a percentage.
std::string format_percent(double percent);

}  // namespace seechart
