#include "seechart/number_format.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace seechart {

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // Nudge by a few ulps so 283.775 stored as 283.77499999 still rounds up.
  const double scaled = value * scale;
  const double nudged = scaled + std::copysign(std::abs(scaled) * 1e-12, scaled);
  return std::round(nudged) / scale;
}

std::string format_number(double value, int decimals) {
  if (!std::isfinite(value)) return "unknown";
  if (decimals >= 0) {
    double r = round_to(value, decimals);
    if (r == 0.0) r = 0.0;  // drop negative zero
    return fmt::format("{:.{}f}", r, decimals);
  }
  double r = round_to(value, 2);
  if (r == 0.0) r = 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), r, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

std::string format_number(const Number& number) {
  return format_number(number.value, number.decimals) + number.suffix;
}

std::string format_percent(double percent) { return format_number(percent, 2) + "%"; }

}  // namespace seechart
