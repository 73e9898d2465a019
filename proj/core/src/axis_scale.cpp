#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include <fmt/format.h>

#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"
#include "seechart/number_format.hpp"

namespace seechart {

double AxisScale::min_value() const {
  return *std::min_element(tick_values.begin(), tick_values.end());
}

double AxisScale::max_value() const {
  return *std::max_element(tick_values.begin(), tick_values.end());
}

std::optional<LabelNumber> parse_label_number(std::string_view text) {
  std::string s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    // U+2212 MINUS SIGN
    if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x88 &&
        static_cast<unsigned char>(text[i + 2]) == 0x92) {
      s += '-';
      i += 2;
      continue;
    }
    // NBSP / thin spaces and grouping commas carry no value.
    if (c == 0xC2 && i + 1 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0xA0) {
      ++i;
      continue;
    }
    if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(text[i + 2]) == 0xAF || static_cast<unsigned char>(text[i + 2]) == 0x89)) {
      i += 2;
      continue;
    }
    if (std::isspace(c) || c == ',') continue;
    s += static_cast<char>(c);
  }
  if (!s.empty() && (s.front() == '$')) s.erase(0, 1);
  if (!s.empty() && s.back() == '%') s.pop_back();
  int shift = 0;
  if (!s.empty()) {
    switch (s.back()) {
      case 'k': case 'K': shift = 3; break;
      case 'M': shift = 6; break;
      case 'G': case 'B': shift = 9; break;
      default: break;
    }
    if (shift) s.pop_back();
  }
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  int decimals = 0;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    auto e = s.find_first_of("eE", dot);
    decimals = static_cast<int>((e == std::string::npos ? s.size() : e) - dot - 1);
  }
  return LabelNumber{v * std::pow(10.0, shift), std::max(0, decimals - shift)};
}

AxisScale fit_axis_scale(Orientation orientation, std::vector<double> positions,
                         std::vector<double> values, int decimals) {
  if (positions.size() != values.size() || positions.size() < 2) {
    throw Error(ErrorCode::UnreadableAxis, "a quantitative axis needs at least 2 readable ticks");
  }
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return positions[a] < positions[b]; });
  AxisScale s;
  s.orientation = orientation;
  s.decimals = decimals;
  for (auto i : order) {
    s.tick_positions.push_back(positions[i]);
    s.tick_values.push_back(values[i]);
  }
  const auto n = s.tick_values.size();
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(s.tick_values[i] > s.tick_values[i - 1])) inc = false;
    if (!(s.tick_values[i] < s.tick_values[i - 1])) dec = false;
    if (s.tick_positions[i] == s.tick_positions[i - 1]) inc = dec = false;
  }
  if (!inc && !dec) throw Error(ErrorCode::UnreadableAxis, "tick values are not strictly monotone");

  const double mp = std::accumulate(s.tick_positions.begin(), s.tick_positions.end(), 0.0) / n;
  const double mv = std::accumulate(s.tick_values.begin(), s.tick_values.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (s.tick_positions[i] - mp) * (s.tick_values[i] - mv);
    sxx += (s.tick_positions[i] - mp) * (s.tick_positions[i] - mp);
  }
  s.value_per_pixel = sxy / sxx;
  s.intercept = mv - s.value_per_pixel * mp;

  const double range = s.max_value() - s.min_value();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(s.value_at(s.tick_positions[i]) - s.tick_values[i]);
    if (r > kScaleResidualTolerance * range) {
      throw Error(ErrorCode::UnreadableAxis,
                  fmt::format("ticks are not on a linear scale (tick {} is off by {})",
                              format_number(s.tick_values[i]), format_number(r)));
    }
  }
  return s;
}

std::vector<double> recover_from_marks(const std::vector<MarkRecord>& marks, const AxisScale& scale) {
  const bool vertical = scale.orientation == Orientation::Y;
  const double lo = scale.min_value(), hi = scale.max_value();
  const double range = hi - lo;
  const double slack = kScaleMismatchTolerance * range;
  const double baseline = scale.pixel_of(std::clamp(0.0, lo, hi));

  std::vector<double> out;
  out.reserve(marks.size());
  for (const auto& m : marks) {
    const double near_edge = vertical ? m.box.y : m.box.x;
    const double far_edge = vertical ? m.box.bottom() : m.box.right();
    double v = 0.0;
    switch (m.kind) {
      case MarkKind::LineVertex: v = scale.value_at(near_edge); break;
      case MarkKind::BarRect:
        v = scale.value_at(std::abs(near_edge - baseline) >= std::abs(far_edge - baseline) ? near_edge
                                                                                          : far_edge);
        break;
      case MarkKind::StackSegment:
        v = std::abs((far_edge - near_edge) * scale.value_per_pixel);
        break;
    }
    const bool out_of_range = m.kind == MarkKind::StackSegment ? v > range + slack
                                                               : (v < lo - slack || v > hi + slack);
    if (out_of_range) {
      throw Error(ErrorCode::ScaleMismatch,
                  fmt::format("mark for series {} point {} reads {} outside the axis range {} to {}",
                              m.series, m.category, format_number(v), format_number(lo),
                              format_number(hi)));
    }
    out.push_back(round_to(v, scale.decimals));
  }
  return out;
}

}  // namespace seechart
