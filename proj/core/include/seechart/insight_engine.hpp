#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seechart/chart_model.hpp"
#include "seechart/number_format.hpp"

namespace seechart {

enum class InsightCategory {
  IntroEncoding,
  ExtremaMinMax,
  LocalExtrema,
  GlobalExtrema,
  MaxDifference,
  ComparisonRelative,
  ComparisonAbsolute,
  OrderRank,
  TrendGlobal,
  TrendLocal,
  DerivedValue,
  SameValue,
  Shape,
};

std::string_view category_name(InsightCategory category) noexcept;
std::optional<InsightCategory> category_from_name(std::string_view name) noexcept;

using StringList = std::vector<std::string>;
using ParamValue =
    std::variant<Number, std::string, StringList, std::vector<Number>, std::vector<StringList>>;
using Params = std::map<std::string, ParamValue, std::less<>>;

/// One extracted fact. `variant` selects a template pool within the category
/// (e.g. OrderRank "series" ranks lines instead of categories).
struct InsightMessage {
  InsightCategory category = InsightCategory::IntroEncoding;
  std::string variant;
  Params params;
  double salience = 0.0;  // filled by rank()
  bool residual = false;  // ranked under the "Others" weight

  /// Registry key: "OrderRank" or "OrderRank/series".
  std::string template_key() const;

  const Number& number(std::string_view key) const;
  const std::string& text(std::string_view key) const;
  const StringList& list(std::string_view key) const;
  bool has(std::string_view key) const { return params.find(key) != params.end(); }

  bool operator==(const InsightMessage&) const = default;
};

nlohmann::json to_json_value(const InsightMessage& message);

enum class TrendDirection { Increasing, Decreasing, Constant };
std::string_view direction_name(TrendDirection direction) noexcept;

struct TrendSegment {
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  TrendDirection direction = TrendDirection::Constant;
  double percent_change = 0.0;  // rounded to 2 decimals; see `absolute_change`
  bool absolute_change = false; // start value was 0: percent_change holds the raw delta
  double normalized_peak_change = 0.0;

  bool operator==(const TrendSegment&) const = default;
};

// Reporting thresholds.
inline constexpr double kConstantTrendBand = 0.05;     // of the value range
inline constexpr double kLocalTrendFloor = 0.25;       // normalized peak change
inline constexpr std::size_t kMaxLocalTrends = 5;
inline constexpr double kZigZagReversalRatio = 0.40;
inline constexpr std::size_t kDefaultRankDepth = 3;

/// |v(i+1) - v(i)| divided by the largest such step; all zeros for a flat series.
std::vector<double> compute_changes(const Series& series);

TrendDirection fit_direction(const std::vector<double>& values);

InsightMessage global_trend(const Series& series);
/// Every segment, before thresholding; tiles [0, n-1].
std::vector<TrendSegment> segment_trends(const Series& series);
/// Segments that clear the reporting floor: at most five, largest change first.
std::vector<TrendSegment> local_trends(const Series& series);
std::vector<InsightMessage> local_trend_messages(const Series& series);

InsightMessage extrema(const Series& series);
InsightMessage max_difference(const Series& series);
InsightMessage derived_values(const Series& series);
InsightMessage order_rank(const Series& series, std::size_t k);
std::optional<InsightMessage> same_values(const Series& series);
std::optional<InsightMessage> shape(const Series& series);

std::vector<InsightMessage> multi_series_insights(const ChartSpec& spec);

/// The chart-level introduction (type, axes, counts).
InsightMessage intro_message(const ChartSpec& spec);

/// Every message the chart supports, intro first, in emission order.
std::vector<InsightMessage> compute_insights(const ChartSpec& spec);

}  // namespace seechart
