#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seechart/chart_model.hpp"

namespace seechart {

enum class SelectionMode { SingleSeries, CrossSeries };

/// Selected point indices per series. Cross-series selections pick the same
/// categories on every series.
struct Selection {
  std::vector<std::vector<std::size_t>> indices;  // one (possibly empty) list per series
  SelectionMode mode = SelectionMode::CrossSeries;

  /// The same indices on every series of `spec`.
  static Selection across(const ChartSpec& spec, std::vector<std::size_t> indices);
  /// Indices on one series only.
  static Selection within(const ChartSpec& spec, std::size_t series, std::vector<std::size_t> indices);

  std::size_t total() const;
  bool operator==(const Selection&) const = default;
};

/// Parses "0-2,5,7-8" into sorted unique indices. Throws Error(InvalidSelection).
std::vector<std::size_t> parse_index_ranges(std::string_view text);

/// Throws Error(EmptySelection) or Error(InvalidSelection).
void check_selection(const ChartSpec& spec, const Selection& sel);

/// Sub-chart of the selected points, order and metadata preserved. A
/// single-series selection on a multi-series chart yields a single-series chart.
ChartSpec restrict(const ChartSpec& spec, const Selection& sel);

/// Contiguous runs of the selected categories: {"2012 to 2014", "2018"}.
std::vector<std::string> selection_ranges(const ChartSpec& spec, const Selection& sel);

/// "Year 2012 to 2014, and 2018 to 2019 are selected."
std::string describe_selection(const Selection& sel, const ChartSpec& spec);

enum class QueryIntent { Max, Min, Trend, Average, Sum, AxisLabel, ValueLookup, Unknown };

std::string_view intent_name(QueryIntent intent) noexcept;

struct Query {
  std::string raw_text;
  QueryIntent intent = QueryIntent::Unknown;
  std::string lookup_key;  // category label for ValueLookup
};

/// Keyword scan, then an exact (trimmed, case-folded) category-label match.
Query parse_query(std::string_view text, const std::vector<std::string>& labels = {});
Query parse_query(std::string_view text, const ChartSpec& spec);

enum class AnswerStatus { Found, NotFound, Reprompt };

struct AnswerItem {
  std::optional<std::string> series;
  std::string category;
  double value = 0.0;
  std::string detail;  // e.g. trend direction
};

struct Answer {
  QueryIntent intent = QueryIntent::Unknown;
  AnswerStatus status = AnswerStatus::Found;
  std::vector<AnswerItem> items;
  std::string spoken_text;
};

nlohmann::json to_json_value(const Answer& answer);

Answer answer(const ChartSpec& spec, const Query& query);

}  // namespace seechart
