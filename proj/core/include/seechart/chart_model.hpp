#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace seechart {

enum class ChartType { Bar, GroupedBar, StackedBar, Line, MultiLine, Pie };
enum class DataType { Nominal, Ordinal, Temporal, Quantitative };

struct AxisSpec {
  std::string label;
  DataType data_type = DataType::Nominal;

  bool operator==(const AxisSpec&) const = default;
};

struct DataPoint {
  std::string category;
  double value = 0.0;

  bool operator==(const DataPoint&) const = default;
};

struct Series {
  std::optional<std::string> name;  // legend label; absent for single-series charts
  std::vector<DataPoint> points;

  bool operator==(const Series&) const = default;
};

/// Normalized chart: what every other stage consumes. Categories are opaque
/// labels kept in the given order.
struct ChartSpec {
  ChartType chart_type = ChartType::Bar;
  std::string title;
  AxisSpec x_axis;
  AxisSpec y_axis{"", DataType::Quantitative};
  std::vector<Series> series;

  bool operator==(const ChartSpec&) const = default;

  std::size_t point_count() const { return series.empty() ? 0 : series.front().points.size(); }
  std::vector<std::string> categories() const;
};

bool is_multi_series(ChartType type) noexcept;

/// Wire names used by the canonical JSON ("bar", "multi_line", ...).
std::string_view chart_type_id(ChartType type) noexcept;
std::optional<ChartType> chart_type_from_id(std::string_view id) noexcept;
std::string_view data_type_id(DataType type) noexcept;
std::optional<DataType> data_type_from_id(std::string_view id) noexcept;

/// Reading form: "bar", "grouped bar", "multi line", ...
std::string_view chart_type_phrase(ChartType type) noexcept;
/// Title-case form used by the title sentence: "Bar", "Multi Line", ...
std::string_view chart_type_title(ChartType type) noexcept;

struct Violation {
  std::string code;  // e.g. CATEGORY_MISMATCH
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(std::string_view code) const noexcept;
};

/// Reports every invariant violation; never throws.
ValidationReport validate(const ChartSpec& spec);

std::string to_json(const ChartSpec& spec, int indent = -1);
nlohmann::json to_json_value(const ChartSpec& spec);

/// Throws ParseError naming the offending path.
ChartSpec from_json(std::string_view text);
ChartSpec from_json_value(const nlohmann::json& value);

}  // namespace seechart
