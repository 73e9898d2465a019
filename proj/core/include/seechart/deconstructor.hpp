#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seechart/chart_model.hpp"

namespace seechart {

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  double bottom() const { return y + height; }
  double right() const { return x + width; }
  double center_x() const { return x + width / 2.0; }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct SvgElement {
  std::string tag;
  std::map<std::string, std::string, std::less<>> attributes;
  std::string text;                 // character data of this element and its descendants
  std::optional<BBox> box;          // in document coordinates, translate() applied
  std::vector<Point2> vertices;     // path vertices (M/L/H/V), document coordinates
  Point2 offset;                    // accumulated translate()
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;

  std::string_view attr(std::string_view name) const;
  bool has_class(std::string_view cls) const;
  /// Number of "highcharts-series-N" style suffix, when present.
  std::optional<std::size_t> class_index(std::string_view prefix) const;
};

/// Parsed SVG element tree. Elements are stored in document order.
class SvgChartDocument {
 public:
  /// Throws ParseError on malformed XML.
  static SvgChartDocument parse(std::string_view text);

  const std::vector<SvgElement>& elements() const { return elements_; }
  const SvgElement& at(std::size_t i) const { return elements_.at(i); }
  /// Document-order indices of elements carrying `cls`.
  std::vector<std::size_t> with_class(std::string_view cls) const;
  /// Descendants of `root` (document order) carrying `cls`; empty cls matches any.
  std::vector<std::size_t> descendants(std::size_t root, std::string_view cls = {},
                                       std::string_view tag = {}) const;
  bool is_descendant(std::size_t node, std::size_t ancestor) const;

 private:
  std::vector<SvgElement> elements_;
};

enum class Orientation { X, Y };

/// Linear value = intercept + value_per_pixel * pixel fitted over all ticks.
struct AxisScale {
  Orientation orientation = Orientation::Y;
  std::vector<double> tick_positions;
  std::vector<double> tick_values;
  double value_per_pixel = 0.0;
  double intercept = 0.0;
  int decimals = 0;  // precision of the tick labels

  double value_at(double pixel) const { return intercept + value_per_pixel * pixel; }
  double pixel_of(double value) const { return (value - intercept) / value_per_pixel; }
  double min_value() const;
  double max_value() const;
};

/// Least-squares fit; throws Error(UnreadableAxis) for < 2 ticks, non-monotone
/// values, or a residual above 0.5% of the value range.
AxisScale fit_axis_scale(Orientation orientation, std::vector<double> positions,
                         std::vector<double> values, int decimals = 0);

/// Numeric reading of a tick or data label: "1,200", "2.5k", "45 %". nullopt when
/// the text holds no number.
struct LabelNumber {
  double value = 0.0;
  int decimals = 0;
};
std::optional<LabelNumber> parse_label_number(std::string_view text);

enum class MarkKind { BarRect, LineVertex, StackSegment };

struct MarkRecord {
  MarkKind kind = MarkKind::BarRect;
  BBox box;  // for vertices a zero-size box at the vertex
  std::size_t series = 0;
  std::size_t category = 0;
};

/// Values in mark order. Bars read their edge farther from the zero line;
/// stack segments read their height. Throws Error(ScaleMismatch) for marks
/// beyond the tick range by more than 5% of it.
std::vector<double> recover_from_marks(const std::vector<MarkRecord>& marks, const AxisScale& scale);

inline constexpr double kScaleResidualTolerance = 0.005;
inline constexpr double kScaleMismatchTolerance = 0.05;

struct Deconstruction {
  ChartSpec chart;
  std::vector<std::string> warnings;
};

/// Chart JSON plus "warnings".
nlohmann::json to_json_value(const Deconstruction& d);

/// Highcharts-convention SVG. Throws NoChartFound, UnreadableAxis,
/// InconsistentSeries, UnsupportedMark, ScaleMismatch.
Deconstruction deconstruct_svg(const SvgChartDocument& doc);
Deconstruction deconstruct_svg(std::string_view svg_text);

/// Vega-Lite style spec with inline data. Throws UnsupportedMark, MissingData,
/// InconsistentSeries, ParseError.
ChartSpec ingest_vegalite(std::string_view spec_text);
ChartSpec ingest_vegalite_value(const nlohmann::json& spec);
/// Inverse of ingest_vegalite for every chart type.
nlohmann::json emit_vegalite(const ChartSpec& spec);

}  // namespace seechart
