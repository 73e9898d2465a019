#include "seechart/chart_model.hpp"

#include <cmath>
#include <set>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seechart/error.hpp"

namespace seechart {

using nlohmann::json;

std::vector<std::string> ChartSpec::categories() const {
  std::vector<std::string> out;
  if (series.empty()) return out;
  out.reserve(series.front().points.size());
  for (const auto& p : series.front().points) out.push_back(p.category);
  return out;
}

bool is_multi_series(ChartType type) noexcept {
  return type == ChartType::GroupedBar || type == ChartType::StackedBar ||
         type == ChartType::MultiLine;
}

std::string_view chart_type_id(ChartType type) noexcept {
  switch (type) {
    case ChartType::Bar: return "bar";
    case ChartType::GroupedBar: return "grouped_bar";
    case ChartType::StackedBar: return "stacked_bar";
    case ChartType::Line: return "line";
    case ChartType::MultiLine: return "multi_line";
    case ChartType::Pie: return "pie";
  }
  return "bar";
}

std::optional<ChartType> chart_type_from_id(std::string_view id) noexcept {
  for (auto t : {ChartType::Bar, ChartType::GroupedBar, ChartType::StackedBar, ChartType::Line,
                 ChartType::MultiLine, ChartType::Pie}) {
    if (chart_type_id(t) == id) return t;
  }
  return std::nullopt;
}

std::string_view data_type_id(DataType type) noexcept {
  switch (type) {
    case DataType::Nominal: return "nominal";
    case DataType::Ordinal: return "ordinal";
    case DataType::Temporal: return "temporal";
    case DataType::Quantitative: return "quantitative";
  }
  return "nominal";
}

std::optional<DataType> data_type_from_id(std::string_view id) noexcept {
  for (auto t : {DataType::Nominal, DataType::Ordinal, DataType::Temporal, DataType::Quantitative}) {
    if (data_type_id(t) == id) return t;
  }
  return std::nullopt;
}

std::string_view chart_type_phrase(ChartType type) noexcept {
  switch (type) {
    case ChartType::Bar: return "bar";
    case ChartType::GroupedBar: return "grouped bar";
    case ChartType::StackedBar: return "stacked bar";
    case ChartType::Line: return "line";
    case ChartType::MultiLine: return "multi line";
    case ChartType::Pie: return "pie";
  }
  return "bar";
}

std::string_view chart_type_title(ChartType type) noexcept {
  switch (type) {
    case ChartType::Bar: return "Bar";
    case ChartType::GroupedBar: return "Grouped Bar";
    case ChartType::StackedBar: return "Stacked Bar";
    case ChartType::Line: return "Line";
    case ChartType::MultiLine: return "Multi Line";
    case ChartType::Pie: return "Pie";
  }
  return "Bar";
}

bool ValidationReport::has(std::string_view code) const noexcept {
  for (const auto& v : violations) {
    if (v.code == code) return true;
  }
  return false;
}

ValidationReport validate(const ChartSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string code, std::string path, std::string message) {
    report.violations.push_back({std::move(code), std::move(path), std::move(message)});
  };

  if (spec.y_axis.data_type != DataType::Quantitative) {
    add("Y_AXIS_NOT_QUANTITATIVE", "$.yAxis.dataType", "y axis must be quantitative");
  }
  if (spec.series.empty()) {
    add("EMPTY_SERIES", "$.series", "chart has no series");
    return report;
  }

  const bool multi = is_multi_series(spec.chart_type);
  if (!multi && spec.series.size() != 1) {
    add("SERIES_COUNT", "$.series",
        fmt::format("{} chart needs exactly one series, found {}", chart_type_id(spec.chart_type),
                    spec.series.size()));
  }
  if (multi && spec.series.size() < 2) {
    add("SERIES_COUNT", "$.series",
        fmt::format("{} chart needs at least two series, found {}",
                    chart_type_id(spec.chart_type), spec.series.size()));
  }

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& series = spec.series[s];
    const auto base = fmt::format("$.series[{}]", s);
    if (series.points.empty()) {
      add("EMPTY_POINTS", base + ".points", "series has no points");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < series.points.size(); ++i) {
      const auto& p = series.points[i];
      const auto path = fmt::format("{}.points[{}]", base, i);
      if (!std::isfinite(p.value)) {
        add("NON_FINITE_VALUE", path + ".y", "value is not finite");
      } else if (spec.chart_type == ChartType::Pie && p.value < 0.0) {
        add("NEGATIVE_PIE_VALUE", path + ".y", "pie values must be non-negative");
      }
      if (!seen.insert(p.category).second) {
        add("DUPLICATE_CATEGORY", path + ".x", fmt::format("category '{}' repeats", p.category));
      }
    }
  }

  if (spec.series.size() >= 2) {
    const auto& ref = spec.series.front().points;
    for (std::size_t s = 1; s < spec.series.size(); ++s) {
      const auto& pts = spec.series[s].points;
      bool same = pts.size() == ref.size();
      for (std::size_t i = 0; same && i < pts.size(); ++i) same = pts[i].category == ref[i].category;
      if (!same) {
        add("CATEGORY_MISMATCH", fmt::format("$.series[{}].points", s),
            "category list differs from the first series");
      }
    }
  }
  return report;
}

json to_json_value(const ChartSpec& spec) {
  json series = json::array();
  for (const auto& s : spec.series) {
    json points = json::array();
    for (const auto& p : s.points) points.push_back({{"x", p.category}, {"y", p.value}});
    series.push_back({{"name", s.name ? json(*s.name) : json(nullptr)}, {"points", std::move(points)}});
  }
  return {
      {"chartType", chart_type_id(spec.chart_type)},
      {"title", spec.title},
      {"xAxis", {{"label", spec.x_axis.label}, {"dataType", data_type_id(spec.x_axis.data_type)}}},
      {"yAxis", {{"label", spec.y_axis.label}, {"dataType", data_type_id(spec.y_axis.data_type)}}},
      {"series", std::move(series)},
  };
}

std::string to_json(const ChartSpec& spec, int indent) { return to_json_value(spec).dump(indent); }

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key, "missing required field");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw ParseError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

AxisSpec parse_axis(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  AxisSpec axis;
  axis.label = require_string(obj, "label", path);
  auto type = require_string(obj, "dataType", path);
  auto parsed = data_type_from_id(type);
  if (!parsed) throw ParseError(path + ".dataType", "unknown data type '" + type + "'");
  axis.data_type = *parsed;
  return axis;
}

}  // namespace

ChartSpec from_json_value(const json& root) {
  if (!root.is_object()) throw ParseError("$", "expected an object");
  ChartSpec spec;

  auto type = require_string(root, "chartType", "$");
  auto parsed = chart_type_from_id(type);
  if (!parsed) throw ParseError("$.chartType", "unknown chart type '" + type + "'");
  spec.chart_type = *parsed;

  if (auto it = root.find("title"); it != root.end()) {
    if (!it->is_string()) throw ParseError("$.title", "expected a string");
    spec.title = it->get<std::string>();
  }
  spec.x_axis = parse_axis(require(root, "xAxis", "$"), "$.xAxis");
  spec.y_axis = parse_axis(require(root, "yAxis", "$"), "$.yAxis");

  const auto& series = require(root, "series", "$");
  if (!series.is_array()) throw ParseError("$.series", "expected an array");
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto path = fmt::format("$.series[{}]", s);
    const auto& obj = series[s];
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    Series out;
    if (auto it = obj.find("name"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw ParseError(path + ".name", "expected a string or null");
      out.name = it->get<std::string>();
    }
    const auto& points = require(obj, "points", path);
    if (!points.is_array()) throw ParseError(path + ".points", "expected an array");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto ppath = fmt::format("{}.points[{}]", path, i);
      const auto& p = points[i];
      if (!p.is_object()) throw ParseError(ppath, "expected an object");
      DataPoint dp;
      dp.category = require_string(p, "x", ppath);
      const auto& y = require(p, "y", ppath);
      if (!y.is_number()) throw ParseError(ppath + ".y", "expected a number");
      dp.value = y.get<double>();
      out.points.push_back(std::move(dp));
    }
    spec.series.push_back(std::move(out));
  }
  return spec;
}

ChartSpec from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("malformed JSON: ") + e.what());
  }
  return from_json_value(root);
}

}  // namespace seechart
