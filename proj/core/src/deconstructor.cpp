#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"
#include "seechart/number_format.hpp"

namespace seechart {

nlohmann::json to_json_value(const Deconstruction& d) {
  auto j = to_json_value(d.chart);
  j["warnings"] = d.warnings;
  return j;
}

namespace {

enum class SeriesKind { Column, Bar, Line, Pie };

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  // collapse inner runs of whitespace (tspans split on lines)
  std::string collapsed;
  bool space = false;
  for (char c : out) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space) collapsed += ' ';
    space = false;
    collapsed += c;
  }
  return collapsed;
}

struct SeriesNode {
  std::size_t element = 0;
  std::size_t index = 0;
  SeriesKind kind = SeriesKind::Column;
};

std::optional<SeriesKind> kind_of(const SvgElement& e) {
  if (e.has_class("highcharts-column-series")) return SeriesKind::Column;
  if (e.has_class("highcharts-bar-series")) return SeriesKind::Bar;
  if (e.has_class("highcharts-line-series") || e.has_class("highcharts-spline-series")) {
    return SeriesKind::Line;
  }
  if (e.has_class("highcharts-pie-series")) return SeriesKind::Pie;
  return std::nullopt;
}

bool in_axis(const SvgChartDocument& doc, std::size_t i, std::string_view axis_class) {
  std::optional<std::size_t> cur = i;
  while (cur) {
    if (doc.at(*cur).has_class(axis_class)) return true;
    cur = doc.at(*cur).parent;
  }
  return false;
}

std::string axis_title(const SvgChartDocument& doc, std::string_view axis_class) {
  for (auto i : doc.with_class("highcharts-axis-title")) {
    if (in_axis(doc, i, axis_class)) return trim(doc.at(i).text);
  }
  return {};
}

// Text children of a labels group, in reading order along the axis.
std::vector<std::size_t> label_texts(const SvgChartDocument& doc, std::string_view group_class,
                                     bool by_x) {
  std::vector<std::size_t> out;
  for (auto g : doc.with_class(group_class)) {
    for (auto t : doc.descendants(g, {}, "text")) out.push_back(t);
  }
  std::stable_sort(out.begin(), out.end(), [&](auto a, auto b) {
    const auto& ba = doc.at(a).box;
    const auto& bb = doc.at(b).box;
    if (!ba || !bb) return false;
    return by_x ? ba->x < bb->x : ba->y < bb->y;
  });
  return out;
}

bool looks_temporal(const std::vector<std::string>& cats) {
  static const std::regex year(R"(^(1[0-9]|2[0-9])[0-9]{2}$)");
  static const std::regex month_year(
      R"(^(Jan|Feb|Mar|Apr|May|Jun|Jul|Aug|Sep|Oct|Nov|Dec)[a-z]*\.? ('?[0-9]{2}|[0-9]{4})$)",
      std::regex::icase);
  if (cats.empty()) return false;
  return std::all_of(cats.begin(), cats.end(), [](const auto& c) {
    return std::regex_match(c, year) || std::regex_match(c, month_year);
  });
}

struct RawValue {
  std::optional<double> value;
  std::string text;  // original label when read from a data label
};

struct PieLabel {
  std::string category;
  std::optional<double> value;
};

PieLabel split_pie_label(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    auto n = parse_label_number(text);
    return {{}, n ? std::optional<double>(n->value) : std::nullopt};
  }
  auto n = parse_label_number(std::string_view(text).substr(colon + 1));
  return {trim(std::string_view(text).substr(0, colon)),
          n ? std::optional<double>(n->value) : std::nullopt};
}

// Clockwise sweep from the slice's start vertex to its arc end, around the centre.
double slice_angle(const SvgElement& e) {
  const auto& v = e.vertices;
  if (v.size() < 3) return 0.0;
  const Point2 start = v[0], end = v[1], centre = v[2];
  const double a0 = std::atan2(start.y - centre.y, start.x - centre.x);
  const double a1 = std::atan2(end.y - centre.y, end.x - centre.x);
  double sweep = a1 - a0;
  while (sweep <= 0.0) sweep += 2 * std::numbers::pi;
  if (std::abs(start.x - end.x) < 1e-6 && std::abs(start.y - end.y) < 1e-6) sweep = 2 * std::numbers::pi;
  return sweep;
}

std::vector<std::size_t> point_marks(const SvgChartDocument& doc, std::size_t series_el,
                                     std::string_view tag) {
  auto marks = doc.descendants(series_el, "highcharts-point", tag);
  if (marks.empty()) marks = doc.descendants(series_el, {}, tag);
  std::erase_if(marks, [&](auto i) { return !doc.at(i).box; });
  return marks;
}

}  // namespace

Deconstruction deconstruct_svg(std::string_view svg_text) {
  return deconstruct_svg(SvgChartDocument::parse(svg_text));
}

Deconstruction deconstruct_svg(const SvgChartDocument& doc) {
  Deconstruction out;
  auto& warnings = out.warnings;

  const auto groups = doc.with_class("highcharts-series-group");
  if (groups.empty()) throw Error(ErrorCode::NoChartFound, "no highcharts-series-group element");

  std::vector<SeriesNode> nodes;
  for (auto g : groups) {
    for (auto s : doc.descendants(g, "highcharts-series")) {
      const auto& e = doc.at(s);
      if (e.has_class("highcharts-navigator-series")) continue;
      auto kind = kind_of(e);
      if (!kind) {
        throw Error(ErrorCode::UnsupportedMark,
                    fmt::format("unsupported series type in class '{}'", e.attr("class")));
      }
      nodes.push_back({s, e.class_index("highcharts-series-").value_or(nodes.size()), *kind});
    }
  }
  if (nodes.empty()) throw Error(ErrorCode::NoChartFound, "series group holds no series");
  std::stable_sort(nodes.begin(), nodes.end(), [](auto& a, auto& b) { return a.index < b.index; });
  const auto kind = nodes.front().kind;
  for (const auto& n : nodes) {
    if (n.kind != kind) throw Error(ErrorCode::UnsupportedMark, "mixed series types are not supported");
  }
  if (kind == SeriesKind::Pie && nodes.size() > 1) {
    throw Error(ErrorCode::UnsupportedMark, "multiple pie series are not supported");
  }
  const bool horizontal = kind == SeriesKind::Bar;
  const std::size_t n_series = nodes.size();

  // Data labels per series index.
  std::map<std::size_t, std::vector<std::string>> labels;
  for (auto g : doc.with_class("highcharts-data-labels")) {
    const auto idx = doc.at(g).class_index("highcharts-series-").value_or(0);
    auto items = doc.descendants(g, "highcharts-data-label");
    if (items.empty()) items = doc.descendants(g, {}, "text");
    for (auto i : items) labels[idx].push_back(trim(doc.at(i).text));
  }

  // Legend names per series index.
  std::map<std::size_t, std::string> legend;
  std::vector<std::string> legend_order;
  for (auto i : doc.with_class("highcharts-legend-item")) {
    const auto name = trim(doc.at(i).text);
    legend_order.push_back(name);
    if (auto idx = doc.at(i).class_index("highcharts-series-")) legend.emplace(*idx, name);
  }

  std::vector<std::vector<RawValue>> values(n_series);
  std::vector<std::string> pie_categories;
  bool stacked = false;

  // Geometry, read lazily: only series without labels need a scale.
  std::optional<AxisScale> scale;
  auto value_scale = [&]() -> const AxisScale& {
    if (scale) return *scale;
    const auto ticks = label_texts(doc, "highcharts-yaxis-labels", horizontal);
    std::vector<double> pos, vals;
    int decimals = 0;
    for (auto t : ticks) {
      auto n = parse_label_number(trim(doc.at(t).text));
      if (!n || !doc.at(t).box) continue;
      pos.push_back(horizontal ? doc.at(t).box->x : doc.at(t).box->y);
      vals.push_back(n->value);
      decimals = std::max(decimals, n->decimals);
    }
    // Grid lines sit exactly on the ticks; label baselines are offset.
    std::vector<double> grid;
    for (auto g : doc.with_class("highcharts-yaxis-grid")) {
      for (auto p : doc.descendants(g, {}, "path")) {
        const auto& v = doc.at(p).vertices;
        if (!v.empty()) grid.push_back(horizontal ? v.front().x : v.front().y);
      }
    }
    if (grid.size() == pos.size() && !grid.empty()) {
      std::sort(grid.begin(), grid.end());
      pos = grid;
    }
    if (vals.size() >= 2) {
      const double range = *std::max_element(vals.begin(), vals.end()) -
                           *std::min_element(vals.begin(), vals.end());
      // Tick precision, refined so rounding never exceeds 0.25% of the range.
      if (range > 0) decimals = std::max(decimals, static_cast<int>(std::ceil(std::log10(200.0 / range))));
    }
    scale = fit_axis_scale(horizontal ? Orientation::X : Orientation::Y, pos, vals, decimals);
    return *scale;
  };

  if (kind == SeriesKind::Column || kind == SeriesKind::Bar) {
    // Stacks share an x slot across series; groups sit side by side.
    if (n_series > 1) {
      auto a = point_marks(doc, nodes[0].element, "rect");
      auto b = point_marks(doc, nodes[1].element, "rect");
      if (!a.empty() && !b.empty()) {
        const auto& ba = *doc.at(a.front()).box;
        const auto& bb = *doc.at(b.front()).box;
        stacked = horizontal ? std::abs(ba.y - bb.y) < 0.5 : std::abs(ba.x - bb.x) < 0.5;
      }
    }
  }

  for (std::size_t s = 0; s < n_series; ++s) {
    const auto& node = nodes[s];
    auto lab = labels.find(node.index);
    if (lab != labels.end() && !lab->second.empty()) {
      for (const auto& text : lab->second) {
        if (kind == SeriesKind::Pie) {
          auto pl = split_pie_label(text);
          pie_categories.push_back(pl.category);
          values[s].push_back({pl.value, text});
        } else {
          auto n = parse_label_number(text);
          values[s].push_back({n ? std::optional<double>(n->value) : std::nullopt, text});
        }
      }
      continue;
    }

    std::vector<MarkRecord> marks;
    switch (kind) {
      case SeriesKind::Column:
      case SeriesKind::Bar: {
        auto rects = point_marks(doc, node.element, "rect");
        std::stable_sort(rects.begin(), rects.end(), [&](auto a, auto b) {
          return horizontal ? doc.at(a).box->y < doc.at(b).box->y
                            : doc.at(a).box->center_x() < doc.at(b).box->center_x();
        });
        for (std::size_t i = 0; i < rects.size(); ++i) {
          marks.push_back({stacked ? MarkKind::StackSegment : MarkKind::BarRect, *doc.at(rects[i]).box, s, i});
        }
        break;
      }
      case SeriesKind::Line: {
        auto graph = doc.descendants(node.element, "highcharts-graph", "path");
        std::vector<Point2> pts;
        if (!graph.empty()) {
          pts = doc.at(graph.front()).vertices;
        } else {
          for (auto m : point_marks(doc, node.element, {})) {
            const auto& b = *doc.at(m).box;
            pts.push_back({b.center_x(), b.y + b.height / 2.0});
          }
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
          marks.push_back({MarkKind::LineVertex, BBox{pts[i].x, pts[i].y, 0, 0}, s, i});
        }
        break;
      }
      case SeriesKind::Pie: {
        auto slices = point_marks(doc, node.element, "path");
        double total = 0.0;
        std::vector<double> angles;
        for (auto i : slices) total += angles.emplace_back(slice_angle(doc.at(i)));
        for (auto a : angles) values[s].push_back({total > 0 ? round_to(100.0 * a / total, 2) : 0.0, {}});
        if (!slices.empty()) warnings.push_back("pie has no data labels; values are percentage shares of the slice angles");
        continue;
      }
    }
    if (marks.empty()) continue;
    const auto& sc = value_scale();
    for (auto v : recover_from_marks(marks, sc)) values[s].push_back({v, {}});
  }

  const std::size_t n_points = values.front().size();
  for (std::size_t s = 1; s < n_series; ++s) {
    if (values[s].size() != n_points) {
      throw Error(ErrorCode::InconsistentSeries,
                  fmt::format("series {} has {} points, series 1 has {}", s + 1, values[s].size(), n_points));
    }
  }
  if (n_points == 0) throw Error(ErrorCode::NoChartFound, "no data marks or labels found");

  std::vector<std::string> categories;
  if (kind == SeriesKind::Pie) {
    categories = pie_categories;
    if (categories.size() != n_points || std::any_of(categories.begin(), categories.end(),
                                                     [](auto& c) { return c.empty(); })) {
      categories = legend_order;
    }
  } else {
    for (auto t : label_texts(doc, "highcharts-xaxis-labels", !horizontal)) {
      categories.push_back(trim(doc.at(t).text));
    }
  }
  if (categories.size() != n_points) {
    if (!categories.empty()) {
      warnings.push_back(fmt::format("category axis shows {} labels for {} points; categories are numbered",
                                     categories.size(), n_points));
    }
    categories.clear();
    for (std::size_t i = 0; i < n_points; ++i) categories.push_back(std::to_string(i + 1));
  }

  // Unreadable labels drop their point; on multi-series charts the whole
  // category goes so the series stay aligned.
  std::set<std::size_t> dropped;
  for (std::size_t s = 0; s < n_series; ++s) {
    for (std::size_t i = 0; i < n_points; ++i) {
      if (values[s][i].value) continue;
      dropped.insert(i);
      warnings.push_back(fmt::format("dropped {} '{}'{}: unreadable data label '{}'",
                                     n_series > 1 ? "category" : "point", categories[i],
                                     n_series > 1 ? fmt::format(" (series {})", s + 1) : std::string(),
                                     values[s][i].text));
    }
  }

  ChartSpec& chart = out.chart;
  switch (kind) {
    case SeriesKind::Column:
    case SeriesKind::Bar:
      chart.chart_type = n_series == 1 ? ChartType::Bar : stacked ? ChartType::StackedBar : ChartType::GroupedBar;
      break;
    case SeriesKind::Line: chart.chart_type = n_series == 1 ? ChartType::Line : ChartType::MultiLine; break;
    case SeriesKind::Pie: chart.chart_type = ChartType::Pie; break;
  }
  if (auto t = doc.with_class("highcharts-title"); !t.empty()) chart.title = trim(doc.at(t.front()).text);
  chart.x_axis.label = axis_title(doc, "highcharts-xaxis");
  chart.y_axis.label = axis_title(doc, "highcharts-yaxis");
  if (kind == SeriesKind::Pie) {
    if (chart.x_axis.label.empty()) chart.x_axis.label = "Category";
    if (chart.y_axis.label.empty()) chart.y_axis.label = "Value";
  }
  if (chart.x_axis.label.empty()) {
    chart.x_axis.label = "Category";
    warnings.push_back("x axis has no title; using 'Category'");
  }
  if (chart.y_axis.label.empty()) {
    chart.y_axis.label = "Value";
    warnings.push_back("y axis has no title; using 'Value'");
  }
  chart.y_axis.data_type = DataType::Quantitative;

  for (std::size_t s = 0; s < n_series; ++s) {
    Series series;
    if (n_series > 1) {
      auto it = legend.find(nodes[s].index);
      series.name = it != legend.end() ? it->second : fmt::format("Series {}", nodes[s].index + 1);
    }
    for (std::size_t i = 0; i < n_points; ++i) {
      if (dropped.count(i)) continue;
      series.points.push_back({categories[i], *values[s][i].value});
    }
    chart.series.push_back(std::move(series));
  }
  if (chart.point_count() == 0) throw Error(ErrorCode::NoChartFound, "no readable data points");

  const auto cats = chart.categories();
  if (kind == SeriesKind::Pie) {
    chart.x_axis.data_type = DataType::Nominal;
  } else if (looks_temporal(cats)) {
    chart.x_axis.data_type = DataType::Temporal;
  } else {
    chart.x_axis.data_type = kind == SeriesKind::Line ? DataType::Ordinal : DataType::Nominal;
  }
  return out;
}

}  // namespace seechart
