#include "seechart/insight_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seechart/error.hpp"

namespace seechart {

namespace {

constexpr InsightCategory kAllCategories[] = {
    InsightCategory::IntroEncoding,     InsightCategory::ExtremaMinMax,
    InsightCategory::LocalExtrema,      InsightCategory::GlobalExtrema,
    InsightCategory::MaxDifference,     InsightCategory::ComparisonRelative,
    InsightCategory::ComparisonAbsolute, InsightCategory::OrderRank,
    InsightCategory::TrendGlobal,       InsightCategory::TrendLocal,
    InsightCategory::DerivedValue,      InsightCategory::SameValue,
    InsightCategory::Shape,
};

void require_points(const Series& series, std::size_t n, const char* op) {
  if (series.points.size() < n) {
    throw Error(ErrorCode::TooFewPoints,
                fmt::format("{} needs at least {} points, got {}", op, n, series.points.size()));
  }
}

Number plain(double v) { return Number{v, -1, {}}; }
Number count(std::size_t n) { return Number{static_cast<double>(n), 0, {}}; }

void tag_series(InsightMessage& m, const Series& series) {
  if (series.name) m.params["series"] = *series.name;
}

int sign_of(double d) { return (d > 0.0) - (d < 0.0); }

std::string_view past_phrase(TrendDirection d) {
  switch (d) {
    case TrendDirection::Increasing: return "increased";
    case TrendDirection::Decreasing: return "decreased";
    case TrendDirection::Constant: return "remained roughly constant";
  }
  return "";
}

std::string_view progressive_phrase(TrendDirection d) {
  switch (d) {
    case TrendDirection::Increasing: return "increasing";
    case TrendDirection::Decreasing: return "decreasing";
    case TrendDirection::Constant: return "roughly constant";
  }
  return "";
}

// Percent change between two values, or the raw delta when the start is 0.
Number change_between(double from, double to, bool* absolute = nullptr) {
  if (from == 0.0) {
    if (absolute) *absolute = true;
    return Number{round_to(std::abs(to - from), 2), -1, {}};
  }
  if (absolute) *absolute = false;
  return Number{round_to(std::abs(100.0 * (to - from) / std::abs(from)), 2), 2, "%"};
}

struct ExtremaIndices {
  std::size_t max = 0;
  std::size_t min = 0;
};

ExtremaIndices find_extrema(const Series& series) {
  ExtremaIndices e;
  const auto& pts = series.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].value > pts[e.max].value) e.max = i;
    if (pts[i].value < pts[e.min].value) e.min = i;
  }
  return e;
}

}  // namespace

std::string_view category_name(InsightCategory category) noexcept {
  switch (category) {
    case InsightCategory::IntroEncoding: return "IntroEncoding";
    case InsightCategory::ExtremaMinMax: return "ExtremaMinMax";
    case InsightCategory::LocalExtrema: return "LocalExtrema";
    case InsightCategory::GlobalExtrema: return "GlobalExtrema";
    case InsightCategory::MaxDifference: return "MaxDifference";
    case InsightCategory::ComparisonRelative: return "ComparisonRelative";
    case InsightCategory::ComparisonAbsolute: return "ComparisonAbsolute";
    case InsightCategory::OrderRank: return "OrderRank";
    case InsightCategory::TrendGlobal: return "TrendGlobal";
    case InsightCategory::TrendLocal: return "TrendLocal";
    case InsightCategory::DerivedValue: return "DerivedValue";
    case InsightCategory::SameValue: return "SameValue";
    case InsightCategory::Shape: return "Shape";
  }
  return "";
}

std::optional<InsightCategory> category_from_name(std::string_view name) noexcept {
  for (auto c : kAllCategories) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view direction_name(TrendDirection direction) noexcept {
  switch (direction) {
    case TrendDirection::Increasing: return "increasing";
    case TrendDirection::Decreasing: return "decreasing";
    case TrendDirection::Constant: return "constant";
  }
  return "";
}

std::string InsightMessage::template_key() const {
  std::string key(category_name(category));
  if (!variant.empty()) key += "/" + variant;
  return key;
}

const Number& InsightMessage::number(std::string_view key) const {
  auto it = params.find(key);
  if (it == params.end()) throw std::out_of_range(fmt::format("no param '{}'", key));
  return std::get<Number>(it->second);
}

const std::string& InsightMessage::text(std::string_view key) const {
  auto it = params.find(key);
  if (it == params.end()) throw std::out_of_range(fmt::format("no param '{}'", key));
  return std::get<std::string>(it->second);
}

const StringList& InsightMessage::list(std::string_view key) const {
  auto it = params.find(key);
  if (it == params.end()) throw std::out_of_range(fmt::format("no param '{}'", key));
  return std::get<StringList>(it->second);
}

nlohmann::json to_json_value(const InsightMessage& message) {
  using nlohmann::json;
  json params = json::object();
  for (const auto& [key, value] : message.params) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Number>) {
            params[key] = v.decimals >= 0 ? round_to(v.value, v.decimals) : round_to(v.value, 2);
          } else if constexpr (std::is_same_v<T, std::vector<Number>>) {
            json arr = json::array();
            for (const auto& n : v) arr.push_back(round_to(n.value, n.decimals >= 0 ? n.decimals : 2));
            params[key] = std::move(arr);
          } else {
            params[key] = v;
          }
        },
        value);
  }
  json out = {{"category", category_name(message.category)},
              {"params", std::move(params)},
              {"salience", message.salience}};
  if (!message.variant.empty()) out["variant"] = message.variant;
  return out;
}

std::vector<double> compute_changes(const Series& series) {
  require_points(series, 2, "compute_changes");
  const auto& pts = series.points;
  std::vector<double> out(pts.size() - 1);
  double peak = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out[i] = std::abs(pts[i + 1].value - pts[i].value);
    peak = std::max(peak, out[i]);
  }
  for (auto& c : out) c = peak > 0.0 ? c / peak : 0.0;
  return out;
}

TrendDirection fit_direction(const std::vector<double>& values) {
  const auto n = values.size();
  if (n < 2) return TrendDirection::Constant;
  const double mean_x = static_cast<double>(n - 1) / 2.0;
  const double mean_y = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (values[i] - mean_y);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  const double fitted_change = slope * static_cast<double>(n - 1);
  if (range <= 0.0 || std::abs(fitted_change) < kConstantTrendBand * range) {
    return TrendDirection::Constant;
  }
  return slope > 0.0 ? TrendDirection::Increasing : TrendDirection::Decreasing;
}

InsightMessage global_trend(const Series& series) {
  require_points(series, 2, "global_trend");
  std::vector<double> values;
  values.reserve(series.points.size());
  for (const auto& p : series.points) values.push_back(p.value);
  const auto direction = fit_direction(values);

  const auto& first = series.points.front();
  const auto& last = series.points.back();
  InsightMessage m;
  m.category = InsightCategory::TrendGlobal;
  m.params["direction"] = std::string(direction_name(direction));
  m.params["direction_past"] = std::string(past_phrase(direction));
  m.params["direction_ing"] = std::string(progressive_phrase(direction));
  m.params["start_category"] = first.category;
  m.params["end_category"] = last.category;
  m.params["first_value"] = plain(first.value);
  m.params["last_value"] = plain(last.value);
  m.params["change"] = change_between(first.value, last.value);
  m.params["point_count"] = count(series.points.size());
  tag_series(m, series);
  return m;
}

std::vector<TrendSegment> segment_trends(const Series& series) {
  require_points(series, 3, "local_trends");
  const auto& pts = series.points;
  const auto n = pts.size();
  const auto changes = compute_changes(series);
  const auto ext = find_extrema(series);

  std::vector<TrendSegment> segments;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int dir = sign_of(pts[i + 1].value - pts[i].value);
    const bool last_step = i + 2 == n;
    const int next_dir = last_step ? dir : sign_of(pts[i + 2].value - pts[i + 1].value);
    const bool at_extremum = i + 1 == ext.max || i + 1 == ext.min;
    if (!last_step && next_dir == dir && !at_extremum) continue;

    TrendSegment seg;
    seg.start_index = start;
    seg.end_index = i + 1;
    seg.direction = dir > 0 ? TrendDirection::Increasing
                  : dir < 0 ? TrendDirection::Decreasing
                            : TrendDirection::Constant;
    const double from = pts[seg.start_index].value;
    const double to = pts[seg.end_index].value;
    if (from == 0.0) {
      seg.absolute_change = true;
      seg.percent_change = round_to(to - from, 2);
    } else {
      seg.percent_change = round_to(100.0 * (to - from) / std::abs(from), 2);
    }
    for (std::size_t k = seg.start_index; k < seg.end_index; ++k) {
      seg.normalized_peak_change = std::max(seg.normalized_peak_change, changes[k]);
    }
    segments.push_back(seg);
    start = i + 1;
  }
  return segments;
}

std::vector<TrendSegment> local_trends(const Series& series) {
  auto segments = segment_trends(series);
  std::vector<TrendSegment> kept;
  for (const auto& s : segments) {
    if (s.direction != TrendDirection::Constant && s.normalized_peak_change >= kLocalTrendFloor) {
      kept.push_back(s);
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [](const TrendSegment& a, const TrendSegment& b) {
    return a.normalized_peak_change > b.normalized_peak_change;
  });
  if (kept.size() > kMaxLocalTrends) kept.resize(kMaxLocalTrends);
  return kept;
}

std::vector<InsightMessage> local_trend_messages(const Series& series) {
  std::vector<InsightMessage> out;
  for (const auto& seg : local_trends(series)) {
    InsightMessage m;
    m.category = InsightCategory::TrendLocal;
    m.params["direction"] = std::string(direction_name(seg.direction));
    m.params["direction_past"] = std::string(past_phrase(seg.direction));
    m.params["start_category"] = series.points[seg.start_index].category;
    m.params["end_category"] = series.points[seg.end_index].category;
    m.params["start_index"] = count(seg.start_index);
    m.params["end_index"] = count(seg.end_index);
    m.params["change"] = seg.absolute_change
                             ? Number{std::abs(seg.percent_change), -1, {}}
                             : Number{std::abs(seg.percent_change), 2, "%"};
    m.params["peak_change"] = Number{seg.normalized_peak_change, 2, {}};
    tag_series(m, series);
    out.push_back(std::move(m));
  }
  return out;
}

InsightMessage extrema(const Series& series) {
  require_points(series, 1, "extrema");
  const auto e = find_extrema(series);
  InsightMessage m;
  m.category = InsightCategory::ExtremaMinMax;
  m.params["max_category"] = series.points[e.max].category;
  m.params["max_value"] = plain(series.points[e.max].value);
  m.params["min_category"] = series.points[e.min].category;
  m.params["min_value"] = plain(series.points[e.min].value);
  tag_series(m, series);
  return m;
}

InsightMessage max_difference(const Series& series) {
  require_points(series, 2, "max_difference");
  auto m = extrema(series);
  m.category = InsightCategory::MaxDifference;
  const double diff = m.number("max_value").value - m.number("min_value").value;
  m.params["difference"] = plain(diff);
  return m;
}

InsightMessage derived_values(const Series& series) {
  require_points(series, 1, "derived_values");
  double sum = 0.0;
  bool integral = true;
  for (const auto& p : series.points) {
    sum += p.value;
    integral = integral && std::floor(p.value) == p.value;
  }
  const double mean = sum / static_cast<double>(series.points.size());
  InsightMessage m;
  m.category = InsightCategory::DerivedValue;
  m.params["mean"] = Number{round_to(mean, 1), 1, {}};
  m.params["sum"] = integral ? Number{sum, 0, {}} : Number{round_to(sum, 1), 1, {}};
  m.params["count"] = count(series.points.size());
  tag_series(m, series);
  return m;
}

InsightMessage order_rank(const Series& series, std::size_t k) {
  require_points(series, 1, "order_rank");
  if (k == 0) throw std::invalid_argument("order_rank: k must be positive");
  if (k > series.points.size()) {
    throw Error(ErrorCode::KTooLarge,
                fmt::format("order_rank: k = {} exceeds {} points", k, series.points.size()));
  }
  std::vector<std::size_t> order(series.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return series.points[a].value > series.points[b].value;
  });
  const auto e = find_extrema(series);

  StringList ranked;
  std::vector<Number> values;
  for (std::size_t i = 0; i < k; ++i) {
    ranked.push_back(series.points[order[i]].category);
    values.push_back(plain(series.points[order[i]].value));
  }
  InsightMessage m;
  m.category = InsightCategory::OrderRank;
  m.params["ranked_categories"] = ranked;
  m.params["ranked_values"] = values;
  m.params["top_category"] = ranked.front();
  m.params["top_value"] = values.front();
  m.params["following"] = StringList(ranked.begin() + 1, ranked.end());
  m.params["min_category"] = series.points[e.min].category;
  m.params["min_value"] = plain(series.points[e.min].value);
  m.params["k"] = count(k);
  tag_series(m, series);
  return m;
}

std::optional<InsightMessage> same_values(const Series& series) {
  struct Group {
    double value;
    std::size_t first;
    StringList members;
  };
  std::vector<Group> groups;
  std::unordered_map<double, std::size_t> by_value;
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    const auto& p = series.points[i];
    const double key = p.value == 0.0 ? 0.0 : p.value;  // -0 and 0 share a group
    auto [it, inserted] = by_value.try_emplace(key, groups.size());
    if (inserted) {
      groups.push_back({p.value, i, {p.category}});
    } else {
      groups[it->second].members.push_back(p.category);
    }
  }
  std::erase_if(groups, [](const Group& g) { return g.members.size() < 2; });
  if (groups.empty()) return std::nullopt;
  std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    return a.members.size() > b.members.size();
  });

  std::vector<StringList> all;
  for (const auto& g : groups) all.push_back(g.members);
  InsightMessage m;
  m.category = InsightCategory::SameValue;
  m.params["groups"] = all;
  m.params["categories"] = groups.front().members;
  m.params["value"] = plain(groups.front().value);
  m.params["group_count"] = count(groups.size());
  tag_series(m, series);
  return m;
}

std::optional<InsightMessage> shape(const Series& series) {
  const auto& pts = series.points;
  if (pts.size() < 4) return std::nullopt;
  int last_dir = 0;
  std::size_t reversals = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const int dir = sign_of(pts[i + 1].value - pts[i].value);
    if (dir == 0) continue;
    if (last_dir != 0 && dir != last_dir) ++reversals;
    last_dir = dir;
  }
  const double ratio = static_cast<double>(reversals) / static_cast<double>(pts.size() - 1);
  if (ratio < kZigZagReversalRatio) return std::nullopt;
  InsightMessage m;
  m.category = InsightCategory::Shape;
  m.params["shape"] = std::string("zig-zag");
  m.params["reversals"] = count(reversals);
  tag_series(m, series);
  return m;
}

InsightMessage intro_message(const ChartSpec& spec) {
  InsightMessage m;
  m.category = InsightCategory::IntroEncoding;
  switch (spec.chart_type) {
    case ChartType::Bar: break;
    case ChartType::Line: m.variant = "line"; break;
    case ChartType::Pie: m.variant = "pie"; break;
    case ChartType::MultiLine: m.variant = "multi_line"; break;
    case ChartType::GroupedBar:
    case ChartType::StackedBar: m.variant = "grouped"; break;
  }
  StringList names;
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    names.push_back(spec.series[i].name.value_or(fmt::format("Series {}", i + 1)));
  }
  m.params["point_count"] = count(spec.point_count());
  m.params["series_count"] = count(spec.series.size());
  m.params["series_names"] = names;
  m.params["categories"] = spec.categories();
  return m;
}

namespace {

void single_series_insights(const ChartSpec& spec, std::vector<InsightMessage>& out) {
  const auto& series = spec.series.front();
  const auto n = series.points.size();
  if (n == 1) {
    InsightMessage m;
    m.category = InsightCategory::ExtremaMinMax;
    m.variant = "single";
    m.params["category"] = series.points.front().category;
    m.params["value"] = plain(series.points.front().value);
    out.push_back(std::move(m));
    return;
  }
  const std::size_t depth = std::min(kDefaultRankDepth, n);

  if (spec.chart_type == ChartType::Pie) {
    double total = 0.0;
    for (const auto& p : series.points) total += p.value;
    auto share = [&](double v) { return Number{total > 0.0 ? round_to(100.0 * v / total, 2) : 0.0, -1, "%"}; };

    auto ext = extrema(series);
    ext.variant = "pie";
    ext.params["max_share"] = share(ext.number("max_value").value);
    ext.params["min_share"] = share(ext.number("min_value").value);
    out.push_back(std::move(ext));

    auto order = order_rank(series, n);
    order.variant = "pie";
    StringList shares;
    for (const auto& cat : order.list("ranked_categories")) {
      auto it = std::find_if(series.points.begin(), series.points.end(),
                             [&](const DataPoint& p) { return p.category == cat; });
      shares.push_back(fmt::format("{} ({})", cat, format_number(share(it->value))));
    }
    order.params["ranked_shares"] = shares;
    out.push_back(std::move(order));

    auto derived = derived_values(series);
    derived.variant = "pie";
    out.push_back(std::move(derived));
    return;
  }

  if (spec.chart_type == ChartType::Line) {
    out.push_back(global_trend(series));
    if (auto s = shape(series)) out.push_back(std::move(*s));
    if (n >= 3) {
      for (auto& m : local_trend_messages(series)) out.push_back(std::move(m));
    }
    out.push_back(extrema(series));
    out.push_back(max_difference(series));
    out.push_back(derived_values(series));
    if (auto s = same_values(series)) out.push_back(std::move(*s));
    out.push_back(order_rank(series, depth));
    return;
  }

  out.push_back(extrema(series));
  out.push_back(max_difference(series));
  out.push_back(order_rank(series, depth));
  out.push_back(global_trend(series));
  out.push_back(derived_values(series));
  if (auto s = same_values(series)) out.push_back(std::move(*s));
}

}  // namespace

std::vector<InsightMessage> compute_insights(const ChartSpec& spec) {
  const auto report = validate(spec);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::InvalidChart, fmt::format("{} at {}: {}", v.code, v.path, v.message));
  }
  std::vector<InsightMessage> out;
  out.push_back(intro_message(spec));
  if (is_multi_series(spec.chart_type)) {
    for (auto& m : multi_series_insights(spec)) out.push_back(std::move(m));
  } else {
    single_series_insights(spec, out);
  }
  return out;
}

}  // namespace seechart
