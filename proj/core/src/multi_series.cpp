#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "seechart/error.hpp"
#include "seechart/insight_engine.hpp"

namespace seechart {

namespace {

std::string series_label(const ChartSpec& spec, std::size_t s) {
  return spec.series[s].name.value_or(fmt::format("Series {}", s + 1));
}

double mean_of(const Series& series) {
  double sum = 0.0;
  for (const auto& p : series.points) sum += p.value;
  return sum / static_cast<double>(series.points.size());
}

Number plain(double v) { return Number{v, -1, {}}; }

// Per-category mean across all series, as a synthetic series.
Series category_means(const ChartSpec& spec) {
  Series out;
  const auto n = spec.point_count();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& s : spec.series) sum += s.points[i].value;
    out.points.push_back({spec.series.front().points[i].category,
                          sum / static_cast<double>(spec.series.size())});
  }
  return out;
}

}  // namespace

std::vector<InsightMessage> multi_series_insights(const ChartSpec& spec) {
  if (spec.series.size() < 2) {
    throw Error(ErrorCode::InvalidChart, "multi-series insights need at least two series");
  }
  const auto& ref = spec.series.front().points;
  for (std::size_t s = 1; s < spec.series.size(); ++s) {
    const auto& pts = spec.series[s].points;
    bool same = pts.size() == ref.size();
    for (std::size_t i = 0; same && i < pts.size(); ++i) same = pts[i].category == ref[i].category;
    if (!same) {
      throw Error(ErrorCode::CategoryMismatch,
                  fmt::format("series {} does not share the category list of series 1", s + 1));
    }
  }
  if (ref.empty()) throw Error(ErrorCode::TooFewPoints, "series have no points");

  const auto n = ref.size();
  const auto series_count = Number{static_cast<double>(spec.series.size()), 0, {}};
  std::vector<InsightMessage> out;

  // Trends: the combined (mean) line first, then each series.
  if (n >= 2) {
    auto combined = global_trend(category_means(spec));
    combined.variant = "combined";
    combined.params["series_count"] = series_count;
    out.push_back(std::move(combined));
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
      auto m = global_trend(spec.series[s]);
      m.variant = "series";
      m.params["series"] = series_label(spec, s);
      out.push_back(std::move(m));
    }
  }

  // Series ordered by mean value.
  {
    std::vector<std::size_t> order(spec.series.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> means;
    for (const auto& s : spec.series) means.push_back(mean_of(s));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
    StringList names;
    std::vector<Number> ordered_means;
    for (auto s : order) {
      names.push_back(series_label(spec, s));
      ordered_means.push_back(Number{round_to(means[s], 2), -1, {}});
    }
    InsightMessage m;
    m.category = InsightCategory::OrderRank;
    m.variant = "series";
    m.params["series_order"] = names;
    m.params["means"] = ordered_means;
    m.params["top_series"] = names.front();
    m.params["top_mean"] = ordered_means.front();
    m.params["bottom_series"] = names.back();
    m.params["bottom_mean"] = ordered_means.back();
    m.params["series_count"] = series_count;
    out.push_back(std::move(m));
  }

  // Chart-wide extremes; ties go to the earlier series, then the earlier point.
  {
    std::size_t max_s = 0, max_i = 0, min_s = 0, min_i = 0;
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        const double v = spec.series[s].points[i].value;
        if (v > spec.series[max_s].points[max_i].value) max_s = s, max_i = i;
        if (v < spec.series[min_s].points[min_i].value) min_s = s, min_i = i;
      }
    }
    InsightMessage hi;
    hi.category = InsightCategory::GlobalExtrema;
    hi.variant = "max";
    hi.params["max_series"] = series_label(spec, max_s);
    hi.params["max_category"] = spec.series[max_s].points[max_i].category;
    hi.params["max_value"] = plain(spec.series[max_s].points[max_i].value);
    hi.params["series_count"] = series_count;
    out.push_back(std::move(hi));

    InsightMessage lo;
    lo.category = InsightCategory::GlobalExtrema;
    lo.variant = "min";
    lo.params["min_series"] = series_label(spec, min_s);
    lo.params["min_category"] = spec.series[min_s].points[min_i].category;
    lo.params["min_value"] = plain(spec.series[min_s].points[min_i].value);
    lo.params["series_count"] = series_count;
    out.push_back(std::move(lo));
  }

  if (n >= 2) {
    // Per-series extremes.
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
      auto m = extrema(spec.series[s]);
      m.category = InsightCategory::LocalExtrema;
      m.params["series"] = series_label(spec, s);
      m.params["mean"] = Number{round_to(mean_of(spec.series[s]), 2), -1, {}};
      out.push_back(std::move(m));
    }

    // The widest max-min gap among the series.
    std::size_t widest = 0;
    double widest_gap = -1.0;
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
      const auto [lo, hi] = std::minmax_element(
          spec.series[s].points.begin(), spec.series[s].points.end(),
          [](const DataPoint& a, const DataPoint& b) { return a.value < b.value; });
      const double gap = hi->value - lo->value;
      if (gap > widest_gap) widest_gap = gap, widest = s;
    }
    auto gap = max_difference(spec.series[widest]);
    gap.variant = "series";
    gap.params["series"] = series_label(spec, widest);
    out.push_back(std::move(gap));
  }

  if (spec.chart_type == ChartType::GroupedBar || spec.chart_type == ChartType::StackedBar) {
    const auto means = category_means(spec);
    std::size_t top = 0, bottom = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (means.points[i].value > means.points[top].value) top = i;
      if (means.points[i].value < means.points[bottom].value) bottom = i;
    }
    InsightMessage m;
    m.category = InsightCategory::DerivedValue;
    m.variant = "category";
    m.params["top_category"] = means.points[top].category;
    m.params["top_mean"] = Number{round_to(means.points[top].value, 2), -1, {}};
    m.params["bottom_category"] = means.points[bottom].category;
    m.params["bottom_mean"] = Number{round_to(means.points[bottom].value, 2), -1, {}};
    m.params["series_count"] = series_count;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace seechart
