#include <algorithm>

#include <gtest/gtest.h>

#include "seechart/error.hpp"
#include "seechart/insight_engine.hpp"
#include "seechart/number_format.hpp"
#include "test_support.hpp"

using namespace seechart;
namespace st = seechart::testing;

namespace {

const InsightMessage& find(const std::vector<InsightMessage>& msgs, InsightCategory c,
                           std::string_view variant) {
  auto it = std::find_if(msgs.begin(), msgs.end(),
                         [&](const auto& m) { return m.category == c && m.variant == variant; });
  if (it == msgs.end()) throw std::runtime_error("message not emitted");
  return *it;
}

ChartSpec two_lines(const std::vector<double>& a, const std::vector<double>& b) {
  ChartSpec c;
  c.chart_type = ChartType::MultiLine;
  c.x_axis = {"Year", DataType::Temporal};
  c.y_axis = {"Value", DataType::Quantitative};
  c.series.push_back(st::make_series(a));
  c.series.push_back(st::make_series(b));
  c.series[0].name = "First";
  c.series[1].name = "Second";
  return c;
}

}  // namespace

TEST(MultiSeries, HondurasOrderByMean) {
  const auto msgs = multi_series_insights(st::load_fixture("honduras"));
  const auto& order = find(msgs, InsightCategory::OrderRank, "series");
  EXPECT_EQ(order.list("series_order"), (StringList{"Services", "Agriculture", "Industry"}));
  const auto& means = std::get<std::vector<Number>>(order.params.at("means"));
  ASSERT_EQ(means.size(), 3u);
  EXPECT_EQ(format_number(means[0]), "46.56");
  EXPECT_EQ(format_number(means[1]), "33");
  EXPECT_EQ(format_number(means[2]), "20.38");
}

TEST(MultiSeries, HondurasGlobalMinimum) {
  const auto msgs = multi_series_insights(st::load_fixture("honduras"));
  const auto& lo = find(msgs, InsightCategory::GlobalExtrema, "min");
  EXPECT_EQ(lo.text("min_series"), "Industry");
  EXPECT_EQ(lo.text("min_category"), "2010");
  EXPECT_EQ(format_number(lo.number("min_value")), "18.64");
  const auto& hi = find(msgs, InsightCategory::GlobalExtrema, "max");
  EXPECT_EQ(hi.text("max_series"), "Services");
  EXPECT_EQ(hi.text("max_category"), "2016");
}

TEST(MultiSeries, PerSeriesTrends) {
  const auto msgs = multi_series_insights(st::load_fixture("honduras"));
  std::vector<std::string> names;
  for (const auto& m : msgs) {
    if (m.category == InsightCategory::TrendGlobal && m.variant == "series") names.push_back(m.text("series"));
  }
  EXPECT_EQ(names, (std::vector<std::string>{"Agriculture", "Industry", "Services"}));
  EXPECT_EQ(find(msgs, InsightCategory::TrendGlobal, "series").text("direction"), "decreasing");
}

TEST(MultiSeries, IdenticalSeriesTieGoesToFirst) {
  const auto msgs = multi_series_insights(two_lines({1, 5, 3}, {1, 5, 3}));
  EXPECT_EQ(find(msgs, InsightCategory::GlobalExtrema, "max").text("max_series"), "First");
  EXPECT_EQ(find(msgs, InsightCategory::GlobalExtrema, "min").text("min_series"), "First");
}

TEST(MultiSeries, CategoryMismatch) {
  auto c = two_lines({1, 2}, {3, 4});
  c.series[1].points[1].category = "other";
  try {
    multi_series_insights(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CategoryMismatch);
  }
}

TEST(MultiSeries, GroupedBarAddsCategoryMeans) {
  auto c = two_lines({4, 8, 1}, {2, 6, 0});
  c.chart_type = ChartType::GroupedBar;
  const auto msgs = multi_series_insights(c);
  const auto& m = find(msgs, InsightCategory::DerivedValue, "category");
  EXPECT_EQ(m.text("top_category"), "C1");
  EXPECT_EQ(m.text("bottom_category"), "C2");
}

TEST(MultiSeries, GlobalExtremaMatchOracle) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const auto c = st::random_chart(rng, ChartType::MultiLine);
    std::vector<double> all;
    for (const auto& s : c.series)
      for (const auto& p : s.points) all.push_back(p.value);
    const auto e = st::oracle_extrema(all);
    const auto n = c.point_count();
    const auto msgs = multi_series_insights(c);
    const auto& hi = find(msgs, InsightCategory::GlobalExtrema, "max");
    const auto& lo = find(msgs, InsightCategory::GlobalExtrema, "min");
    EXPECT_EQ(hi.text("max_series"), *c.series[e.max / n].name);
    EXPECT_EQ(hi.text("max_category"), c.series[e.max / n].points[e.max % n].category);
    EXPECT_EQ(lo.text("min_series"), *c.series[e.min / n].name);
    EXPECT_EQ(lo.text("min_category"), c.series[e.min / n].points[e.min % n].category);
  }
}
