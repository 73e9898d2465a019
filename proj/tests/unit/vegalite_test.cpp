#include <functional>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"
#include "test_support.hpp"

using namespace seechart;
namespace st = seechart::testing;
using nlohmann::json;

namespace {

const char* kFig3 = R"({
  "mark": "bar",
  "data": {"values": [
    {"Country": "USA", "Number of Fighter Jet": 13247},
    {"Country": "Russia", "Number of Fighter Jet": 4173},
    {"Country": "China", "Number of Fighter Jet": 3285}
  ]},
  "encoding": {
    "x": {"field": "Country", "type": "nominal"},
    "y": {"field": "Number of Fighter Jet", "type": "quantitative"}
  }
})";

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("no error raised");
}

}  // namespace

TEST(VegaLite, Fig3Bar) {
  const auto c = ingest_vegalite(kFig3);
  EXPECT_EQ(c.chart_type, ChartType::Bar);
  EXPECT_EQ(c.x_axis.label, "Country");
  EXPECT_EQ(c.x_axis.data_type, DataType::Nominal);
  EXPECT_EQ(c.y_axis.label, "Number of Fighter Jet");
  EXPECT_EQ(c.y_axis.data_type, DataType::Quantitative);
  ASSERT_EQ(c.series.size(), 1u);
  EXPECT_EQ(c.series[0].points[1].category, "Russia");
  EXPECT_EQ(c.series[0].points[1].value, 4173);
  const auto j = json::parse(to_json(c));
  EXPECT_EQ(j["chartType"], "bar");
  EXPECT_EQ(j["xAxis"]["dataType"], "nominal");
}

TEST(VegaLite, LineWithColorIsMultiLine) {
  json spec = {{"mark", {{"type", "line"}}},
               {"encoding",
                {{"x", {{"field", "Year"}, {"type", "temporal"}}},
                 {"y", {{"field", "Share"}, {"type", "quantitative"}}},
                 {"color", {{"field", "Sector"}, {"type", "nominal"}}}}}};
  json values = json::array();
  for (const char* sector : {"Agriculture", "Industry", "Services"}) {
    for (int y = 2009; y <= 2011; ++y) values.push_back({{"Year", std::to_string(y)}, {"Share", y - 2000}, {"Sector", sector}});
  }
  spec["data"] = {{"values", values}};
  const auto c = ingest_vegalite_value(spec);
  EXPECT_EQ(c.chart_type, ChartType::MultiLine);
  ASSERT_EQ(c.series.size(), 3u);
  EXPECT_EQ(c.series[2].name, "Services");
  EXPECT_EQ(c.x_axis.data_type, DataType::Temporal);
}

TEST(VegaLite, BarGroupingAndStacking) {
  json spec = json::parse(kFig3);
  for (auto& v : spec["data"]["values"]) v["Kind"] = "a";
  json extra = spec["data"]["values"];
  for (auto& v : extra) {
    v["Kind"] = "b";
    spec["data"]["values"].push_back(v);
  }
  spec["encoding"]["color"] = {{"field", "Kind"}, {"type", "nominal"}};
  EXPECT_EQ(ingest_vegalite_value(spec).chart_type, ChartType::GroupedBar);
  spec["encoding"]["y"]["stack"] = "zero";
  EXPECT_EQ(ingest_vegalite_value(spec).chart_type, ChartType::StackedBar);
}

TEST(VegaLite, Errors) {
  auto spec = json::parse(kFig3);
  spec["mark"] = "point";
  EXPECT_EQ(code_of([&] { ingest_vegalite_value(spec); }), ErrorCode::UnsupportedMark);
  spec = json::parse(kFig3);
  spec.erase("data");
  EXPECT_EQ(code_of([&] { ingest_vegalite_value(spec); }), ErrorCode::MissingData);
  spec = json::parse(kFig3);
  spec["data"]["values"].push_back(spec["data"]["values"][0]);
  EXPECT_EQ(code_of([&] { ingest_vegalite_value(spec); }), ErrorCode::InconsistentSeries);
  EXPECT_THROW(ingest_vegalite("{"), ParseError);
}

TEST(VegaLite, RoundTripEveryType) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 120; ++t) {
    auto chart = st::random_chart(rng, st::random_type(rng));
    chart.title.clear();  // titles are carried but untested here
    auto back = ingest_vegalite_value(emit_vegalite(chart));
    back.title.clear();
    EXPECT_EQ(back, chart) << chart_type_id(chart.chart_type);
  }
}
