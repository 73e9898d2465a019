#include <cmath>

#include <functional>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"
#include "test_support.hpp"

using namespace seechart;
namespace st = seechart::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("no error raised");
}

MarkRecord bar(double top, double bottom) { return {MarkKind::BarRect, {10, top, 20, bottom - top}, 0, 0}; }
MarkRecord vertex(double y) { return {MarkKind::LineVertex, {10, y, 0, 0}, 0, 0}; }

void replace_once(std::string& s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  ASSERT_NE(at, std::string::npos) << from;
  s.replace(at, from.size(), to);
}

}  // namespace

TEST(AxisScale, ScaleFromTwoTicks) {
  const auto scale = fit_axis_scale(Orientation::Y, {0, 100}, {0, 500});
  EXPECT_DOUBLE_EQ(scale.value_per_pixel, 5.0);
  EXPECT_EQ(recover_from_marks({bar(0, 40)}, scale), (std::vector<double>{200}));
}

TEST(AxisScale, HandInterpolation) {
  const auto scale = fit_axis_scale(Orientation::Y, {400, 200}, {0, 100});
  EXPECT_EQ(recover_from_marks({bar(300, 400)}, scale), (std::vector<double>{50}));
  EXPECT_EQ(recover_from_marks({bar(400, 400)}, scale), (std::vector<double>{0}));
  EXPECT_EQ(recover_from_marks({vertex(200)}, scale), (std::vector<double>{100}));
  // 195px maps to 102.5, inside the 5% allowance; 150px maps to 125
  EXPECT_EQ(recover_from_marks({vertex(195)}, scale), (std::vector<double>{103}));
  EXPECT_EQ(code_of([&] { recover_from_marks({vertex(150)}, scale); }), ErrorCode::ScaleMismatch);
}

TEST(AxisScale, NegativeBarsReadFromZero) {
  const auto scale = fit_axis_scale(Orientation::Y, {0, 100, 200}, {50, 0, -50});
  // zero line at 100px; a bar hanging to 160px is -30
  EXPECT_EQ(recover_from_marks({bar(100, 160)}, scale), (std::vector<double>{-30}));
  EXPECT_EQ(recover_from_marks({{MarkKind::StackSegment, {0, 20, 5, 40}, 0, 0}}, scale),
            (std::vector<double>{20}));
}

TEST(AxisScale, Unreadable) {
  EXPECT_EQ(code_of([] { fit_axis_scale(Orientation::Y, {0}, {1}); }), ErrorCode::UnreadableAxis);
  EXPECT_EQ(code_of([] { fit_axis_scale(Orientation::Y, {0, 1, 2}, {0, 5, 5}); }), ErrorCode::UnreadableAxis);
  EXPECT_EQ(code_of([] { fit_axis_scale(Orientation::Y, {0, 1, 2}, {0, 5, 50}); }), ErrorCode::UnreadableAxis);
}

TEST(LabelNumber, Forms) {
  EXPECT_DOUBLE_EQ(parse_label_number("1,200")->value, 1200);
  EXPECT_DOUBLE_EQ(parse_label_number("2.5k")->value, 2500);
  EXPECT_EQ(parse_label_number("2.5k")->decimals, 0);
  EXPECT_DOUBLE_EQ(parse_label_number("45 %")->value, 45);
  EXPECT_DOUBLE_EQ(parse_label_number("\xe2\x88\x92" "3.25")->value, -3.25);
  EXPECT_EQ(parse_label_number("\xe2\x88\x92" "3.25")->decimals, 2);
  EXPECT_DOUBLE_EQ(parse_label_number("$7")->value, 7);
  EXPECT_FALSE(parse_label_number("N/A"));
  EXPECT_FALSE(parse_label_number(""));
}

TEST(SvgDocument, TreeAndBoxes) {
  const auto doc = SvgChartDocument::parse(
      R"svg(<svg xmlns="http://www.w3.org/2000/svg"><g class="a b" transform="translate(10,20)">)svg"
      R"svg(<rect class="r" x="1" y="2" width="3" height="4"/><path class="p" d="M 0 0 L 10 5 h 5 v -5 Z"/></g></svg>)svg");
  const auto rects = doc.with_class("r");
  ASSERT_EQ(rects.size(), 1u);
  const auto& r = doc.at(rects[0]);
  ASSERT_TRUE(r.box);
  EXPECT_DOUBLE_EQ(r.box->x, 11);
  EXPECT_DOUBLE_EQ(r.box->y, 22);
  const auto& p = doc.at(doc.with_class("p")[0]);
  ASSERT_EQ(p.vertices.size(), 4u);
  EXPECT_DOUBLE_EQ(p.vertices[2].x, 25);
  EXPECT_DOUBLE_EQ(p.vertices[3].y, 20);
  const auto g = doc.with_class("b")[0];
  EXPECT_TRUE(doc.is_descendant(rects[0], g));
  EXPECT_EQ(doc.descendants(g, {}, "rect"), rects);
  EXPECT_THROW(SvgChartDocument::parse("<svg><g></svg>"), ParseError);
  EXPECT_THROW(SvgChartDocument::parse("<html/>"), ParseError);
}

TEST(Deconstruct, DataLabelsCopiedVerbatim) {
  const auto chart = st::single_chart(ChartType::Bar, {203, 150, 99}, {"American", "Delta", "United"});
  const auto d = deconstruct_svg(st::synthesize_svg(chart).svg);
  ASSERT_EQ(d.chart.series.size(), 1u);
  const auto& pts = d.chart.series[0].points;
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].value, 203);
  EXPECT_EQ(pts[1].value, 150);
  EXPECT_EQ(pts[2].value, 99);
  EXPECT_EQ(pts[1].category, "Delta");
  EXPECT_EQ(d.chart.chart_type, ChartType::Bar);
  EXPECT_EQ(d.chart.x_axis.label, "Item");
  EXPECT_EQ(d.chart.y_axis.label, "Amount");
  EXPECT_EQ(d.chart.title, "Test chart");
}

TEST(Deconstruct, GeometryWithoutLabels) {
  const auto chart = st::single_chart(ChartType::Bar, {203, 150, 99});
  st::SynthOptions o;
  o.data_labels = false;
  const auto synth = st::synthesize_svg(chart, o);
  const auto d = deconstruct_svg(synth.svg);
  const double tol = 0.01 * (synth.axis_max - synth.axis_min);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(d.chart.series[0].points[i].value, chart.series[0].points[i].value, tol);
  }
}

TEST(Deconstruct, UnreadableLabelDropsCategory) {
  const auto chart = st::single_chart(ChartType::Bar, {203, 150, 99});
  auto svg = st::synthesize_svg(chart).svg;
  replace_once(svg, "<tspan>150</tspan>", "<tspan>N/A</tspan>");
  const auto d = deconstruct_svg(svg);
  ASSERT_EQ(d.chart.series[0].points.size(), 2u);
  EXPECT_EQ(d.chart.series[0].points[1].value, 99);
  ASSERT_FALSE(d.warnings.empty());
  EXPECT_NE(d.warnings.front().find("N/A"), std::string::npos);
}

TEST(Deconstruct, NoChartFound) {
  EXPECT_EQ(code_of([] { deconstruct_svg(std::string_view("<svg><g class=\"other\"/></svg>")); }),
            ErrorCode::NoChartFound);
}

TEST(Deconstruct, UnsupportedSeriesKind) {
  auto svg = st::synthesize_svg(st::single_chart(ChartType::Bar, {1, 2})).svg;
  replace_once(svg, "highcharts-column-series", "highcharts-scatter-series");
  EXPECT_EQ(code_of([&] { deconstruct_svg(svg); }), ErrorCode::UnsupportedMark);
}

TEST(Deconstruct, EveryChartType) {
  std::mt19937_64 rng(17);
  for (auto type : {ChartType::Bar, ChartType::GroupedBar, ChartType::StackedBar, ChartType::Line,
                    ChartType::MultiLine, ChartType::Pie}) {
    const auto chart = st::random_chart(rng, type, 12);
    const auto d = deconstruct_svg(st::synthesize_svg(chart).svg);
    EXPECT_EQ(d.chart.chart_type, type) << chart_type_id(type);
    EXPECT_EQ(d.chart.series.size(), chart.series.size());
    EXPECT_EQ(d.chart.categories(), chart.categories());
    for (std::size_t s = 0; s < chart.series.size(); ++s) {
      EXPECT_EQ(d.chart.series[s].name, chart.series[s].name);
      for (std::size_t i = 0; i < chart.point_count(); ++i) {
        EXPECT_EQ(d.chart.series[s].points[i].value, chart.series[s].points[i].value);
      }
    }
  }
}

TEST(Deconstruct, JsonCarriesWarnings) {
  const auto d = deconstruct_svg(st::synthesize_svg(st::single_chart(ChartType::Line, {1, 2, 3})).svg);
  const auto j = to_json_value(d);
  EXPECT_EQ(j.at("chartType"), "line");
  EXPECT_TRUE(j.at("warnings").is_array());
}
