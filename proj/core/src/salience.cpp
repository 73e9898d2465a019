#include <algorithm>

#include "seechart/error.hpp"
#include "seechart/summary_planner.hpp"

namespace seechart {

using C = InsightCategory;

const SalienceTable& SalienceTable::standard() {
  static const SalienceTable table = [] {
    SalienceTable t;
    // Single bar. The extremes gap is the bar chart's comparison sentence, so
    // MaxDifference shares the relative-comparison ratio.
    t.single_bar_ = {{{C::ExtremaMinMax, 0.57},
                      {C::ComparisonRelative, 0.12},
                      {C::MaxDifference, 0.12},
                      {C::OrderRank, 0.08},
                      {C::TrendGlobal, 0.07},
                      {C::DerivedValue, 0.06},
                      {C::ComparisonAbsolute, 0.02}},
                     0.04};
    t.single_line_ = {{{C::TrendGlobal, 0.62},
                       {C::Shape, 0.62},
                       {C::TrendLocal, 0.62},
                       {C::ExtremaMinMax, 0.22},
                       {C::ComparisonRelative, 0.10},
                       {C::ComparisonAbsolute, 0.10},
                       {C::MaxDifference, 0.04}},
                      0.02};
    t.grouped_bar_ = {{{C::GlobalExtrema, 0.36},
                       {C::TrendGlobal, 0.18},
                       {C::ComparisonRelative, 0.13},
                       {C::MaxDifference, 0.13},
                       {C::TrendLocal, 0.07},
                       {C::OrderRank, 0.04},
                       {C::LocalExtrema, 0.02}},
                      0.07};
    t.multi_line_ = {{{C::TrendGlobal, 0.48},
                      {C::OrderRank, 0.24},
                      {C::ExtremaMinMax, 0.13},
                      {C::GlobalExtrema, 0.13},
                      {C::LocalExtrema, 0.05},
                      {C::ComparisonRelative, 0.02},
                      {C::ComparisonAbsolute, 0.02}},
                     0.08};
    return t;
  }();
  return table;
}

const SalienceTable::Column& SalienceTable::column(ChartType type) const {
  switch (type) {
    case ChartType::Bar:
    case ChartType::Pie: return single_bar_;
    case ChartType::Line: return single_line_;
    case ChartType::GroupedBar:
    case ChartType::StackedBar: return grouped_bar_;
    case ChartType::MultiLine: return multi_line_;
  }
  throw Error(ErrorCode::UnknownChartType, "no salience column for this chart type");
}

SalienceTable::Weight SalienceTable::weight(ChartType type, InsightCategory category) const {
  const auto& col = column(type);
  for (const auto& row : col.rows) {
    if (row.category == category) return {row.weight, false};
  }
  return {col.others, true};
}

double SalienceTable::others(ChartType type) const { return column(type).others; }

std::vector<InsightCategory> SalienceTable::listed(ChartType type) const {
  std::vector<InsightCategory> out;
  for (const auto& row : column(type).rows) out.push_back(row.category);
  return out;
}

std::vector<InsightMessage> rank(std::vector<InsightMessage> messages, ChartType chart_type) {
  const auto& table = SalienceTable::standard();
  for (auto& m : messages) {
    if (m.category == InsightCategory::IntroEncoding) {
      m.salience = 1.0;
      m.residual = false;
      continue;
    }
    const auto w = table.weight(chart_type, m.category);
    m.salience = w.value;
    m.residual = w.residual;
  }
  std::stable_sort(messages.begin(), messages.end(),
                   [](const InsightMessage& a, const InsightMessage& b) {
                     const bool ai = a.category == InsightCategory::IntroEncoding;
                     const bool bi = b.category == InsightCategory::IntroEncoding;
                     if (ai != bi) return ai;
                     return a.salience > b.salience;
                   });
  return messages;
}

}  // namespace seechart
