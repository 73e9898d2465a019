#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seechart/chart_model.hpp"
#include "seechart/insight_engine.hpp"
#include "seechart/query_engine.hpp"
#include "seechart/realizer.hpp"
#include "seechart/summary_planner.hpp"
#include "seechart/template_registry.hpp"

namespace seechart {

enum class InputFormat { Auto, Svg, ChartJson, VegaLite };

struct LoadedChart {
  ChartSpec chart;
  std::vector<std::string> warnings;
  InputFormat format = InputFormat::ChartJson;
};

/// Auto: '<' starts SVG, an object with "chartType" is chart JSON, anything
/// else is read as Vega-Lite.
LoadedChart load_chart(std::string_view text, InputFormat format = InputFormat::Auto);
LoadedChart load_chart_file(const std::filesystem::path& path, InputFormat format = InputFormat::Auto);

/// Throws Error(InvalidChart) listing the violations.
void require_valid(const ChartSpec& spec);

struct SummaryRequest {
  LengthLevel level = LengthLevel::Moderate;
  std::uint64_t seed = 0;
  std::optional<Selection> selection;
};

struct SummaryResult {
  std::vector<InsightMessage> ranked;
  SummaryPlan plan;
  SummaryText text;
};

/// Ranked messages for the chart, or for the selected sub-chart led by the
/// selection intro.
std::vector<InsightMessage> ranked_insights(const ChartSpec& spec,
                                            const std::optional<Selection>& selection = std::nullopt);

SummaryResult summarize(const ChartSpec& spec, const SummaryRequest& request,
                        const TemplateRegistry& registry);

nlohmann::json to_json_value(const SummaryResult& result, const SummaryRequest& request);

}  // namespace seechart
