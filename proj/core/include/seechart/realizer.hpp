#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seechart/chart_model.hpp"
#include "seechart/summary_planner.hpp"
#include "seechart/template_registry.hpp"

namespace seechart {

struct RealizationContext {
  std::uint64_t seed = 0;
  ChartType chart_type = ChartType::Bar;
  std::string title;
  std::string x_label;
  std::string y_label;

  static RealizationContext for_chart(const ChartSpec& spec, std::uint64_t seed);
};

struct SummaryText {
  std::vector<std::string> sentences;  // one per planned sentence, for playback
  std::string text;                    // sentences joined by single spaces

  bool operator==(const SummaryText&) const = default;
};

nlohmann::json to_json_value(const SummaryText& summary);

/// Renders a plan. Template variants are drawn from one generator seeded with
/// ctx.seed, in sentence order, so equal (plan, seed, registry) give equal text.
SummaryText realize(const SummaryPlan& plan, const RealizationContext& ctx,
                    const TemplateRegistry& registry);

/// "This is a Bar chart. It shows <title>"
std::string realize_title(const ChartSpec& spec);

/// "In airlines American, the number of passengers in millions was, 203."
std::string realize_point(const ChartSpec& spec, std::size_t series_index, std::size_t point_index);

/// "Month", "Months"; "Country", "Countries".
std::string pluralize(const std::string& word);

/// "A", "A and B", "A, B, and C".
std::string join_list(const std::vector<std::string>& items, std::string_view conjunction = "and");

}  // namespace seechart
