#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seechart/chart_model.hpp"
#include "seechart/insight_engine.hpp"

namespace seechart {

enum class LengthLevel { Short, Moderate, Long };

std::string_view level_name(LengthLevel level) noexcept;
std::optional<LengthLevel> level_from_name(std::string_view name) noexcept;

/// Number of ranked sentences (after the intro) each level keeps.
std::size_t message_budget(LengthLevel level) noexcept;

/// Occurrence ratios of each insight category in human-written summaries,
/// per chart type. Categories without a row fall back to that chart type's
/// "Others" weight.
class SalienceTable {
 public:
  struct Weight {
    double value = 0.0;
    bool residual = false;
  };

  static const SalienceTable& standard();

  Weight weight(ChartType type, InsightCategory category) const;
  double others(ChartType type) const;
  /// Categories with an explicit row, in descending weight order.
  std::vector<InsightCategory> listed(ChartType type) const;

 private:
  struct Row {
    InsightCategory category;
    double weight;
  };
  struct Column {
    std::vector<Row> rows;
    double others = 0.0;
  };
  const Column& column(ChartType type) const;

  Column single_bar_, single_line_, grouped_bar_, multi_line_;
};

/// Fills salience and sorts descending (stable); the intro always leads.
std::vector<InsightMessage> rank(std::vector<InsightMessage> messages, ChartType chart_type);

enum class Fusion {
  None,          // one message, one template
  MergedParams,  // paired messages share one template (global max + min)
  ClauseList,    // a lead template wrapping one clause per message
};

enum class Connective {
  ListSeparator,  // ", "
  ListFinal,      // ", and "
  Continue,       // drawn from the continuation pool
  Contrast,       // ", however, "
  Final,          // ", and lastly, "
};

std::string_view connective_name(Connective c) noexcept;

struct PlannedSentence {
  std::vector<InsightMessage> messages;
  Fusion fusion = Fusion::None;
  std::string template_key;
  std::vector<Connective> connectives;  // between clauses; size = messages - 1 for ClauseList

  const InsightMessage& lead() const { return messages.front(); }
};

struct SummaryPlan {
  LengthLevel level = LengthLevel::Moderate;
  std::vector<PlannedSentence> sentences;
};

nlohmann::json to_json_value(const SummaryPlan& plan);

/// Fuses related messages, drops residual ("Others") ones when enough
/// ranked content exists, and truncates to the level's budget.
SummaryPlan plan(const std::vector<InsightMessage>& ranked, LengthLevel level);

/// Same rules; the selection intro (IntroEncoding/selection*) replaces any
/// full-chart intro.
SummaryPlan plan_selection(const std::vector<InsightMessage>& ranked, LengthLevel level);

}  // namespace seechart
