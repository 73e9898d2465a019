#include "seechart/summary_planner.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "seechart/error.hpp"

namespace seechart {

std::string_view level_name(LengthLevel level) noexcept {
  switch (level) {
    case LengthLevel::Short: return "short";
    case LengthLevel::Moderate: return "moderate";
    case LengthLevel::Long: return "long";
  }
  return "moderate";
}

std::optional<LengthLevel> level_from_name(std::string_view name) noexcept {
  for (auto l : {LengthLevel::Short, LengthLevel::Moderate, LengthLevel::Long}) {
    if (level_name(l) == name) return l;
  }
  if (name == "1") return LengthLevel::Short;
  if (name == "2") return LengthLevel::Moderate;
  if (name == "3") return LengthLevel::Long;
  return std::nullopt;
}

std::size_t message_budget(LengthLevel level) noexcept {
  switch (level) {
    case LengthLevel::Short: return 2;
    case LengthLevel::Moderate: return 4;
    case LengthLevel::Long: return 9;
  }
  return 4;
}

std::string_view connective_name(Connective c) noexcept {
  switch (c) {
    case Connective::ListSeparator: return "list_separator";
    case Connective::ListFinal: return "list_final";
    case Connective::Continue: return "continue";
    case Connective::Contrast: return "contrast";
    case Connective::Final: return "final";
  }
  return "";
}

namespace {

bool is_selection_intro(const InsightMessage& m) {
  return m.category == InsightCategory::IntroEncoding && m.variant.starts_with("selection");
}

std::string series_of(const InsightMessage& m) {
  auto it = m.params.find("series");
  if (it == m.params.end()) return {};
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return {};
}

// Messages sharing a key land in one sentence.
std::optional<std::string> fusion_key(const InsightMessage& m) {
  switch (m.category) {
    case InsightCategory::GlobalExtrema: return std::string("global_extrema");
    case InsightCategory::TrendLocal: return "trend_local:" + series_of(m);
    case InsightCategory::TrendGlobal:
      if (m.variant == "series") return std::string("series_trend");
      return std::nullopt;
    default: return std::nullopt;
  }
}

double start_index_of(const InsightMessage& m) {
  auto it = m.params.find("start_index");
  if (it == m.params.end()) return 0.0;
  return std::get<Number>(it->second).value;
}

PlannedSentence finish(std::vector<InsightMessage> group) {
  PlannedSentence out;
  const auto& lead = group.front();
  if (group.size() == 1 && lead.category != InsightCategory::TrendLocal &&
      !(lead.category == InsightCategory::TrendGlobal && lead.variant == "series")) {
    out.template_key = lead.template_key();
    out.messages = std::move(group);
    return out;
  }

  switch (lead.category) {
    case InsightCategory::GlobalExtrema: {
      // Max first, then min.
      std::stable_sort(group.begin(), group.end(), [](const auto& a, const auto& b) {
        return a.variant == "max" && b.variant != "max";
      });
      out.fusion = Fusion::MergedParams;
      out.template_key = "GlobalExtrema";
      break;
    }
    case InsightCategory::TrendLocal: {
      // Segments are read left to right even though they were picked by size.
      std::stable_sort(group.begin(), group.end(), [](const auto& a, const auto& b) {
        return start_index_of(a) < start_index_of(b);
      });
      out.fusion = Fusion::ClauseList;
      out.template_key = "TrendLocal/lead";
      const auto k = group.size();
      for (std::size_t j = 0; j + 1 < k; ++j) {
        if (k >= 3 && j + 2 == k) {
          out.connectives.push_back(Connective::Final);
        } else if (group[j].text("direction") != group[j + 1].text("direction")) {
          out.connectives.push_back(Connective::Contrast);
        } else {
          out.connectives.push_back(Connective::Continue);
        }
      }
      break;
    }
    case InsightCategory::TrendGlobal: {
      out.fusion = Fusion::ClauseList;
      out.template_key = "TrendGlobal/series_lead";
      const auto k = group.size();
      for (std::size_t j = 0; j + 1 < k; ++j) {
        out.connectives.push_back(j + 2 == k ? Connective::ListFinal : Connective::ListSeparator);
      }
      break;
    }
    default:
      out.template_key = lead.template_key();
      break;
  }
  out.messages = std::move(group);
  return out;
}

SummaryPlan plan_from(const InsightMessage& intro, const std::vector<InsightMessage>& body,
                      LengthLevel level) {
  std::vector<std::vector<InsightMessage>> groups;
  std::map<std::string, std::size_t> by_key;
  for (const auto& m : body) {
    if (m.category == InsightCategory::IntroEncoding) continue;
    if (auto key = fusion_key(m)) {
      auto [it, inserted] = by_key.try_emplace(*key, groups.size());
      if (inserted) {
        groups.push_back({m});
      } else {
        groups[it->second].push_back(m);
      }
      continue;
    }
    groups.push_back({m});
  }

  const auto ranked_groups = std::count_if(groups.begin(), groups.end(),
                                           [](const auto& g) { return !g.front().residual; });
  if (ranked_groups >= 2) {
    std::erase_if(groups, [](const auto& g) { return g.front().residual; });
  }
  if (groups.size() > message_budget(level)) groups.resize(message_budget(level));

  SummaryPlan out;
  out.level = level;
  PlannedSentence first;
  first.messages = {intro};
  first.template_key = intro.template_key();
  out.sentences.push_back(std::move(first));
  for (auto& g : groups) out.sentences.push_back(finish(std::move(g)));
  return out;
}

}  // namespace

SummaryPlan plan(const std::vector<InsightMessage>& ranked, LengthLevel level) {
  if (ranked.empty()) throw Error(ErrorCode::EmptyPlan, "no messages to plan");
  if (ranked.front().category != InsightCategory::IntroEncoding) {
    throw Error(ErrorCode::MissingIntro, "ranked messages must begin with the intro");
  }
  return plan_from(ranked.front(), {ranked.begin() + 1, ranked.end()}, level);
}

SummaryPlan plan_selection(const std::vector<InsightMessage>& ranked, LengthLevel level) {
  if (ranked.empty()) throw Error(ErrorCode::EmptyPlan, "no messages to plan");
  auto intro = std::find_if(ranked.begin(), ranked.end(), is_selection_intro);
  if (intro == ranked.end()) {
    throw Error(ErrorCode::MissingIntro, "selection plans need a selection intro message");
  }
  return plan_from(*intro, ranked, level);
}

nlohmann::json to_json_value(const SummaryPlan& plan) {
  using nlohmann::json;
  json sentences = json::array();
  for (const auto& s : plan.sentences) {
    json messages = json::array();
    for (const auto& m : s.messages) messages.push_back(to_json_value(m));
    json connectives = json::array();
    for (auto c : s.connectives) connectives.push_back(connective_name(c));
    const char* fusion = s.fusion == Fusion::None           ? "none"
                         : s.fusion == Fusion::MergedParams ? "merged"
                                                            : "clauses";
    sentences.push_back({{"template", s.template_key},
                         {"fusion", fusion},
                         {"connectives", std::move(connectives)},
                         {"messages", std::move(messages)}});
  }
  return {{"level", level_name(plan.level)}, {"sentences", std::move(sentences)}};
}

}  // namespace seechart
