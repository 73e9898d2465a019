#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "seechart/insight_engine.hpp"

namespace seechart {

struct Slot {
  std::string name;
  std::string hint;  // plural | lower | cap | ranked; empty for plain
};

/// Template text with `{slot}` or `{slot|hint}` placeholders.
struct Template {
  std::string text;
  double weight = 1.0;
  std::vector<Slot> slots;

  static Template parse(std::string text, double weight = 1.0);
};

/// Slots every template may use regardless of message: chart-level context.
const std::set<std::string, std::less<>>& context_slots();

/// Params a message kind ("OrderRank/series") carries, or nullptr when unknown.
const std::set<std::string, std::less<>>* declared_slots(std::string_view key);

/// The compiled-in default pool (JSON text).
std::string_view default_template_json();

class TemplateRegistry {
 public:
  /// JSON map {key: [{"text": "...", "weight": 1}]}. Throws ParseError on bad
  /// JSON and Error(InvalidTemplates) when validate() reports problems.
  static TemplateRegistry from_json(std::string_view text);
  static TemplateRegistry from_file(const std::filesystem::path& path);
  static TemplateRegistry builtin();
  /// `path` when given, else $SEECHART_TEMPLATES when set, else builtin().
  static TemplateRegistry load(const std::optional<std::filesystem::path>& path);

  /// Throws Error(MissingTemplate).
  const std::vector<Template>& at(std::string_view key) const;
  bool contains(std::string_view key) const { return pools_.find(key) != pools_.end(); }
  std::vector<std::string> keys() const;

  /// Human-readable problems: undeclared slots, too few variants, bad weights.
  std::vector<std::string> validate() const;

  /// Slots referenced by the message's templates that it does not provide.
  std::vector<std::string> missing_slots(const InsightMessage& message) const;

 private:
  std::map<std::string, std::vector<Template>, std::less<>> pools_;
};

}  // namespace seechart
