#include "seechart/template_registry.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seechart/error.hpp"

namespace seechart {

namespace {

using SlotSet = std::set<std::string, std::less<>>;

SlotSet with(std::initializer_list<const char*> base, std::initializer_list<const char*> extra = {}) {
  SlotSet out;
  for (auto* s : base) out.insert(s);
  for (auto* s : extra) out.insert(s);
  return out;
}

const std::map<std::string, SlotSet, std::less<>>& schema() {
  static const std::map<std::string, SlotSet, std::less<>> table = [] {
    const auto intro = {"point_count", "series_count", "series_names", "categories"};
    const auto extrema = {"max_category", "max_value", "min_category", "min_value", "series"};
    const auto trend = {"direction",  "direction_past", "direction_ing", "start_category",
                        "end_category", "first_value",  "last_value",    "change",
                        "point_count",  "series"};
    const auto order = {"ranked_categories", "ranked_values", "top_category", "top_value",
                        "following",         "min_category",  "min_value",    "k",
                        "series"};
    const auto derived = {"mean", "sum", "count", "series"};
    std::map<std::string, SlotSet, std::less<>> t;
    t["IntroEncoding"] = with(intro);
    t["IntroEncoding/line"] = with(intro);
    t["IntroEncoding/pie"] = with(intro);
    t["IntroEncoding/multi_line"] = with(intro);
    t["IntroEncoding/grouped"] = with(intro);
    t["IntroEncoding/selection"] = with(intro, {"selected_count", "selected_points", "scope", "ranges"});
    t["IntroEncoding/selection_multi"] = with(intro, {"selected_count", "selected_points", "scope", "ranges"});
    t["ExtremaMinMax"] = with(extrema);
    t["ExtremaMinMax/single"] = with({"category", "value"});
    t["ExtremaMinMax/pie"] = with(extrema, {"max_share", "min_share"});
    t["MaxDifference"] = with(extrema, {"difference"});
    t["MaxDifference/series"] = with(extrema, {"difference"});
    t["OrderRank"] = with(order);
    t["OrderRank/pie"] = with(order, {"ranked_shares"});
    t["OrderRank/series"] = with({"series_order", "means", "top_series", "top_mean",
                                  "bottom_series", "bottom_mean", "series_count"});
    t["TrendGlobal"] = with(trend);
    t["TrendGlobal/combined"] = with(trend, {"series_count"});
    t["TrendGlobal/series"] = with(trend);
    t["TrendGlobal/series_lead"] = with({"clauses", "series"});
    t["TrendLocal"] = with({"direction", "direction_past", "start_category", "end_category",
                            "start_index", "end_index", "change", "peak_change", "series"});
    t["TrendLocal/lead"] = with({"clauses", "series"});
    t["Shape"] = with({"shape", "reversals", "series"});
    t["DerivedValue"] = with(derived);
    t["DerivedValue/pie"] = with(derived);
    t["DerivedValue/category"] = with({"top_category", "top_mean", "bottom_category",
                                       "bottom_mean", "series_count"});
    t["SameValue"] = with({"groups", "categories", "value", "group_count", "series"});
    t["GlobalExtrema"] = with({"max_series", "max_category", "max_value", "min_series",
                               "min_category", "min_value", "series_count"});
    t["GlobalExtrema/max"] = with({"max_series", "max_category", "max_value", "series_count"});
    t["GlobalExtrema/min"] = with({"min_series", "min_category", "min_value", "series_count"});
    t["LocalExtrema"] = with(extrema, {"mean"});
    return t;
  }();
  return table;
}

std::size_t minimum_variants(std::string_view key) {
  if (key.starts_with("IntroEncoding") || key.starts_with("ExtremaMinMax")) return 3;
  return 2;
}

}  // namespace

const std::set<std::string, std::less<>>& context_slots() {
  static const SlotSet slots = {"x_label", "y_label", "title", "chart_type"};
  return slots;
}

const std::set<std::string, std::less<>>* declared_slots(std::string_view key) {
  auto it = schema().find(key);
  return it == schema().end() ? nullptr : &it->second;
}

Template Template::parse(std::string text, double weight) {
  Template t;
  t.weight = weight;
  for (std::size_t pos = 0; pos < text.size();) {
    const auto open = text.find('{', pos);
    if (open == std::string::npos) break;
    const auto close = text.find('}', open);
    if (close == std::string::npos) {
      throw Error(ErrorCode::InvalidTemplates, fmt::format("unclosed slot in '{}'", text));
    }
    std::string body = text.substr(open + 1, close - open - 1);
    Slot slot;
    if (auto bar = body.find('|'); bar != std::string::npos) {
      slot.name = body.substr(0, bar);
      slot.hint = body.substr(bar + 1);
    } else {
      slot.name = std::move(body);
    }
    if (slot.name.empty()) {
      throw Error(ErrorCode::InvalidTemplates, fmt::format("empty slot in '{}'", text));
    }
    t.slots.push_back(std::move(slot));
    pos = close + 1;
  }
  t.text = std::move(text);
  return t;
}

TemplateRegistry TemplateRegistry::from_json(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("$", std::string("malformed template JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("$", "template file must be an object");

  TemplateRegistry reg;
  for (const auto& [key, pool] : root.items()) {
    const auto path = "$." + key;
    if (!pool.is_array()) throw ParseError(path, "expected an array of templates");
    std::vector<Template> templates;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto& entry = pool[i];
      const auto epath = fmt::format("{}[{}]", path, i);
      if (!entry.is_object() || !entry.contains("text") || !entry["text"].is_string()) {
        throw ParseError(epath, "expected {\"text\": string, \"weight\": number}");
      }
      double weight = 1.0;
      if (auto it = entry.find("weight"); it != entry.end()) {
        if (!it->is_number()) throw ParseError(epath + ".weight", "expected a number");
        weight = it->get<double>();
      }
      templates.push_back(Template::parse(entry["text"].get<std::string>(), weight));
    }
    reg.pools_[key] = std::move(templates);
  }

  const auto problems = reg.validate();
  if (!problems.empty()) {
    throw Error(ErrorCode::InvalidTemplates, fmt::format("{} template problem(s); first: {}",
                                                         problems.size(), problems.front()));
  }
  return reg;
}

TemplateRegistry TemplateRegistry::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open template file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

TemplateRegistry TemplateRegistry::builtin() {
  static const TemplateRegistry reg = from_json(default_template_json());
  return reg;
}

TemplateRegistry TemplateRegistry::load(const std::optional<std::filesystem::path>& path) {
  if (path) return from_file(*path);
  if (const char* env = std::getenv("SEECHART_TEMPLATES"); env != nullptr && *env != '\0') {
    return from_file(env);
  }
  return builtin();
}

const std::vector<Template>& TemplateRegistry::at(std::string_view key) const {
  auto it = pools_.find(key);
  if (it == pools_.end() || it->second.empty()) {
    throw Error(ErrorCode::MissingTemplate, fmt::format("no templates for '{}'", key));
  }
  return it->second;
}

std::vector<std::string> TemplateRegistry::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : pools_) out.push_back(k);
  return out;
}

std::vector<std::string> TemplateRegistry::validate() const {
  std::vector<std::string> problems;
  for (const auto& [key, pool] : pools_) {
    const auto* declared = declared_slots(key);
    if (declared == nullptr) {
      problems.push_back(fmt::format("'{}' is not a known message kind", key));
      continue;
    }
    if (pool.size() < minimum_variants(key)) {
      problems.push_back(fmt::format("'{}' has {} template(s), needs at least {}", key,
                                     pool.size(), minimum_variants(key)));
    }
    for (const auto& t : pool) {
      if (!(t.weight > 0.0)) problems.push_back(fmt::format("'{}': weight must be positive", key));
      for (const auto& slot : t.slots) {
        if (!declared->contains(slot.name) && !context_slots().contains(slot.name)) {
          problems.push_back(fmt::format("'{}': slot '{}' is not declared", key, slot.name));
        }
      }
    }
  }
  return problems;
}

std::vector<std::string> TemplateRegistry::missing_slots(const InsightMessage& message) const {
  std::vector<std::string> out;
  auto it = pools_.find(message.template_key());
  if (it == pools_.end()) return {"<no templates for " + message.template_key() + ">"};
  for (const auto& t : it->second) {
    for (const auto& slot : t.slots) {
      if (message.has(slot.name) || context_slots().contains(slot.name)) continue;
      if (std::find(out.begin(), out.end(), slot.name) == out.end()) out.push_back(slot.name);
    }
  }
  return out;
}

}  // namespace seechart
