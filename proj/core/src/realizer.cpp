#include "seechart/realizer.hpp"

#include <array>
#include <cctype>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seechart/error.hpp"
#include "seechart/number_format.hpp"

namespace seechart {

namespace {

constexpr std::array<std::string_view, 2> kContinuePool = {", and ", ", after that, "};

class VariantPicker {
 public:
  explicit VariantPicker(std::uint64_t seed) : gen_(seed) {}

  const Template& pick(const std::vector<Template>& pool) {
    double total = 0.0;
    for (const auto& t : pool) total += t.weight;
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53 * total;
    double acc = 0.0;
    for (const auto& t : pool) {
      acc += t.weight;
      if (u < acc) return t;
    }
    return pool.back();
  }

  std::size_t offset(std::size_t modulo) { return static_cast<std::size_t>(gen_() % modulo); }

 private:
  std::mt19937_64 gen_;
};

std::string ranked_list(const StringList& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? ", and lastly, " : ", ";
    out += fmt::format("{}. {}", i + 1, items[i]);
  }
  return out;
}

std::string render_value(const ParamValue& value, std::string_view hint) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Number>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, StringList>) {
          if (hint == "ranked") return ranked_list(v);
          return join_list(v);
        } else if constexpr (std::is_same_v<T, std::vector<Number>>) {
          std::vector<std::string> parts;
          for (const auto& n : v) parts.push_back(format_number(n));
          return join_list(parts);
        } else {
          std::vector<std::string> groups;
          for (const auto& g : v) groups.push_back(join_list(g));
          return fmt::format("{}", fmt::join(groups, "; "));
        }
      },
      value);
}

std::string apply_hint(std::string text, std::string_view hint) {
  if (hint == "plural") return pluralize(text);
  if (hint == "lower") {
    for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  } else if (hint == "cap" && !text.empty()) {
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  }
  return text;
}

std::string fill(const Template& tpl, const Params& params, const RealizationContext& ctx,
                 std::string_view key) {
  std::string out;
  std::size_t pos = 0;
  std::size_t slot_index = 0;
  while (pos < tpl.text.size()) {
    const auto open = tpl.text.find('{', pos);
    if (open == std::string::npos) {
      out.append(tpl.text, pos);
      break;
    }
    out.append(tpl.text, pos, open - pos);
    const auto close = tpl.text.find('}', open);
    const auto& slot = tpl.slots.at(slot_index++);

    std::string value;
    if (auto it = params.find(slot.name); it != params.end()) {
      value = render_value(it->second, slot.hint);
    } else if (slot.name == "x_label") {
      value = ctx.x_label;
    } else if (slot.name == "y_label") {
      value = ctx.y_label;
    } else if (slot.name == "title") {
      value = ctx.title;
    } else if (slot.name == "chart_type") {
      value = std::string(chart_type_phrase(ctx.chart_type));
    } else {
      throw Error(ErrorCode::UnboundSlot,
                  fmt::format("template for '{}' uses '{{{}}}' but the message has no such param",
                              key, slot.name));
    }
    out += apply_hint(std::move(value), slot.hint);
    pos = close + 1;
  }
  return out;
}

// Collapse runs of spaces, capitalize, and make sure the sentence terminates.
std::string tidy(std::string s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += c;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  if (out.empty()) return out;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  const char last = out.back();
  if (last != '.' && last != '?' && last != '!') {
    if (last == ',' || last == ';' || last == ':') out.pop_back();
    out += '.';
  }
  return out;
}

std::string connective_text(Connective c, std::size_t& cycle) {
  switch (c) {
    case Connective::ListSeparator: return ", ";
    case Connective::ListFinal: return ", and ";
    case Connective::Contrast: return ", however, ";
    case Connective::Final: return ", and lastly, ";
    case Connective::Continue: return std::string(kContinuePool[cycle++ % kContinuePool.size()]);
  }
  return ", ";
}

std::string render_sentence(const PlannedSentence& sentence, const RealizationContext& ctx,
                            const TemplateRegistry& registry, VariantPicker& picker) {
  switch (sentence.fusion) {
    case Fusion::None: {
      const auto& lead = sentence.lead();
      const auto& tpl = picker.pick(registry.at(sentence.template_key));
      return fill(tpl, lead.params, ctx, sentence.template_key);
    }
    case Fusion::MergedParams: {
      Params merged;
      for (const auto& m : sentence.messages) {
        for (const auto& [k, v] : m.params) merged.try_emplace(k, v);
      }
      const auto& tpl = picker.pick(registry.at(sentence.template_key));
      return fill(tpl, merged, ctx, sentence.template_key);
    }
    case Fusion::ClauseList: {
      const auto& lead_tpl = picker.pick(registry.at(sentence.template_key));
      std::size_t cycle = picker.offset(kContinuePool.size());
      std::string clauses;
      for (std::size_t i = 0; i < sentence.messages.size(); ++i) {
        const auto& m = sentence.messages[i];
        if (i > 0) {
          const auto c = i - 1 < sentence.connectives.size() ? sentence.connectives[i - 1]
                                                             : Connective::ListSeparator;
          clauses += connective_text(c, cycle);
        }
        const auto key = m.template_key();
        clauses += fill(picker.pick(registry.at(key)), m.params, ctx, key);
      }
      Params lead_params = sentence.lead().params;
      lead_params["clauses"] = clauses;
      return fill(lead_tpl, lead_params, ctx, sentence.template_key);
    }
  }
  return {};
}

}  // namespace

RealizationContext RealizationContext::for_chart(const ChartSpec& spec, std::uint64_t seed) {
  return {seed, spec.chart_type, spec.title, spec.x_axis.label, spec.y_axis.label};
}

nlohmann::json to_json_value(const SummaryText& summary) {
  return {{"sentences", summary.sentences}, {"text", summary.text}};
}

SummaryText realize(const SummaryPlan& plan, const RealizationContext& ctx,
                    const TemplateRegistry& registry) {
  VariantPicker picker(ctx.seed);
  SummaryText out;
  for (const auto& sentence : plan.sentences) {
    auto text = tidy(render_sentence(sentence, ctx, registry, picker));
    if (!out.text.empty()) out.text += ' ';
    out.text += text;
    out.sentences.push_back(std::move(text));
  }
  return out;
}

std::string realize_title(const ChartSpec& spec) {
  const auto type = chart_type_title(spec.chart_type);
  if (spec.title.empty()) return fmt::format("This is a {} chart.", type);
  return fmt::format("This is a {} chart. It shows {}", type, spec.title);
}

std::string realize_point(const ChartSpec& spec, std::size_t series_index, std::size_t point_index) {
  if (series_index >= spec.series.size() ||
      point_index >= spec.series[series_index].points.size()) {
    throw Error(ErrorCode::IndexOutOfBounds,
                fmt::format("no point at series {} index {}", series_index, point_index));
  }
  const auto& series = spec.series[series_index];
  const auto& p = series.points[point_index];
  auto sentence = fmt::format("in {} {}, the {} was, {}.", spec.x_axis.label, p.category,
                              spec.y_axis.label, format_number(p.value));
  if (is_multi_series(spec.chart_type)) {
    const auto name = series.name.value_or(fmt::format("Series {}", series_index + 1));
    return fmt::format("For {}, {}", name, sentence);
  }
  sentence[0] = 'I';
  return sentence;
}

std::string pluralize(const std::string& word) {
  if (word.empty()) return word;
  const char last = static_cast<char>(std::tolower(static_cast<unsigned char>(word.back())));
  if (last == 's') return word;
  if (last == 'y' && word.size() >= 2) {
    const char prev = static_cast<char>(std::tolower(static_cast<unsigned char>(word[word.size() - 2])));
    if (std::string_view("aeiou").find(prev) == std::string_view::npos) {
      return word.substr(0, word.size() - 1) + "ies";
    }
  }
  return word + "s";
}

std::string join_list(const std::vector<std::string>& items, std::string_view conjunction) {
  if (items.empty()) return {};
  if (items.size() == 1) return items.front();
  if (items.size() == 2) return fmt::format("{} {} {}", items[0], conjunction, items[1]);
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? fmt::format(", {} ", conjunction) : ", ";
    out += items[i];
  }
  return out;
}

}  // namespace seechart
