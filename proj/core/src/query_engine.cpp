#include "seechart/query_engine.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seechart/error.hpp"
#include "seechart/insight_engine.hpp"
#include "seechart/number_format.hpp"
#include "seechart/realizer.hpp"

namespace seechart {

// ---------------------------------------------------------------------------
// Selection

Selection Selection::across(const ChartSpec& spec, std::vector<std::size_t> indices) {
  Selection sel;
  sel.mode = SelectionMode::CrossSeries;
  sel.indices.assign(std::max<std::size_t>(spec.series.size(), 1), indices);
  return sel;
}

Selection Selection::within(const ChartSpec& spec, std::size_t series, std::vector<std::size_t> indices) {
  Selection sel;
  sel.mode = SelectionMode::SingleSeries;
  sel.indices.resize(std::max(spec.series.size(), series + 1));
  sel.indices[series] = std::move(indices);
  return sel;
}

std::size_t Selection::total() const {
  std::size_t n = 0;
  for (const auto& s : indices) n += s.size();
  return n;
}

std::vector<std::size_t> parse_index_ranges(std::string_view text) {
  std::set<std::size_t> out;
  auto number = [&](std::string_view token) {
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::InvalidSelection, fmt::format("bad index '{}'", token));
    }
    return v;
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto part = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (part.find_first_not_of(' ') == std::string_view::npos) continue;
    if (auto dash = part.find('-'); dash != std::string_view::npos) {
      const auto lo = number(part.substr(0, dash));
      const auto hi = number(part.substr(dash + 1));
      if (hi < lo) throw Error(ErrorCode::InvalidSelection, fmt::format("range {}-{} is reversed", lo, hi));
      for (auto i = lo; i <= hi; ++i) out.insert(i);
    } else {
      out.insert(number(part));
    }
  }
  return {out.begin(), out.end()};
}

void check_selection(const ChartSpec& spec, const Selection& sel) {
  if (sel.indices.size() != spec.series.size()) {
    throw Error(ErrorCode::InvalidSelection,
                fmt::format("selection covers {} series, chart has {}", sel.indices.size(),
                            spec.series.size()));
  }
  if (sel.total() == 0) throw Error(ErrorCode::EmptySelection, "no points selected");
  std::size_t non_empty = 0;
  for (std::size_t s = 0; s < sel.indices.size(); ++s) {
    const auto& idx = sel.indices[s];
    if (!idx.empty()) ++non_empty;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= spec.series[s].points.size()) {
        throw Error(ErrorCode::InvalidSelection,
                    fmt::format("index {} is out of range for series {}", idx[i], s));
      }
      if (i > 0 && idx[i] <= idx[i - 1]) {
        throw Error(ErrorCode::InvalidSelection, "indices must be strictly increasing");
      }
    }
  }
  if (sel.mode == SelectionMode::CrossSeries) {
    for (const auto& idx : sel.indices) {
      if (idx != sel.indices.front()) {
        throw Error(ErrorCode::InvalidSelection,
                    "cross-series selections must pick the same points on every series");
      }
    }
  } else if (non_empty != 1) {
    throw Error(ErrorCode::InvalidSelection, "single-series selections must use exactly one series");
  }
}

ChartSpec restrict(const ChartSpec& spec, const Selection& sel) {
  check_selection(spec, sel);
  ChartSpec out = spec;
  out.series.clear();
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    if (sel.indices[s].empty()) continue;
    Series sub;
    sub.name = spec.series[s].name;
    for (auto i : sel.indices[s]) sub.points.push_back(spec.series[s].points[i]);
    out.series.push_back(std::move(sub));
  }
  if (out.series.size() == 1 && is_multi_series(spec.chart_type)) {
    out.chart_type = spec.chart_type == ChartType::MultiLine ? ChartType::Line : ChartType::Bar;
  }
  return out;
}

namespace {

std::size_t reference_series(const Selection& sel) {
  for (std::size_t s = 0; s < sel.indices.size(); ++s) {
    if (!sel.indices[s].empty()) return s;
  }
  return 0;
}

}  // namespace

std::vector<std::string> selection_ranges(const ChartSpec& spec, const Selection& sel) {
  check_selection(spec, sel);
  const auto s = reference_series(sel);
  const auto& idx = sel.indices[s];
  const auto& pts = spec.series[s].points;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && idx[j + 1] == idx[j] + 1) ++j;
    if (j == i) {
      out.push_back(pts[idx[i]].category);
    } else {
      out.push_back(fmt::format("{} to {}", pts[idx[i]].category, pts[idx[j]].category));
    }
    i = j + 1;
  }
  return out;
}

std::string describe_selection(const Selection& sel, const ChartSpec& spec) {
  const auto ranges = selection_ranges(spec, sel);
  std::string joined;
  if (ranges.size() == 2) {
    joined = ranges[0] + ", and " + ranges[1];
  } else {
    joined = join_list(ranges);
  }
  const auto s = reference_series(sel);
  const bool one = sel.indices[s].size() == 1;
  auto sentence = fmt::format("{} {} {} selected.", spec.x_axis.label, joined, one ? "is" : "are");
  if (sel.mode == SelectionMode::SingleSeries && spec.series.size() > 1) {
    const auto name = spec.series[s].name.value_or(fmt::format("Series {}", s + 1));
    return fmt::format("For {}, {}", name, sentence);
  }
  return sentence;
}

// ---------------------------------------------------------------------------
// Queries

std::string_view intent_name(QueryIntent intent) noexcept {
  switch (intent) {
    case QueryIntent::Max: return "max";
    case QueryIntent::Min: return "min";
    case QueryIntent::Trend: return "trend";
    case QueryIntent::Average: return "average";
    case QueryIntent::Sum: return "sum";
    case QueryIntent::AxisLabel: return "axis_label";
    case QueryIntent::ValueLookup: return "value_lookup";
    case QueryIntent::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    while (!current.empty() && (current.back() == '.' || current.back() == '-')) current.pop_back();
    while (!current.empty() && (current.front() == '.' || current.front() == '-')) current.erase(0, 1);
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c) || raw == '-' || raw == '.' || c >= 0x80) {
      current += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

struct Keyword {
  std::string_view token;
  QueryIntent intent;
};

// Scanned in intent order; the first intent with any matching token wins.
constexpr Keyword kKeywords[] = {
    {"maximum", QueryIntent::Max},       {"max", QueryIntent::Max},
    {"highest", QueryIntent::Max},       {"largest", QueryIntent::Max},
    {"biggest", QueryIntent::Max},       {"peak", QueryIntent::Max},
    {"minimum", QueryIntent::Min},       {"min", QueryIntent::Min},
    {"lowest", QueryIntent::Min},        {"smallest", QueryIntent::Min},
    {"least", QueryIntent::Min},         {"trend", QueryIntent::Trend},
    {"trends", QueryIntent::Trend},      {"trending", QueryIntent::Trend},
    {"average", QueryIntent::Average},   {"mean", QueryIntent::Average},
    {"avg", QueryIntent::Average},       {"total", QueryIntent::Sum},
    {"sum", QueryIntent::Sum},           {"x-axis", QueryIntent::AxisLabel},
    {"y-axis", QueryIntent::AxisLabel},  {"axis", QueryIntent::AxisLabel},
    {"axes", QueryIntent::AxisLabel},    {"labels", QueryIntent::AxisLabel},
};

std::string fold(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Query parse_query(std::string_view text, const std::vector<std::string>& labels) {
  Query q;
  q.raw_text = std::string(text);
  const auto tokens = tokenize(text);

  for (auto intent : {QueryIntent::Max, QueryIntent::Min, QueryIntent::Trend, QueryIntent::Average,
                      QueryIntent::Sum, QueryIntent::AxisLabel}) {
    for (const auto& kw : kKeywords) {
      if (kw.intent != intent) continue;
      if (std::find(tokens.begin(), tokens.end(), kw.token) != tokens.end()) {
        q.intent = intent;
        return q;
      }
    }
  }

  // Whole query equal to a label, else the longest label found as a token run.
  const auto folded = fold(text);
  std::size_t best_len = 0;
  for (const auto& label : labels) {
    if (fold(label) == folded && !folded.empty()) {
      q.intent = QueryIntent::ValueLookup;
      q.lookup_key = label;
      return q;
    }
  }
  for (const auto& label : labels) {
    const auto label_tokens = tokenize(label);
    if (label_tokens.empty() || label_tokens.size() > tokens.size()) continue;
    if (label_tokens.size() <= best_len) continue;
    auto it = std::search(tokens.begin(), tokens.end(), label_tokens.begin(), label_tokens.end());
    if (it != tokens.end()) {
      best_len = label_tokens.size();
      q.intent = QueryIntent::ValueLookup;
      q.lookup_key = label;
    }
  }
  // "value of 1850" names a key even when the chart lacks it; answer() reports it missing.
  if (q.intent == QueryIntent::Unknown) {
    static const std::regex value_of(R"(\bvalues?\s+(?:of|for|in|at)\s+(.+?)[\s?.!]*$)", std::regex::icase);
    std::smatch m;
    const std::string raw(text);
    if (std::regex_search(raw, m, value_of)) {
      q.intent = QueryIntent::ValueLookup;
      q.lookup_key = m[1].str();
    }
  }
  return q;
}

Query parse_query(std::string_view text, const ChartSpec& spec) {
  return parse_query(text, spec.categories());
}

nlohmann::json to_json_value(const Answer& a) {
  using nlohmann::json;
  json items = json::array();
  for (const auto& item : a.items) {
    json j = {{"category", item.category}, {"value", item.value}};
    j["series"] = item.series ? json(*item.series) : json(nullptr);
    if (!item.detail.empty()) j["detail"] = item.detail;
    items.push_back(std::move(j));
  }
  const char* status = a.status == AnswerStatus::Found      ? "found"
                       : a.status == AnswerStatus::NotFound ? "not_found"
                                                            : "reprompt";
  return {{"intent", intent_name(a.intent)},
          {"status", status},
          {"items", std::move(items)},
          {"spokenText", a.spoken_text}};
}

namespace {

std::string series_label(const ChartSpec& spec, std::size_t s) {
  return spec.series[s].name.value_or(fmt::format("Series {}", s + 1));
}

Answer reprompt(const ChartSpec& spec, QueryIntent intent, std::string prefix) {
  Answer a;
  a.intent = intent;
  a.status = AnswerStatus::Reprompt;
  const auto cats = spec.categories();
  a.spoken_text = prefix +
                  " Please ask again. You can ask about the maximum, minimum, average, total, or "
                  "trend, the axis labels, or the value of a " +
                  spec.x_axis.label + (cats.empty() ? std::string(".") : " such as " + cats.front() + ".");
  return a;
}

Answer extreme_answer(const ChartSpec& spec, QueryIntent intent) {
  const bool want_max = intent == QueryIntent::Max;
  std::size_t best_s = 0;
  InsightMessage best = extrema(spec.series.front());
  for (std::size_t s = 1; s < spec.series.size(); ++s) {
    auto m = extrema(spec.series[s]);
    const auto key = want_max ? "max_value" : "min_value";
    const double v = m.number(key).value;
    const double b = best.number(key).value;
    if (want_max ? v > b : v < b) best = std::move(m), best_s = s;
  }
  const auto prefix = want_max ? "max" : "min";
  AnswerItem item;
  item.category = best.text(std::string(prefix) + "_category");
  item.value = best.number(std::string(prefix) + "_value").value;
  if (spec.series.size() > 1) item.series = series_label(spec, best_s);

  Answer a;
  a.intent = intent;
  a.spoken_text = fmt::format("The {} {} is {} at {} {}", want_max ? "maximum" : "minimum",
                              spec.y_axis.label, format_number(item.value), spec.x_axis.label,
                              item.category);
  a.spoken_text += item.series ? fmt::format(", by {}.", *item.series) : std::string(".");
  a.items.push_back(std::move(item));
  return a;
}

Answer aggregate_answer(const ChartSpec& spec, QueryIntent intent) {
  const bool avg = intent == QueryIntent::Average;
  Answer a;
  a.intent = intent;
  std::vector<std::string> parts;
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto m = derived_values(spec.series[s]);
    double sum = 0.0;
    for (const auto& p : spec.series[s].points) sum += p.value;
    const double mean = sum / static_cast<double>(spec.series[s].points.size());
    AnswerItem item;
    item.value = avg ? round_to(mean, 2) : m.number("sum").value;
    const auto shown = avg ? format_number(mean) : format_number(m.number("sum"));
    if (spec.series.size() > 1) {
      item.series = series_label(spec, s);
      parts.push_back(fmt::format("{} for {}", shown, *item.series));
    } else {
      parts.push_back(shown);
    }
    a.items.push_back(std::move(item));
  }
  a.spoken_text = fmt::format("The {} {} is {}.", avg ? "average" : "total", spec.y_axis.label,
                              join_list(parts));
  return a;
}

Answer trend_answer(const ChartSpec& spec) {
  if (spec.point_count() < 2) {
    return reprompt(spec, QueryIntent::Trend, "There is only one data point, so there is no trend.");
  }
  Answer a;
  a.intent = QueryIntent::Trend;
  std::vector<std::string> clauses;
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto m = global_trend(spec.series[s]);
    AnswerItem item;
    item.detail = m.text("direction");
    item.category = m.text("end_category");
    item.value = m.number("last_value").value;
    if (spec.series.size() > 1) {
      item.series = series_label(spec, s);
      clauses.push_back(fmt::format("{} is {}", *item.series, m.text("direction_ing")));
    } else {
      a.spoken_text = fmt::format("Overall, the {} has {} from {} {} to {}.", spec.y_axis.label,
                                  m.text("direction_past"), spec.x_axis.label,
                                  m.text("start_category"), m.text("end_category"));
    }
    a.items.push_back(std::move(item));
  }
  if (spec.series.size() > 1) {
    a.spoken_text = fmt::format("Overall, {}, throughout the {}.", join_list(clauses), spec.x_axis.label);
  }
  return a;
}

Answer lookup_answer(const ChartSpec& spec, const Query& query) {
  const auto key = fold(query.lookup_key);
  const auto cats = spec.categories();
  auto it = std::find_if(cats.begin(), cats.end(), [&](const auto& c) { return fold(c) == key; });
  Answer a;
  a.intent = QueryIntent::ValueLookup;
  if (key.empty() || it == cats.end()) {
    a.status = AnswerStatus::NotFound;
    a.spoken_text = fmt::format("Sorry, {} {} was not found in this chart. Please ask again.",
                                spec.x_axis.label, query.lookup_key);
    return a;
  }
  const auto index = static_cast<std::size_t>(it - cats.begin());
  const auto& label = *it;
  if (spec.series.size() == 1) {
    const double v = spec.series.front().points[index].value;
    a.items.push_back({std::nullopt, label, v, {}});
    a.spoken_text = fmt::format("The {} for {} {} is {}.", spec.y_axis.label, spec.x_axis.label,
                                label, format_number(v));
    return a;
  }
  std::vector<std::string> parts;
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const double v = spec.series[s].points[index].value;
    a.items.push_back({series_label(spec, s), label, v, {}});
    parts.push_back(fmt::format("{} is {}", series_label(spec, s), format_number(v)));
  }
  a.spoken_text = fmt::format("We have found multiple values for {} {}. These are, {}.",
                              spec.x_axis.label, label, fmt::join(parts, ", "));
  return a;
}

}  // namespace

Answer answer(const ChartSpec& spec, const Query& query) {
  if (spec.series.empty() || spec.point_count() == 0) {
    return reprompt(spec, query.intent, "This chart has no data.");
  }
  switch (query.intent) {
    case QueryIntent::Max:
    case QueryIntent::Min: return extreme_answer(spec, query.intent);
    case QueryIntent::Average:
    case QueryIntent::Sum: return aggregate_answer(spec, query.intent);
    case QueryIntent::Trend: return trend_answer(spec);
    case QueryIntent::AxisLabel: {
      Answer a;
      a.intent = QueryIntent::AxisLabel;
      a.spoken_text = fmt::format("The x axis represents {} and the y axis represents {}.",
                                  spec.x_axis.label, spec.y_axis.label);
      return a;
    }
    case QueryIntent::ValueLookup: return lookup_answer(spec, query);
    case QueryIntent::Unknown: break;
  }
  return reprompt(spec, QueryIntent::Unknown, "Sorry, I could not find an answer to that.");
}

}  // namespace seechart
