#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"
#include "seechart/number_format.hpp"

namespace seechart {

namespace {

using nlohmann::json;

struct Channel {
  std::string field;
  std::string title;
  DataType type = DataType::Nominal;
};

std::optional<Channel> channel(const json& encoding, const char* name) {
  auto it = encoding.find(name);
  if (it == encoding.end() || !it->is_object()) return std::nullopt;
  const auto path = fmt::format("$.encoding.{}", name);
  Channel c;
  if (!it->contains("field") || !(*it)["field"].is_string()) throw ParseError(path + ".field", "expected a field name");
  c.field = (*it)["field"].get<std::string>();
  c.title = c.field;
  if (auto t = it->find("title"); t != it->end() && t->is_string()) c.title = t->get<std::string>();
  if (auto a = it->find("axis"); a != it->end() && a->is_object()) {
    if (auto t = a->find("title"); t != a->end() && t->is_string()) c.title = t->get<std::string>();
  }
  if (auto t = it->find("type"); t != it->end()) {
    if (!t->is_string()) throw ParseError(path + ".type", "expected a string");
    auto dt = data_type_from_id(t->get<std::string>());
    if (!dt) throw ParseError(path + ".type", fmt::format("unknown data type '{}'", t->get<std::string>()));
    c.type = *dt;
  }
  return c;
}

std::string label_of(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return format_number(v.get<double>(), -1);
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw ParseError(path, "expected a string or number");
}

double value_of(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    if (auto n = parse_label_number(v.get<std::string>())) return n->value;
  }
  throw ParseError(path, "expected a number");
}

bool stacked_flag(const json& encoding, const char* value_channel) {
  auto it = encoding.find(value_channel);
  if (it == encoding.end() || !it->contains("stack")) return false;
  const auto& s = (*it)["stack"];
  return (s.is_boolean() && s.get<bool>()) || (s.is_string() && (s == "zero" || s == "normalize"));
}

}  // namespace

ChartSpec ingest_vegalite(std::string_view spec_text) {
  json j;
  try {
    j = json::parse(spec_text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  return ingest_vegalite_value(j);
}

ChartSpec ingest_vegalite_value(const json& spec) {
  if (!spec.is_object()) throw ParseError("$", "expected an object");
  std::string mark;
  if (auto m = spec.find("mark"); m != spec.end()) {
    if (m->is_string()) {
      mark = m->get<std::string>();
    } else if (m->is_object() && m->contains("type") && (*m)["type"].is_string()) {
      mark = (*m)["type"].get<std::string>();
    }
  }
  if (mark.empty()) throw ParseError("$.mark", "missing mark");
  if (mark != "bar" && mark != "line" && mark != "arc") {
    throw Error(ErrorCode::UnsupportedMark, fmt::format("mark '{}' is not supported", mark));
  }
  const json* values = nullptr;
  if (auto d = spec.find("data"); d != spec.end() && d->is_object()) {
    if (auto v = d->find("values"); v != d->end() && v->is_array()) values = &*v;
  }
  if (!values || values->empty()) throw Error(ErrorCode::MissingData, "spec has no inline data values");
  auto enc = spec.find("encoding");
  if (enc == spec.end() || !enc->is_object()) throw ParseError("$.encoding", "missing encoding");

  ChartSpec out;
  if (auto t = spec.find("title"); t != spec.end()) {
    if (t->is_string()) out.title = t->get<std::string>();
    else if (t->is_object() && t->contains("text") && (*t)["text"].is_string()) out.title = (*t)["text"];
  }

  std::optional<Channel> cat, val, color;
  bool stacked = false;
  if (mark == "arc") {
    val = channel(*enc, "theta");
    cat = channel(*enc, "color");
    if (!val || !cat) throw ParseError("$.encoding", "arc marks need theta and color channels");
    out.chart_type = ChartType::Pie;
  } else {
    auto x = channel(*enc, "x");
    auto y = channel(*enc, "y");
    if (!x || !y) throw ParseError("$.encoding", "expected x and y channels");
    // Horizontal bars put the measure on x.
    const bool horizontal = x->type == DataType::Quantitative && y->type != DataType::Quantitative;
    cat = horizontal ? y : x;
    val = horizontal ? x : y;
    color = channel(*enc, "color");
    if (!color) color = channel(*enc, "xOffset");
    if (!color) color = channel(*enc, "column");
    if (color && color->field == cat->field) color.reset();
    stacked = stacked_flag(*enc, horizontal ? "x" : "y");
    if (mark == "line") {
      out.chart_type = color ? ChartType::MultiLine : ChartType::Line;
    } else {
      out.chart_type = !color ? ChartType::Bar : stacked ? ChartType::StackedBar : ChartType::GroupedBar;
    }
  }
  out.x_axis = {cat->title, cat->type};
  out.y_axis = {val->title, val->type};

  std::vector<std::string> categories;
  std::vector<std::string> series_names;
  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  auto index_of = [](std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
    v.push_back(s);
    return v.size() - 1;
  };
  for (std::size_t i = 0; i < values->size(); ++i) {
    const auto& row = (*values)[i];
    const auto path = fmt::format("$.data.values[{}]", i);
    if (!row.is_object()) throw ParseError(path, "expected an object");
    auto get = [&](const std::string& field) -> const json& {
      auto it = row.find(field);
      if (it == row.end()) throw ParseError(path + "." + field, "missing field");
      return *it;
    };
    const auto c = index_of(categories, label_of(get(cat->field), path + "." + cat->field));
    std::size_t s = 0;
    if (color) s = index_of(series_names, label_of(get(color->field), path + "." + color->field));
    const double v = value_of(get(val->field), path + "." + val->field);
    if (!cells.emplace(std::pair{s, c}, v).second) {
      throw Error(ErrorCode::InconsistentSeries, fmt::format("{}: duplicate entry for '{}'", path, categories[c]));
    }
  }
  const auto n_series = color ? series_names.size() : 1;
  for (std::size_t s = 0; s < n_series; ++s) {
    Series series;
    if (color) series.name = series_names[s];
    for (std::size_t c = 0; c < categories.size(); ++c) {
      auto it = cells.find({s, c});
      if (it == cells.end()) {
        throw Error(ErrorCode::InconsistentSeries,
                    fmt::format("series '{}' has no value for '{}'", series_names[s], categories[c]));
      }
      series.points.push_back({categories[c], it->second});
    }
    out.series.push_back(std::move(series));
  }
  // One colour value is still a single series.
  if (color && n_series == 1) {
    out.chart_type = out.chart_type == ChartType::MultiLine ? ChartType::Line : ChartType::Bar;
    out.series.front().name.reset();
  }
  return out;
}

json emit_vegalite(const ChartSpec& spec) {
  const auto& xf = spec.x_axis.label;
  const auto& yf = spec.y_axis.label;
  std::string sf = "Series";
  while (sf == xf || sf == yf) sf += "_";
  const bool multi = spec.series.size() > 1;

  json values = json::array();
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    for (const auto& p : spec.series[s].points) {
      json row = {{xf, p.category}, {yf, p.value}};
      if (multi) row[sf] = spec.series[s].name.value_or(fmt::format("Series {}", s + 1));
      values.push_back(std::move(row));
    }
  }
  json out = {{"$schema", "https://vega.github.io/schema/vega-lite/v5.json"},
              {"data", {{"values", std::move(values)}}}};
  if (!spec.title.empty()) out["title"] = spec.title;
  const json x = {{"field", xf}, {"type", data_type_id(spec.x_axis.data_type)}};
  json y = {{"field", yf}, {"type", data_type_id(spec.y_axis.data_type)}};
  const json color = {{"field", sf}, {"type", "nominal"}};
  switch (spec.chart_type) {
    case ChartType::Pie:
      out["mark"] = "arc";
      out["encoding"] = {{"theta", y}, {"color", x}};
      break;
    case ChartType::Line:
    case ChartType::MultiLine:
      out["mark"] = "line";
      out["encoding"] = {{"x", x}, {"y", y}};
      if (multi) out["encoding"]["color"] = color;
      break;
    case ChartType::Bar:
    case ChartType::GroupedBar:
    case ChartType::StackedBar:
      out["mark"] = "bar";
      if (multi) y["stack"] = spec.chart_type == ChartType::StackedBar ? json("zero") : json(nullptr);
      out["encoding"] = {{"x", x}, {"y", y}};
      if (multi) {
        out["encoding"]["color"] = color;
        if (spec.chart_type == ChartType::GroupedBar) out["encoding"]["xOffset"] = color;
      }
      break;
  }
  return out;
}

}  // namespace seechart
