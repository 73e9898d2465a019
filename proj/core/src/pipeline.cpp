#include "seechart/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"

namespace seechart {

LoadedChart load_chart(std::string_view text, InputFormat format) {
  if (format == InputFormat::Auto) {
    const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
    if (first != std::string_view::npos && text[first] == '<') {
      format = InputFormat::Svg;
    } else {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("$", e.what());
      }
      LoadedChart out;
      if (j.is_object() && j.contains("chartType")) {
        out.chart = from_json_value(j);
        out.format = InputFormat::ChartJson;
      } else {
        out.chart = ingest_vegalite_value(j);
        out.format = InputFormat::VegaLite;
      }
      return out;
    }
  }
  LoadedChart out;
  out.format = format;
  switch (format) {
    case InputFormat::Svg: {
      auto d = deconstruct_svg(text);
      out.chart = std::move(d.chart);
      out.warnings = std::move(d.warnings);
      break;
    }
    case InputFormat::ChartJson: out.chart = from_json(text); break;
    case InputFormat::VegaLite: out.chart = ingest_vegalite(text); break;
    case InputFormat::Auto: break;
  }
  return out;
}

LoadedChart load_chart_file(const std::filesystem::path& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot read file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_chart(buf.str(), format);
}

void require_valid(const ChartSpec& spec) {
  const auto report = validate(spec);
  if (report.ok()) return;
  std::string msg;
  for (const auto& v : report.violations) {
    if (!msg.empty()) msg += "; ";
    msg += fmt::format("{} at {}: {}", v.code, v.path, v.message);
  }
  throw Error(report.has("CATEGORY_MISMATCH") ? ErrorCode::CategoryMismatch : ErrorCode::InvalidChart, msg);
}

namespace {

InsightMessage selection_intro(const ChartSpec& spec, const Selection& sel, const ChartSpec& sub) {
  InsightMessage m;
  m.category = InsightCategory::IntroEncoding;
  const bool multi = sub.series.size() > 1;
  m.variant = multi ? "selection_multi" : "selection";
  m.params["selected_count"] = Number{static_cast<double>(sub.point_count()), 0, {}};
  const auto n = sub.point_count();
  m.params["selected_points"] = fmt::format("{} data point{}", n, n == 1 ? "" : "s");
  m.params["scope"] = std::string();
  if (!multi && spec.series.size() > 1) {
    m.params["scope"] = " on " + sub.series.front().name.value_or("the selected series");
  }
  m.params["ranges"] = selection_ranges(spec, sel);
  m.params["series_count"] = Number{static_cast<double>(sub.series.size()), 0, {}};
  StringList names;
  for (std::size_t s = 0; s < sub.series.size(); ++s) {
    names.push_back(sub.series[s].name.value_or(fmt::format("Series {}", s + 1)));
  }
  m.params["series_names"] = names;
  return m;
}

}  // namespace

std::vector<InsightMessage> ranked_insights(const ChartSpec& spec, const std::optional<Selection>& selection) {
  require_valid(spec);
  if (!selection) return rank(compute_insights(spec), spec.chart_type);
  const auto sub = restrict(spec, *selection);
  auto messages = compute_insights(sub);
  messages.front() = selection_intro(spec, *selection, sub);
  return rank(std::move(messages), sub.chart_type);
}

SummaryResult summarize(const ChartSpec& spec, const SummaryRequest& request, const TemplateRegistry& registry) {
  SummaryResult out;
  out.ranked = ranked_insights(spec, request.selection);
  out.plan = request.selection ? plan_selection(out.ranked, request.level) : plan(out.ranked, request.level);
  auto ctx = RealizationContext::for_chart(spec, request.seed);
  if (request.selection) ctx.chart_type = restrict(spec, *request.selection).chart_type;
  out.text = realize(out.plan, ctx, registry);
  return out;
}

nlohmann::json to_json_value(const SummaryResult& result, const SummaryRequest& request) {
  return {{"level", level_name(request.level)},
          {"seed", request.seed},
          {"summary", result.text.text},
          {"sentences", result.text.sentences}};
}

}  // namespace seechart
