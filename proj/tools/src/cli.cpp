#include "seechart/app/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <iterator>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "seechart/app/service.hpp"
#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"
#include "seechart/pipeline.hpp"

namespace seechart::app {

namespace {

struct Options {
  std::string input;
  std::string format = "auto";
  std::string length = "moderate";
  std::uint64_t seed = 0;
  std::string select;
  int series = -1;
  std::string templates;
  std::string query;
  std::size_t index = 0;
  std::size_t series_index = 0;
  bool json = false;
  int port = 0;
  std::string host = "127.0.0.1";
};

InputFormat parse_format(const std::string& f) {
  if (f == "svg") return InputFormat::Svg;
  if (f == "chart") return InputFormat::ChartJson;
  if (f == "vegalite") return InputFormat::VegaLite;
  return InputFormat::Auto;
}

LoadedChart load(const Options& o) {
  if (o.input == "-") {
    std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    return load_chart(text, parse_format(o.format));
  }
  return load_chart_file(o.input, parse_format(o.format));
}

TemplateRegistry registry(const Options& o) {
  return TemplateRegistry::load(o.templates.empty() ? std::nullopt
                                                    : std::optional<std::filesystem::path>(o.templates));
}

SummaryRequest request(const Options& o, const ChartSpec& chart) {
  SummaryRequest r;
  r.level = *level_from_name(o.length);
  r.seed = o.seed;
  if (!o.select.empty()) {
    auto idx = parse_index_ranges(o.select);
    r.selection = o.series >= 0 ? Selection::within(chart, static_cast<std::size_t>(o.series), std::move(idx))
                                : Selection::across(chart, std::move(idx));
  }
  return r;
}

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "chart file (SVG, chart JSON or Vega-Lite); - for stdin")->required();
  cmd->add_option("--format", o.format, "input format")
      ->check(CLI::IsMember({"auto", "svg", "chart", "vegalite"}));
}

void add_summary_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--length,-l", o.length, "short | moderate | long")
      ->check(CLI::IsMember({"short", "moderate", "long", "1", "2", "3"}));
  cmd->add_option("--seed,-s", o.seed, "template variation seed");
  cmd->add_option("--select", o.select, "point indices, e.g. \"0-2,5\"");
  cmd->add_option("--series", o.series, "restrict --select to one series (0-based)");
  cmd->add_option("--templates", o.templates, "template pool JSON (default: $SEECHART_TEMPLATES or built-in)");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"seechart: chart deconstruction, summaries and question answering", "seechart"};
  app.require_subcommand(1);
  Options o;

  auto* deconstruct = app.add_subcommand("deconstruct", "recover chart JSON from SVG or Vega-Lite");
  add_input(deconstruct, o);

  auto* summarize_cmd = app.add_subcommand("summarize", "natural language summary");
  add_input(summarize_cmd, o);
  add_summary_flags(summarize_cmd, o);
  summarize_cmd->add_flag("--json", o.json, "print the summary as JSON");

  auto* insights = app.add_subcommand("insights", "ranked insight messages as JSON");
  add_input(insights, o);
  insights->add_option("--select", o.select, "point indices");
  insights->add_option("--series", o.series, "restrict --select to one series");

  auto* plan_cmd = app.add_subcommand("plan", "sentence plan as JSON");
  add_input(plan_cmd, o);
  add_summary_flags(plan_cmd, o);

  auto* answer_cmd = app.add_subcommand("answer", "answer a question about the chart");
  add_input(answer_cmd, o);
  answer_cmd->add_option("--query,-q", o.query, "question text")->required();
  answer_cmd->add_flag("--json", o.json, "print the answer as JSON");

  auto* title_cmd = app.add_subcommand("title", "chart title sentence");
  add_input(title_cmd, o);

  auto* point_cmd = app.add_subcommand("point", "read one data point");
  add_input(point_cmd, o);
  point_cmd->add_option("--series", o.series_index, "series (0-based)");
  point_cmd->add_option("--index", o.index, "point (0-based)")->required();

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  if (const char* env = std::getenv("SEECHART_PORT")) o.port = std::atoi(env);
  if (o.port == 0) o.port = 8080;
  serve->add_option("--port,-p", o.port, "port (default $SEECHART_PORT or 8080)");
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--templates", o.templates, "template pool JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*deconstruct) {
      const auto loaded = load(o);
      nlohmann::json j = to_json_value(loaded.chart);
      j["warnings"] = loaded.warnings;
      out << j.dump(2) << "\n";
    } else if (*summarize_cmd) {
      const auto loaded = load(o);
      const auto req = request(o, loaded.chart);
      const auto result = summarize(loaded.chart, req, registry(o));
      if (o.json) {
        out << to_json_value(result, req).dump(2) << "\n";
      } else {
        out << result.text.text << "\n";
      }
    } else if (*insights) {
      const auto loaded = load(o);
      const auto req = request(o, loaded.chart);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& m : ranked_insights(loaded.chart, req.selection)) arr.push_back(to_json_value(m));
      out << arr.dump(2) << "\n";
    } else if (*plan_cmd) {
      const auto loaded = load(o);
      const auto req = request(o, loaded.chart);
      const auto ranked = ranked_insights(loaded.chart, req.selection);
      const auto p = req.selection ? plan_selection(ranked, req.level) : plan(ranked, req.level);
      out << to_json_value(p).dump(2) << "\n";
    } else if (*answer_cmd) {
      const auto loaded = load(o);
      require_valid(loaded.chart);
      const auto a = answer(loaded.chart, parse_query(o.query, loaded.chart));
      if (o.json) {
        out << to_json_value(a).dump(2) << "\n";
      } else {
        out << a.spoken_text << "\n";
      }
    } else if (*title_cmd) {
      out << realize_title(load(o).chart) << "\n";
    } else if (*point_cmd) {
      const auto loaded = load(o);
      out << realize_point(loaded.chart, o.series_index, o.index) << "\n";
    } else if (*serve) {
      Service service(registry(o));
      spdlog::info("listening on {}:{}", o.host, o.port);
      if (!service.listen(o.host, o.port)) {
        err << fmt::format("error[BIND]: cannot listen on {}:{}\n", o.host, o.port);
        return 2;
      }
    }
  } catch (const Error& e) {
    err << fmt::format("error[{}]: {}\n", error_code_name(e.code()), e.what());
    return 2;
  }
  return 0;
}

}  // namespace seechart::app
