// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "seechart/app/service.hpp"
#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"
#include "seechart/insight_engine.hpp"
#include "seechart/number_format.hpp"
#include "seechart/pipeline.hpp"
#include "seechart/query_engine.hpp"
#include "test_support.hpp"

using namespace seechart;
using nlohmann::json;
namespace t = seechart::testing;

namespace {

// Pinned tolerances.
constexpr double kSubaruRuntimeLimitS = 1.0;
constexpr double kScaleInvarianceTol = 1e-12;
constexpr double kGeometryTolFraction = 0.01;  // of the y tick range
constexpr double kP95LimitS = 1.0;
constexpr std::size_t kLatencyPoints = 1000;
constexpr int kLatencyRequests = 40;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(std::string why) {
    if (pass) detail = std::move(why);
    pass = false;
  }
  void check(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

int failures = 0;

void report(const char* name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  if (!o.pass) ++failures;
  std::printf("%s %s%s%s\n", o.pass ? "PASS" : "FAIL", name, o.detail.empty() ? "" : " -- ",
              o.detail.c_str());
  std::fflush(stdout);
}

bool contains(const std::string& hay, std::string_view needle) { return hay.find(needle) != std::string::npos; }

SummaryResult run(const ChartSpec& chart, LengthLevel level, std::uint64_t seed,
                  std::optional<Selection> sel = std::nullopt) {
  return summarize(chart, {level, seed, std::move(sel)}, TemplateRegistry::builtin());
}

// --- 1 -----------------------------------------------------------------------

void subaru(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto chart = t::load_fixture("subaru");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto moderate = run(chart, LengthLevel::Moderate, seed).text.text;
    for (const char* s : {"829", "Sep 2018", "44", "Aug 2017", "785"}) {
      o.check(contains(moderate, s), fmt::format("seed {} moderate lacks '{}'", seed, s));
    }
    const auto longer = run(chart, LengthLevel::Long, seed).text.text;
    for (const char* s : {"829", "Sep 2018", "44", "Aug 2017", "785", "252.4", "10601"}) {
      o.check(contains(longer, s), fmt::format("seed {} long lacks '{}'", seed, s));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < kSubaruRuntimeLimitS, fmt::format("took {:.3f}s", secs));
}

// --- 2 -----------------------------------------------------------------------

// Occurrence ratios per chart type, with the category each table row covers.
struct PaperColumn {
  std::map<InsightCategory, double> rows;
  double others;
};

std::map<ChartType, PaperColumn> paper_table() {
  using C = InsightCategory;
  std::map<ChartType, PaperColumn> t;
  t[ChartType::Bar] = {{{C::ExtremaMinMax, .57},
                        {C::ComparisonRelative, .12},
                        {C::MaxDifference, .12},  // the extremes gap is the bar comparison sentence
                        {C::OrderRank, .08},
                        {C::TrendGlobal, .07},
                        {C::DerivedValue, .06},
                        {C::ComparisonAbsolute, .02}},
                       .04};
  t[ChartType::Line] = {{{C::TrendGlobal, .62},
                         {C::TrendLocal, .62},
                         {C::Shape, .62},
                         {C::ExtremaMinMax, .22},
                         {C::ComparisonRelative, .10},
                         {C::ComparisonAbsolute, .10},
                         {C::MaxDifference, .04}},
                        .02};
  t[ChartType::GroupedBar] = {{{C::GlobalExtrema, .36},
                               {C::TrendGlobal, .18},
                               {C::ComparisonRelative, .13},
                               {C::MaxDifference, .13},
                               {C::TrendLocal, .07},
                               {C::OrderRank, .04},
                               {C::LocalExtrema, .02}},
                              .07};
  t[ChartType::MultiLine] = {{{C::TrendGlobal, .48},
                              {C::OrderRank, .24},
                              {C::ExtremaMinMax, .13},
                              {C::GlobalExtrema, .13},
                              {C::LocalExtrema, .05},
                              {C::ComparisonRelative, .02},
                              {C::ComparisonAbsolute, .02}},
                             .08};
  return t;
}

void table1(Outcome& o) {
  std::mt19937_64 rng(1);
  for (const auto& [type, col] : paper_table()) {
    // every category the engine can produce for this type
    std::set<InsightCategory> producible;
    for (int i = 0; i < 300; ++i) {
      for (const auto& m : compute_insights(t::random_chart(rng, type, 20))) {
        if (m.category != InsightCategory::IntroEncoding) producible.insert(m.category);
      }
    }
    auto ratio = [&](InsightCategory c) {
      auto it = col.rows.find(c);
      return it == col.rows.end() ? col.others : it->second;
    };
    // feed them in ascending ratio so nothing is already in place
    std::vector<InsightCategory> input(producible.begin(), producible.end());
    std::stable_sort(input.begin(), input.end(), [&](auto a, auto b) { return ratio(a) < ratio(b); });
    std::vector<InsightCategory> expected = input;
    std::stable_sort(expected.begin(), expected.end(), [&](auto a, auto b) { return ratio(a) > ratio(b); });

    std::vector<InsightMessage> msgs;
    for (auto c : input) {
      InsightMessage m;
      m.category = c;
      msgs.push_back(m);
    }
    std::vector<InsightCategory> got;
    for (const auto& m : rank(msgs, type)) got.push_back(m.category);
    o.check(got == expected, fmt::format("{} order differs", chart_type_id(type)));
  }
  // the two orderings called out explicitly
  InsightMessage e, c, r, tg, orank;
  e.category = InsightCategory::ExtremaMinMax;
  c.category = InsightCategory::ComparisonRelative;
  r.category = InsightCategory::OrderRank;
  auto bar = rank({r, c, e}, ChartType::Bar);
  o.check(bar[0].category == e.category && bar[1].category == c.category && bar[2].category == r.category,
          "bar: Extrema, ComparisonRelative, OrderRank");
  tg.category = InsightCategory::TrendGlobal;
  orank.category = InsightCategory::OrderRank;
  auto ml = rank({orank, tg}, ChartType::MultiLine);
  o.check(ml[0].category == tg.category, "multi-line: TrendGlobal first");
}

// --- 3 -----------------------------------------------------------------------

std::vector<std::string> plan_messages(const SummaryPlan& p) {
  std::vector<std::string> out;
  for (const auto& s : p.sentences)
    for (const auto& m : s.messages) out.push_back(to_json_value(m).dump());
  std::sort(out.begin(), out.end());
  return out;
}

void length_monotonicity(Outcome& o) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto chart = t::random_chart(rng, t::random_type(rng));
    const auto ranked = ranked_insights(chart);
    const auto s = plan(ranked, LengthLevel::Short);
    const auto m = plan(ranked, LengthLevel::Moderate);
    const auto l = plan(ranked, LengthLevel::Long);
    const auto ns = s.sentences.size(), nm = m.sentences.size(), nl = l.sentences.size();
    o.check(ns <= nm && nm <= nl, fmt::format("chart {}: counts {} {} {}", i, ns, nm, nl));
    o.check(ns <= 4, fmt::format("chart {}: short has {}", i, ns));
    const auto ms = plan_messages(s), mm = plan_messages(m), ml = plan_messages(l);
    o.check(std::includes(mm.begin(), mm.end(), ms.begin(), ms.end()), fmt::format("chart {}: short not in moderate", i));
    o.check(std::includes(ml.begin(), ml.end(), mm.begin(), mm.end()), fmt::format("chart {}: moderate not in long", i));
    // realized sentence counts follow the plan
    for (auto level : {LengthLevel::Short, LengthLevel::Moderate, LengthLevel::Long}) {
      const auto r = run(chart, level, i);
      o.check(r.text.sentences.size() == r.plan.sentences.size(), "realized count differs from plan");
    }
  }
}

// --- 4 -----------------------------------------------------------------------

void oracle_sweep(Outcome& o) {
  std::vector<std::string> cats;
  for (int i = 0; i < 8; ++i) cats.push_back(fmt::format("K{}", i));
  std::size_t mismatches = 0, checked = 0;
  std::string first;
  auto miss = [&](const std::string& what, const std::vector<double>& v) {
    if (mismatches++ == 0) first = fmt::format("{} on [{}]", what, fmt::join(v, ","));
  };
  for (std::size_t len = 1; len <= 8; ++len) {
    std::vector<int> digits(len, 0);
    Series s;
    for (std::size_t i = 0; i < len; ++i) s.points.push_back({cats[i], 0.0});
    std::vector<double> v(len);
    while (true) {
      for (std::size_t i = 0; i < len; ++i) s.points[i].value = v[i] = digits[i];
      ++checked;

      const auto e = t::oracle_extrema(v);
      const auto ext = extrema(s);
      if (ext.text("max_category") != cats[e.max] || ext.text("min_category") != cats[e.min] ||
          ext.number("max_value").value != v[e.max] || ext.number("min_value").value != v[e.min]) {
        miss("extrema", v);
      }
      if (len >= 2 && max_difference(s).number("difference").value != t::oracle_max_difference(v)) {
        miss("max_difference", v);
      }
      const auto order = t::oracle_order(v, len);
      const auto ranked = order_rank(s, len).list("ranked_categories");
      for (std::size_t i = 0; i < len; ++i) {
        if (ranked[i] != cats[order[i]]) {
          miss("order_rank", v);
          break;
        }
      }
      const auto d = derived_values(s);
      const double sum = t::oracle_sum(v);
      if (d.number("sum").value != sum ||
          std::abs(d.number("mean").value - round_to(sum / static_cast<double>(len), 1)) > 1e-9) {
        miss("derived_values", v);
      }
      const auto groups = t::oracle_same_groups(v);
      const auto same = same_values(s);
      if (groups.empty() != !same.has_value()) {
        miss("same_values presence", v);
      } else if (same) {
        std::vector<StringList> want;
        for (const auto& g : groups) {
          StringList names;
          for (auto i : g) names.push_back(cats[i]);
          want.push_back(names);
        }
        if (std::get<std::vector<StringList>>(same->params.at("groups")) != want) miss("same_values groups", v);
      }

      std::size_t i = 0;
      while (i < len && ++digits[i] > 5) digits[i++] = 0;
      if (i == len) break;
    }
  }
  o.check(mismatches == 0, fmt::format("{} mismatches of {}; first {}", mismatches, checked, first));
  if (o.pass) o.detail = fmt::format("{} series", checked);
}

// --- 5 -----------------------------------------------------------------------

void slope_normalization(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1000, 1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<double> v(n);
    const bool flat = trial % 50 == 0;
    for (auto& x : v) x = flat ? 17.0 : std::round(u(rng) * 100) / 100;
    const auto base = compute_changes(t::make_series(v));
    const auto want = t::oracle_changes(v);
    bool any_change = false;
    double mx = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      o.check(base[i] >= 0.0 && base[i] <= 1.0, "output outside [0,1]");
      o.check(std::abs(base[i] - want[i]) <= kScaleInvarianceTol, "differs from oracle");
      any_change |= v[i + 1] != v[i];
      mx = std::max(mx, base[i]);
    }
    if (any_change) o.check(mx == 1.0, fmt::format("trial {}: max {} != 1", trial, mx));
    for (double c : {0.5, 3.0, 100.0}) {
      auto w = v;
      for (auto& x : w) x *= c;
      const auto scaled = compute_changes(t::make_series(w));
      for (std::size_t i = 0; i < base.size(); ++i) {
        o.check(std::abs(scaled[i] - base[i]) <= kScaleInvarianceTol,
                fmt::format("trial {} c={} step {}: {} vs {}", trial, c, i, scaled[i], base[i]));
      }
    }
  }
}

// --- 6 -----------------------------------------------------------------------

void percent_format(Outcome& o) {
  const auto segs = segment_trends(t::make_series({5.0, 3.7, 14.2, 9.0}));
  const auto it = std::find_if(segs.begin(), segs.end(), [](const auto& s) { return s.start_index == 1; });
  o.check(it != segs.end() && it->end_index == 2, "no 3.7 -> 14.2 segment");
  if (it != segs.end()) o.check(format_percent(it->percent_change) == "283.78%", format_percent(it->percent_change));
  const auto text = run(t::load_fixture("nepal"), LengthLevel::Long, 0).text.text;
  o.check(contains(text, "increased by 283.78%"), "Nepal long summary lacks the 1985-1986 clause");
}

// --- 7 -----------------------------------------------------------------------

void determinism(Outcome& o) {
  const auto chart = t::load_fixture("subaru");
  const auto p = plan(ranked_insights(chart), LengthLevel::Long);
  const auto ctx = RealizationContext::for_chart(chart, 42);
  const auto first = realize(p, ctx, TemplateRegistry::builtin());
  for (int i = 0; i < 100; ++i) {
    o.check(realize(p, ctx, TemplateRegistry::builtin()).text == first.text, "repeat differs");
  }
  const std::vector<std::string> variants = {
      "This is a bar chart representing 42 Months in the x axis and Units sold in the y axis.",
      "This bar chart has 42 columns on the x axis representing Month, and Units sold in each Month on the y axis.",
      "This is a bar chart. It shows Units sold for 42 number of Months."};
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    seen.insert(realize(p, RealizationContext::for_chart(chart, seed), TemplateRegistry::builtin()).sentences[0]);
  }
  for (std::size_t i = 0; i < variants.size(); ++i) {
    o.check(seen.count(variants[i]) == 1, fmt::format("intro variant {} never drawn", i + 1));
  }
}

// --- 8 -----------------------------------------------------------------------

void query_answer(Outcome& o) {
  const auto chart = t::load_fixture("honduras");
  const auto a = answer(chart, parse_query("What is the value of 2011?", chart));
  const std::string want =
      "We have found multiple values for Year 2011. These are, Agriculture is 36.62, Industry is 19.36, "
      "Services is 44.02.";
  o.check(a.spoken_text == want, "got: " + a.spoken_text);
}

// --- 9 -----------------------------------------------------------------------

std::set<std::string> fact_values(const std::vector<InsightMessage>& msgs) {
  std::set<std::string> out;
  for (const auto& m : msgs) {
    if (m.category == InsightCategory::IntroEncoding) continue;
    auto j = to_json_value(m);
    j.erase("salience");
    out.insert(j.dump());
  }
  return out;
}

void selection(Outcome& o) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const auto chart = t::random_chart(rng, t::random_type(rng));
    std::vector<std::size_t> all(chart.point_count());
    std::iota(all.begin(), all.end(), 0);
    const auto full = fact_values(ranked_insights(chart));
    const auto sel = fact_values(ranked_insights(chart, Selection::across(chart, all)));
    o.check(full == sel, fmt::format("chart {}: all-point selection changes the facts", i));
  }
  const auto chart = t::load_fixture("honduras");
  const std::set<std::string> chosen = {"2012", "2013", "2014"};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (auto level : {LengthLevel::Short, LengthLevel::Moderate, LengthLevel::Long}) {
      const auto text = run(chart, level, seed, Selection::across(chart, {3, 4, 5})).text.text;
      for (const auto& cat : chart.categories()) {
        if (!chosen.count(cat)) o.check(!contains(text, cat), fmt::format("seed {} mentions {}", seed, cat));
      }
      o.check(contains(text, "2012"), "selection summary does not name 2012");
    }
  }
}

// --- 10 ----------------------------------------------------------------------

void deconstruction(Outcome& o) {
  std::mt19937_64 rng(10);
  const ChartType types[] = {ChartType::Bar, ChartType::GroupedBar, ChartType::StackedBar,
                             ChartType::Line, ChartType::MultiLine};
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const auto type = types[i % 5];
    const auto chart = t::random_chart(rng, type, 25);
    // labelled
    const auto labelled = deconstruct_svg(t::synthesize_svg(chart).svg).chart;
    o.check(labelled.chart_type == type, fmt::format("chart {}: type", i));
    o.check(labelled.categories() == chart.categories(), fmt::format("chart {}: categories", i));
    o.check(labelled.series == chart.series, fmt::format("chart {}: labelled values not exact", i));
    // geometry only
    t::SynthOptions opts;
    opts.data_labels = false;
    const auto synth = t::synthesize_svg(chart, opts);
    const auto geo = deconstruct_svg(synth.svg).chart;
    const double tol = kGeometryTolFraction * (synth.axis_max - synth.axis_min);
    if (geo.series.size() != chart.series.size() || geo.point_count() != chart.point_count()) {
      o.fail(fmt::format("chart {}: geometry shape", i));
      continue;
    }
    for (std::size_t s = 0; s < chart.series.size(); ++s) {
      for (std::size_t p = 0; p < chart.point_count(); ++p) {
        const double err = std::abs(geo.series[s].points[p].value - chart.series[s].points[p].value);
        worst = std::max(worst, err / (synth.axis_max - synth.axis_min));
        o.check(err <= tol, fmt::format("chart {} s{} p{}: error {} > {}", i, s, p, err, tol));
      }
    }
  }
  const auto vl = ingest_vegalite(R"({"mark": "bar",
    "data": {"values": [{"Country": "USA", "Number of Fighter Jet": 13247},
                        {"Country": "Russia", "Number of Fighter Jet": 4173}]},
    "encoding": {"x": {"field": "Country", "type": "nominal"},
                 "y": {"field": "Number of Fighter Jet", "type": "quantitative"}}})");
  o.check(vl.x_axis.label == "Country" && vl.y_axis.label == "Number of Fighter Jet", "Vega-Lite axis labels");
  o.check(vl.x_axis.data_type == DataType::Nominal && vl.y_axis.data_type == DataType::Quantitative,
          "Vega-Lite data types");
  const auto j = json::parse(to_json(vl));
  o.check(j["xAxis"]["dataType"] == "nominal" && j["yAxis"]["dataType"] == "quantitative", "chart JSON types");
  if (o.pass) o.detail = fmt::format("worst geometry error {:.4f}% of range", worst * 100);
}

// --- 11 ----------------------------------------------------------------------

void service_contract(Outcome& o) {
  spdlog::set_level(spdlog::level::warn);
  app::Service service(TemplateRegistry::builtin());
  const int port = service.bind_any();
  std::thread server([&] { service.listen_after_bind(); });
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(30);
  for (int i = 0; i < 100 && !client.Get("/v1/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  for (const char* name : {"subaru", "nepal", "honduras"}) {
    const auto path = (t::data_dir() / (std::string(name) + ".json")).string();
    for (const char* level : {"short", "moderate", "long"}) {
      for (int seed : {0, 7, 12345}) {
        int status = -1;
        auto cli = t::run_command(fmt::format("{} summarize {} --length {} --seed {}", SEECHART_CLI, path, level, seed),
                                  &status);
        o.check(status == 0, "CLI exit status");
        if (!cli.empty() && cli.back() == '\n') cli.pop_back();
        const json body = {{"chart", to_json_value(t::load_fixture(name))}, {"level", level}, {"seed", seed}};
        auto r = client.Post("/v1/summarize", body.dump(), "application/json");
        if (!r || r->status != 200) {
          o.fail(fmt::format("{} {} {}: HTTP failure", name, level, seed));
          continue;
        }
        o.check(json::parse(r->body).at("summary").get<std::string>() == cli,
                fmt::format("{} {} seed {}: CLI and HTTP differ", name, level, seed));
      }
    }
  }

  std::mt19937_64 rng(11);
  std::vector<double> latencies;
  for (int i = 0; i < kLatencyRequests; ++i) {
    const auto type = i % 2 ? ChartType::Line : ChartType::Bar;
    std::uniform_real_distribution<double> u(0, 5000);
    std::vector<double> values(kLatencyPoints);
    for (auto& v : values) v = std::round(u(rng) * 100) / 100;
    const auto chart = t::single_chart(type, values);
    const json body = {{"chart", to_json_value(chart)}, {"level", "long"}, {"seed", i}};
    const auto payload = body.dump();
    const auto start = std::chrono::steady_clock::now();
    auto r = client.Post("/v1/summarize", payload, "application/json");
    latencies.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    o.check(r && r->status == 200, "latency request failed");
  }
  std::sort(latencies.begin(), latencies.end());
  const double p95 = latencies[static_cast<std::size_t>(std::ceil(0.95 * latencies.size())) - 1];
  o.check(p95 < kP95LimitS, fmt::format("p95 {:.3f}s", p95));
  if (o.pass) o.detail = fmt::format("p95 {:.1f} ms at {} points", p95 * 1000, kLatencyPoints);

  service.stop();
  server.join();
}

}  // namespace

int main() {
  report("subaru-fixture-reproduction", subaru);
  report("table1-ranking-conformance", table1);
  report("length-monotonicity", length_monotonicity);
  report("oracle-equivalence-sweep", oracle_sweep);
  report("slope-normalization", slope_normalization);
  report("percent-change-formatting", percent_format);
  report("realization-determinism-and-variation", determinism);
  report("query-answering", query_answer);
  report("selection-pipeline", selection);
  report("deconstruction-round-trip", deconstruction);
  report("service-contract", service_contract);
  return failures;
}
