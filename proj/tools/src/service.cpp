#include "seechart/app/service.hpp"

#include <charconv>
#include <chrono>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"

namespace seechart::app {

using nlohmann::json;

namespace {

// Request-level failures that are not pipeline errors.
struct HttpError {
  int status;
  std::string code;
  std::string message;
};

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return 400;
    default: return 422;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  send_json(res, {{"error", {{"code", code}, {"message", message}}}}, status);
}

json parse_body(const httplib::Request& req) {
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw HttpError{400, "PARSE_ERROR", "request body must be a JSON object"};
    return j;
  } catch (const json::parse_error& e) {
    throw HttpError{400, "PARSE_ERROR", e.what()};
  }
}

// A chart given inline: an object (chart JSON or Vega-Lite) or a string (SVG).
LoadedChart chart_from(const json& value) {
  if (value.is_string()) return load_chart(value.get<std::string>());
  if (value.is_object()) return load_chart(value.dump());
  throw HttpError{400, "PARSE_ERROR", "chart must be an object or SVG text"};
}

LengthLevel level_from(std::string_view text, LengthLevel fallback) {
  if (text.empty()) return fallback;
  auto l = level_from_name(text);
  if (!l) throw HttpError{400, "BAD_LEVEL", fmt::format("unknown level '{}'", text)};
  return *l;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw HttpError{400, "PARSE_ERROR", fmt::format("{} '{}' is not an unsigned integer", what, text)};
  }
  return v;
}

std::uint64_t seed_from(const json& body, const char* key, std::uint64_t fallback) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  if (it->is_number_unsigned() || (it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
    return it->get<std::uint64_t>();
  }
  if (it->is_string()) return parse_uint(it->get<std::string>(), key);
  throw HttpError{400, "BAD_SEED", "seed must be an unsigned integer"};
}

std::string string_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return {};
  if (!it->is_string()) throw HttpError{400, "PARSE_ERROR", fmt::format("{} must be a string", key)};
  return it->get<std::string>();
}

// {"indices": [0,1] | "0-1", "series": n}
std::optional<Selection> selection_from(const json& body, const ChartSpec& chart, bool required) {
  auto it = body.find("indices");
  if (it == body.end()) it = body.find("select");
  if (it == body.end() || it->is_null()) {
    if (required) throw HttpError{400, "PARSE_ERROR", "missing indices"};
    return std::nullopt;
  }
  std::vector<std::size_t> idx;
  if (it->is_string()) {
    idx = parse_index_ranges(it->get<std::string>());
  } else if (it->is_array()) {
    for (const auto& v : *it) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw Error(ErrorCode::InvalidSelection, "indices must be non-negative integers");
      }
      idx.push_back(v.get<std::size_t>());
    }
  } else {
    throw HttpError{400, "PARSE_ERROR", "indices must be an array or a range string"};
  }
  if (auto s = body.find("series"); s != body.end() && !s->is_null()) {
    if (!s->is_number_integer() || s->get<std::int64_t>() < 0 ||
        s->get<std::size_t>() >= chart.series.size()) {
      throw Error(ErrorCode::InvalidSelection, "series index out of range");
    }
    return Selection::within(chart, s->get<std::size_t>(), std::move(idx));
  }
  return Selection::across(chart, std::move(idx));
}

}  // namespace

std::string chart_hash(const ChartSpec& spec) {
  // FNV-1a over the canonical JSON
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_json(spec)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

Service::Service(TemplateRegistry registry, SeedSource seeds)
    : registry_(std::move(registry)), seeds_(std::move(seeds)) {
  if (!seeds_) {
    seeds_ = [gen = std::make_shared<std::mt19937_64>(std::random_device{}()),
              m = std::make_shared<std::mutex>()]() {
      std::lock_guard lock(*m);
      return (*gen)() >> 11;  // keep seeds exact in JSON doubles
    };
  }
  routes();
}

bool Service::listen(const std::string& host, int port) { return server_.listen(host, port); }

int Service::bind_any(const std::string& host) { return server_.bind_to_any_port(host); }

std::shared_ptr<Session> Service::session(const httplib::Request& req, bool create) {
  auto id = req.get_header_value("X-Session-Id");
  if (id.empty()) id = "default";
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it != sessions_.end()) return it->second;
  if (!create) throw HttpError{404, "UNKNOWN_SESSION", fmt::format("no session '{}'", id)};
  return sessions_.emplace(id, std::make_shared<Session>()).first->second;
}

httplib::Server::Handler Service::wrap(std::string op, Handler fn) {
  return [this, op = std::move(op), fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    const auto start = std::chrono::steady_clock::now();
    RequestLog log;
    log.session = req.get_header_value("X-Session-Id");
    try {
      fn(req, res, log);
    } catch (const HttpError& e) {
      send_error(res, e.status, e.code, e.message);
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), error_code_name(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "INTERNAL", e.what());
    }
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    spdlog::info("op={} path={} session={} chart={} status={} latency_ms={:.2f}", op, req.path,
                 log.session.empty() ? "default" : log.session, log.chart_hash.empty() ? "-" : log.chart_hash,
                 res.status, ms);
  };
}

void Service::routes() {
  auto find_chart = [this](const httplib::Request& req, const std::shared_ptr<Session>& s) -> ChartEntry& {
    const std::string id = req.matches[1];
    for (auto& c : s->charts) {
      if (c.id == id) return c;
    }
    throw HttpError{404, "UNKNOWN_CHART", fmt::format("no chart '{}' in this session", id)};
  };

  server_.Get("/v1/health", wrap("health", [](auto&, auto& res, auto&) {
    send_json(res, {{"status", "ok"}, {"version", "0.1.0"}});
  }));

  server_.Post("/v1/deconstruct", wrap("deconstruct", [](const httplib::Request& req, auto& res, RequestLog& log) {
    auto loaded = load_chart(req.body);
    log.chart_hash = chart_hash(loaded.chart);
    json j = to_json_value(loaded.chart);
    j["warnings"] = loaded.warnings;
    send_json(res, j);
  }));

  server_.Post("/v1/charts", wrap("register", [this](const httplib::Request& req, auto& res, RequestLog& log) {
    LoadedChart loaded;
    const auto first = req.body.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && req.body[first] == '{') {
      auto body = parse_body(req);
      loaded = body.contains("chart") ? chart_from(body["chart"]) : load_chart(req.body);
    } else {
      loaded = load_chart(req.body);
    }
    require_valid(loaded.chart);
    log.chart_hash = chart_hash(loaded.chart);
    auto s = session(req, true);
    std::lock_guard lock(s->mutex);
    ChartEntry entry;
    entry.id = fmt::format("c{}", s->next_id++);
    entry.chart = std::move(loaded.chart);
    entry.warnings = std::move(loaded.warnings);
    entry.seed = seeds_();
    json j = {{"id", entry.id},
              {"seed", entry.seed},
              {"chart", to_json_value(entry.chart)},
              {"warnings", entry.warnings}};
    s->charts.push_back(std::move(entry));
    send_json(res, j, 201);
  }));

  server_.Get(R"(/v1/charts/([^/]+)/title)",
              wrap("title", [this, find_chart](const httplib::Request& req, auto& res, RequestLog& log) {
                auto s = session(req, false);
                std::lock_guard lock(s->mutex);
                auto& c = find_chart(req, s);
                log.chart_hash = chart_hash(c.chart);
                send_json(res, {{"id", c.id}, {"title", realize_title(c.chart)}});
              }));

  server_.Get(R"(/v1/charts/([^/]+)/summary)",
              wrap("summary", [this, find_chart](const httplib::Request& req, auto& res, RequestLog& log) {
                auto s = session(req, false);
                std::lock_guard lock(s->mutex);
                auto& c = find_chart(req, s);
                log.chart_hash = chart_hash(c.chart);
                SummaryRequest r;
                r.level = level_from(req.get_param_value("level"), s->level);
                s->level = r.level;
                r.seed = req.has_param("seed") ? parse_uint(req.get_param_value("seed"), "seed") : c.seed;
                auto j = to_json_value(summarize(c.chart, r, registry_), r);
                j["id"] = c.id;
                send_json(res, j);
              }));

  server_.Get(R"(/v1/charts/([^/]+)/point)",
              wrap("point", [this, find_chart](const httplib::Request& req, auto& res, RequestLog& log) {
                auto s = session(req, false);
                std::lock_guard lock(s->mutex);
                auto& c = find_chart(req, s);
                log.chart_hash = chart_hash(c.chart);
                const auto series = req.has_param("series") ? parse_uint(req.get_param_value("series"), "series") : 0;
                if (!req.has_param("index")) throw HttpError{400, "PARSE_ERROR", "missing index"};
                const auto index = parse_uint(req.get_param_value("index"), "index");
                const auto text = realize_point(c.chart, series, index);
                const auto& p = c.chart.series[series].points[index];
                json j = {{"id", c.id}, {"series", series}, {"index", index}, {"category", p.category},
                          {"value", p.value}, {"text", text}};
                j["seriesName"] = c.chart.series[series].name ? json(*c.chart.series[series].name) : json(nullptr);
                send_json(res, j);
              }));

  server_.Post(R"(/v1/charts/([^/]+)/selection/summarize)",
               wrap("selection", [this, find_chart](const httplib::Request& req, auto& res, RequestLog& log) {
                 auto body = parse_body(req);
                 auto s = session(req, false);
                 std::lock_guard lock(s->mutex);
                 auto& c = find_chart(req, s);
                 log.chart_hash = chart_hash(c.chart);
                 SummaryRequest r;
                 r.level = level_from(string_field(body, "level"), s->level);
                 r.seed = seed_from(body, "seed", c.seed);
                 r.selection = selection_from(body, c.chart, true);
                 auto j = to_json_value(summarize(c.chart, r, registry_), r);
                 j["id"] = c.id;
                 j["selection"] = describe_selection(*r.selection, c.chart);
                 c.selection = r.selection;
                 send_json(res, j);
               }));

  server_.Post(R"(/v1/charts/([^/]+)/answer)",
               wrap("answer", [this, find_chart](const httplib::Request& req, auto& res, RequestLog& log) {
                 auto body = parse_body(req);
                 auto s = session(req, false);
                 std::lock_guard lock(s->mutex);
                 auto& c = find_chart(req, s);
                 log.chart_hash = chart_hash(c.chart);
                 const auto q = string_field(body, "query");
                 auto j = to_json_value(answer(c.chart, parse_query(q, c.chart)));
                 j["id"] = c.id;
                 send_json(res, j);
               }));

  // Stateless: the chart travels with the request.
  auto stateless = [this](bool selection_required) {
    return [this, selection_required](const httplib::Request& req, httplib::Response& res, RequestLog& log) {
      auto body = parse_body(req);
      if (!body.contains("chart")) throw HttpError{400, "PARSE_ERROR", "missing chart"};
      auto loaded = chart_from(body["chart"]);
      log.chart_hash = chart_hash(loaded.chart);
      SummaryRequest r;
      r.level = level_from(string_field(body, "level"), LengthLevel::Moderate);
      r.seed = body.contains("seed") ? seed_from(body, "seed", 0) : seeds_();
      r.selection = selection_from(body, loaded.chart, selection_required);
      auto j = to_json_value(summarize(loaded.chart, r, registry_), r);
      if (r.selection) j["selection"] = describe_selection(*r.selection, loaded.chart);
      j["warnings"] = loaded.warnings;
      send_json(res, j);
    };
  };
  server_.Post("/v1/summarize", wrap("summarize", stateless(false)));
  server_.Post("/v1/selection/summarize", wrap("selection", stateless(true)));
}

}  // namespace seechart::app
