#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>

#include "seechart/pipeline.hpp"

namespace seechart::app {

struct ChartEntry {
  std::string id;
  ChartSpec chart;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;  // per-chart; echoed so clients can replay
  std::optional<Selection> selection;
};

/// In-memory only; lost on restart.
struct Session {
  std::mutex mutex;
  std::vector<ChartEntry> charts;
  LengthLevel level = LengthLevel::Moderate;
  std::size_t next_id = 1;
};

class Service {
 public:
  using SeedSource = std::function<std::uint64_t()>;

  explicit Service(TemplateRegistry registry, SeedSource seeds = {});

  httplib::Server& server() { return server_; }
  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port; returns it (for tests).
  int bind_any(const std::string& host = "127.0.0.1");
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }

 private:
  struct RequestLog {
    std::string session;
    std::string chart_hash;
  };
  using Handler = std::function<void(const httplib::Request&, httplib::Response&, RequestLog&)>;

  void routes();
  httplib::Server::Handler wrap(std::string op, Handler fn);
  std::shared_ptr<Session> session(const httplib::Request& req, bool create);

  TemplateRegistry registry_;
  SeedSource seeds_;
  httplib::Server server_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Short stable digest of a chart for log lines.
std::string chart_hash(const ChartSpec& spec);

}  // namespace seechart::app
