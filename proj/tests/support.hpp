#pragma once

// Shared scaffolding for the unit suites: table builders and a canned-response
// chat endpoint for exercising the lenient parsers and retry paths.

#include <atomic>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "tabtext/gateway.hpp"
#include "tabtext/table.hpp"

namespace tabtext::testing {

inline TableSpec make_table(const std::string& table_id,
                            const std::vector<std::string>& columns,
                            const std::vector<std::vector<const char*>>& rows) {
  TableSpec table;
  table.table_id = table_id;
  for (const auto& column : columns) table.columns.push_back({column, ColumnKind::unknown});
  int row_id = 0;
  for (const auto& row : rows) {
    RowRecord record;
    record.row_id = row_id++;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const char* cell = i < row.size() ? row[i] : nullptr;
      record.cells[columns[i]] =
          cell == nullptr ? std::nullopt : std::optional<std::string>(cell);
    }
    table.rows.push_back(std::move(record));
  }
  return table;
}

inline BackendConfig scripted_config() {
  BackendConfig cfg;
  cfg.backoff_base = std::chrono::milliseconds(1);
  return cfg;
}

/// Serves a fixed sequence of chat-completion bodies; the last entry repeats.
struct CannedServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> hits{0};
  std::vector<std::string> replies;

  explicit CannedServer(std::vector<std::string> canned) : replies(std::move(canned)) {
    server.Post("/v1/chat/completions", [this](const httplib::Request&, httplib::Response& res) {
      const std::size_t hit = static_cast<std::size_t>(hits++);
      const std::string& content =
          replies[hit < replies.size() ? hit : replies.size() - 1];
      nlohmann::json body = {
          {"choices",
           {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
      res.set_content(body.dump(), "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~CannedServer() {
    server.stop();
    thread.join();
  }

  BackendConfig config() const {
    BackendConfig cfg;
    cfg.kind = BackendKind::http_openai_compatible;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    cfg.model_name = "canned";
    cfg.backoff_base = std::chrono::milliseconds(1);
    return cfg;
  }
};

}  // namespace tabtext::testing
