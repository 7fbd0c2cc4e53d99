#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tabtext/errors.hpp"
#include "tabtext/gateway.hpp"
#include "tabtext/prompts.hpp"

using namespace tabtext;

namespace {

ChatRequest report_request(const nlohmann::json& row) {
  ChatRequest request;
  request.user_prompt = attach_data_block(
      "Write the report.",
      {{"report_type", "demo"}, {"columns", {"a", "b"}}, {"row", row}});
  request.response_schema_tag = SchemaTag::report;
  return request;
}

// Local OpenAI-style endpoint with programmable behavior.
struct MockServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> hits{0};
  std::atomic<int> in_flight{0};
  std::atomic<int> max_in_flight_seen{0};
  int fail_first_n = 0;  // respond 429 to the first n hits
  std::chrono::milliseconds handler_delay{0};

  MockServer() {
    server.Post("/v1/chat/completions", [this](const httplib::Request&, httplib::Response& res) {
      const int now = ++in_flight;
      int seen = max_in_flight_seen.load();
      while (now > seen && !max_in_flight_seen.compare_exchange_weak(seen, now)) {
      }
      if (handler_delay.count() > 0) std::this_thread::sleep_for(handler_delay);
      const int hit = ++hits;
      if (hit <= fail_first_n) {
        res.status = 429;
        res.set_content("slow down", "text/plain");
      } else {
        nlohmann::json body = {
            {"choices",
             {{{"message", {{"role", "assistant"}, {"content", "pong " + std::to_string(hit)}}}}}}};
        res.set_content(body.dump(), "application/json");
      }
      --in_flight;
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~MockServer() {
    server.stop();
    thread.join();
  }

  BackendConfig config() const {
    BackendConfig cfg;
    cfg.kind = BackendKind::http_openai_compatible;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    cfg.model_name = "mock";
    cfg.retry_limit = 3;
    cfg.backoff_base = std::chrono::milliseconds(1);
    return cfg;
  }
};

}  // namespace

TEST_CASE("scripted backend renders the report template") {
  Gateway gateway(BackendConfig{});
  const ChatResponse response = gateway.complete(report_request({{"a", "1"}, {"b", nullptr}}));
  CHECK(response.text ==
        "The a of this record is 1. The b of this record is unavailable.");
  CHECK(response.attempt_count == 1);
  CHECK(response.backend_id == "scripted");
}

TEST_CASE("scripted backend is a pure function of the request") {
  Gateway gateway(BackendConfig{});
  const ChatRequest request = report_request({{"a", "1"}});
  const std::string first = gateway.complete(request).text;
  const std::string second = gateway.complete(request).text;
  CHECK(first == second);
}

TEST_CASE("default temperature is zero") {
  CHECK(ChatRequest{}.temperature == 0.0);
}

TEST_CASE("scripted backend rejects an unknown schema tag") {
  ChatRequest request;
  request.user_prompt = attach_data_block("x", {{"row", nlohmann::json::object()}});
  request.response_schema_tag = static_cast<SchemaTag>(99);
  CHECK_THROWS_AS(scripted_complete(request), ContractError);
}

TEST_CASE("scripted backend rejects prompts without a data block") {
  ChatRequest request;
  request.user_prompt = "no payload here";
  request.response_schema_tag = SchemaTag::report;
  CHECK_THROWS_AS(scripted_complete(request), ContractError);
}

TEST_CASE("empty prompt is refused") {
  Gateway gateway(BackendConfig{});
  CHECK_THROWS_AS(gateway.complete(ChatRequest{}), GatewayError);
}

TEST_CASE("http backend retries through 429s and reports the attempt count") {
  MockServer mock;
  mock.fail_first_n = 2;
  Gateway gateway(mock.config());
  const ChatResponse response = gateway.complete(report_request({{"a", "1"}}));
  CHECK(response.attempt_count == 3);
  CHECK(response.text == "pong 3");
}

TEST_CASE("exhausted retries raise a gateway error carrying the last status") {
  MockServer mock;
  mock.fail_first_n = 1000;
  BackendConfig cfg = mock.config();
  cfg.retry_limit = 2;
  Gateway gateway(cfg);
  try {
    gateway.complete(report_request({{"a", "1"}}));
    FAIL("expected GatewayError");
  } catch (const GatewayError& e) {
    CHECK(e.last_status() == 429);
  }
  CHECK(mock.hits.load() == 2);  // attempt budget respected
}

TEST_CASE("in-flight requests never exceed max_in_flight") {
  MockServer mock;
  mock.handler_delay = std::chrono::milliseconds(15);
  BackendConfig cfg = mock.config();
  cfg.max_in_flight = 3;
  Gateway gateway(cfg);

  parallel_for_indexed(16, 16, [&](std::size_t) {
    (void)gateway.complete(report_request({{"a", "1"}}));
  });
  CHECK(mock.hits.load() == 16);
  CHECK(mock.max_in_flight_seen.load() <= 3);
  CHECK(mock.max_in_flight_seen.load() >= 2);  // it does overlap
}

TEST_CASE("deterministic fault injection fails the selected request on every attempt") {
  BackendConfig cfg;
  cfg.fail_every_n = 2;  // requests 0, 2, 4, ... fail
  cfg.retry_limit = 3;
  cfg.backoff_base = std::chrono::milliseconds(1);
  Gateway gateway(cfg);
  const ChatRequest request = report_request({{"a", "1"}});
  CHECK_THROWS_AS(gateway.complete(request), GatewayError);  // request 0
  CHECK_NOTHROW(gateway.complete(request));                  // request 1
  CHECK_THROWS_AS(gateway.complete(request), GatewayError);  // request 2
}

TEST_CASE("http config requires a base_url") {
  BackendConfig cfg;
  cfg.kind = BackendKind::http_openai_compatible;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
