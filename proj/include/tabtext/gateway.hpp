#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

namespace tabtext {

// temporal_spotting backs the optional gateway-first temporal extraction
// mode; its output always passes back through the rule-based canonicalizer.
enum class SchemaTag { plan, report, judge, schema_guess, kv_extraction, temporal_spotting };

std::string_view to_string(SchemaTag tag);

struct ChatRequest {
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.0;
  int max_output_tokens = 2048;
  SchemaTag response_schema_tag = SchemaTag::report;
};

struct ChatResponse {
  std::string text;
  std::string backend_id;
  std::chrono::milliseconds latency{0};
  int attempt_count = 1;
};

enum class BackendKind { http_openai_compatible, scripted };

struct BackendConfig {
  BackendKind kind = BackendKind::scripted;
  std::optional<std::string> base_url;  // required for the http kind
  std::string model_name = "scripted";
  int max_in_flight = 4;
  int retry_limit = 3;  // total attempt budget per request
  std::chrono::milliseconds backoff_base{250};
  std::string api_key_env = "TABTEXT_API_KEY";
  // Deterministic fault injection (scripted backend only): every n-th
  // request, counted across the gateway's lifetime, fails on all attempts.
  int fail_every_n = 0;
  int fail_offset = 0;

  void validate() const;
};

/// Thread-safe front door to a chat-completion backend. Enforces the
/// max_in_flight window and the retry/backoff policy; the scripted backend
/// is a pure function of the request, so repeated calls are byte-identical.
struct RawBackendResult {
  int status = 0;      // 0 = transport failure
  std::string body;    // response text on 200
  std::string detail;  // error detail otherwise
};

class Gateway {
 public:
  explicit Gateway(BackendConfig config);
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  ChatResponse complete(const ChatRequest& request) const;

  const BackendConfig& config() const { return config_; }

 private:
  RawBackendResult dispatch(const ChatRequest& request, long sequence) const;

  BackendConfig config_;
  mutable std::counting_semaphore<1 << 20> in_flight_;
  mutable std::atomic<long> sequence_{0};
};

/// Deterministic offline completion used by the scripted backend; exposed
/// for tests. Throws ContractError on an unknown tag or a malformed
/// embedded data block.
std::string scripted_complete(const ChatRequest& request);

/// Run fn(0..count-1) on up to `workers` threads. fn must not throw.
void parallel_for_indexed(std::size_t count, int workers,
                          const std::function<void(std::size_t)>& fn);

}  // namespace tabtext
