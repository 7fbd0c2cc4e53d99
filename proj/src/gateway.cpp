#include "tabtext/gateway.hpp"

#include <thread>
#include <vector>

#include "tabtext/errors.hpp"

namespace tabtext {

std::string_view to_string(SchemaTag tag) {
  switch (tag) {
    case SchemaTag::plan: return "plan";
    case SchemaTag::report: return "report";
    case SchemaTag::judge: return "judge";
    case SchemaTag::schema_guess: return "schema_guess";
    case SchemaTag::kv_extraction: return "kv_extraction";
    case SchemaTag::temporal_spotting: return "temporal_spotting";
  }
  return "unknown";
}

void BackendConfig::validate() const {
  if (kind == BackendKind::http_openai_compatible && !base_url.has_value()) {
    throw ConfigError("http backend requires base_url");
  }
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be positive");
  if (retry_limit < 1) throw ConfigError("retry_limit must allow at least one attempt");
  if (fail_every_n < 0) throw ConfigError("fail_every_n must be non-negative");
}

namespace {

struct SemaphoreGuard {
  std::counting_semaphore<1 << 20>& sem;
  explicit SemaphoreGuard(std::counting_semaphore<1 << 20>& s) : sem(s) { sem.acquire(); }
  ~SemaphoreGuard() { sem.release(); }
};

bool retryable_status(int status) {
  return status == 0 || status == 429 || (status >= 500 && status < 600);
}

}  // namespace

// Defined in http_backend.cpp.
RawBackendResult http_chat_completion(const BackendConfig& config, const ChatRequest& request);

Gateway::Gateway(BackendConfig config)
    : config_(std::move(config)), in_flight_(config_.max_in_flight) {
  config_.validate();
}

Gateway::~Gateway() = default;

RawBackendResult Gateway::dispatch(const ChatRequest& request, long sequence) const {
  if (config_.fail_every_n > 0 &&
      sequence % config_.fail_every_n == config_.fail_offset % config_.fail_every_n) {
    return RawBackendResult{503, "", "injected fault"};
  }
  if (config_.kind == BackendKind::scripted) {
    return RawBackendResult{200, scripted_complete(request), ""};
  }
  return http_chat_completion(config_, request);
}

ChatResponse Gateway::complete(const ChatRequest& request) const {
  if (request.user_prompt.empty()) throw GatewayError("empty prompt");
  if (request.temperature < 0.0) throw GatewayError("temperature must be >= 0");

  const long sequence = sequence_.fetch_add(1);
  SemaphoreGuard guard(in_flight_);
  const auto started = std::chrono::steady_clock::now();

  RawBackendResult last;
  for (int attempt = 1; attempt <= config_.retry_limit; ++attempt) {
    last = dispatch(request, sequence);
    if (last.status == 200) {
      ChatResponse response;
      response.text = std::move(last.body);
      response.backend_id = config_.model_name;
      response.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      response.attempt_count = attempt;
      return response;
    }
    if (!retryable_status(last.status) || attempt == config_.retry_limit) break;
    std::this_thread::sleep_for(config_.backoff_base * (1L << (attempt - 1)));
  }
  throw GatewayError("gateway request failed after retries: status " +
                         std::to_string(last.status) +
                         (last.detail.empty() ? "" : " (" + last.detail + ")"),
                     last.status);
}

void parallel_for_indexed(std::size_t count, int workers,
                          const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const int thread_count = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (thread_count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (int t = 0; t < thread_count; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace tabtext
