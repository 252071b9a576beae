#include "semcom/llm_backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace semcom::llm {

using nlohmann::json;

namespace {
constexpr const char* kChatCompletionsPath = "/v1/chat/completions";
constexpr const char* kSystemPrompt =
    "You are the transmitter of a receiver-centric semantic communication system for "
    "surveillance videos. Follow the instructions in each message exactly.";
}  // namespace

BackendConfig BackendConfig::remote_from_env() {
  BackendConfig config;
  config.kind = BackendKind::Remote;
  if (const char* endpoint = std::getenv("SEMCOM_LLM_ENDPOINT")) config.endpoint = endpoint;
  if (const char* key = std::getenv("SEMCOM_LLM_KEY")) config.api_key = key;
  if (const char* model = std::getenv("SEMCOM_LLM_MODEL")) config.model = model;
  return config;
}

void validate(const BackendConfig& config) {
  if (!(config.timeout_seconds > 0))
    throw BackendError(BackendError::Kind::BadResponse, "timeout_seconds must be > 0");
  if (config.max_retries < 0)
    throw BackendError(BackendError::Kind::BadResponse, "max_retries must be >= 0");
  if (config.kind == BackendKind::Remote && config.endpoint.empty())
    throw BackendError(BackendError::Kind::BadResponse, "remote backend requires an endpoint");
}

std::string DeterministicBackend::complete(const std::string&) {
  throw BackendError(BackendError::Kind::NotSupported,
                     "the deterministic backend has no free-text completion; callers dispatch "
                     "to the rule engines instead");
}

std::string StubBackend::complete(const std::string& prompt) {
  std::lock_guard<std::mutex> lock(mutex_);
  prompts_.push_back(prompt);
  if (next_ >= script_.size())
    throw BackendError(BackendError::Kind::ScriptExhausted,
                       "stub script exhausted after " + std::to_string(script_.size()) +
                           " completions");
  return script_[next_++];
}

std::vector<std::string> StubBackend::prompts_seen() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return prompts_;
}

RemoteBackend::RemoteBackend(BackendConfig config) : config_(std::move(config)) {
  config_.kind = BackendKind::Remote;
  validate(config_);
}

std::vector<RemoteBackend::Attempt> RemoteBackend::attempt_log() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return attempts_;
}

std::string RemoteBackend::complete(const std::string& prompt) {
  json body;
  body["model"] = config_.model;
  body["messages"] = json::array({
      json{{"role", "system"}, {"content", kSystemPrompt}},
      json{{"role", "user"}, {"content", prompt}},
  });
  body["temperature"] = config_.temperature;
  const std::string payload = body.dump();

  const int total_attempts = 1 + config_.max_retries;
  std::string last_error;
  bool timed_out = false;
  for (int attempt = 1; attempt <= total_attempts; ++attempt) {
    httplib::Client client(config_.endpoint);
    auto seconds = static_cast<time_t>(config_.timeout_seconds);
    auto usec = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, usec);
    client.set_read_timeout(seconds, usec);
    client.set_write_timeout(seconds, usec);
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto res = client.Post(kChatCompletionsPath, headers, payload, "application/json");
    if (!res) {
      // Transport-level failure: retry with exponential backoff.
      timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                  res.error() == httplib::Error::Read || res.error() == httplib::Error::Write;
      last_error = httplib::to_string(res.error());
      {
        std::lock_guard<std::mutex> lock(mutex_);
        attempts_.push_back({attempt, false, last_error});
      }
      if (attempt < total_attempts) {
        double delay = config_.backoff_base_seconds * std::pow(2.0, attempt - 1);
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      }
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      {
        std::lock_guard<std::mutex> lock(mutex_);
        attempts_.push_back({attempt, false, "http status " + std::to_string(res->status)});
      }
      throw BackendError(BackendError::Kind::HttpStatus,
                         "chat completion returned status " + std::to_string(res->status));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty() ||
        !reply["choices"][0].contains("message") ||
        !reply["choices"][0]["message"].contains("content")) {
      {
        std::lock_guard<std::mutex> lock(mutex_);
        attempts_.push_back({attempt, false, "malformed completion body"});
      }
      throw BackendError(BackendError::Kind::BadResponse,
                         "chat completion reply is missing choices[0].message.content");
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      attempts_.push_back({attempt, true, ""});
    }
    return reply["choices"][0]["message"]["content"].get<std::string>();
  }
  if (timed_out)
    throw BackendError(BackendError::Kind::Timeout,
                       "chat completion timed out after " + std::to_string(total_attempts) +
                           " attempts: " + last_error);
  throw BackendError(BackendError::Kind::Transport,
                     "chat completion failed after " + std::to_string(total_attempts) +
                         " attempts: " + last_error);
}

std::shared_ptr<Backend> make_backend(const BackendConfig& config,
                                      std::vector<std::string> stub_script) {
  switch (config.kind) {
    case BackendKind::Deterministic:
      return std::make_shared<DeterministicBackend>();
    case BackendKind::Stub:
      return std::make_shared<StubBackend>(std::move(stub_script));
    case BackendKind::Remote:
      return std::make_shared<RemoteBackend>(config);
  }
  throw BackendError(BackendError::Kind::BadResponse, "unknown backend kind");
}

}  // namespace semcom::llm
