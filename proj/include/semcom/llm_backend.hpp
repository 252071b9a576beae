#pragma once

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

// Text-completion backends. The deterministic backend never produces free
// text itself: modules that receive it run their rule engines instead. The
// stub replays a script; the remote client speaks the chat-completion wire
// shape.
namespace semcom::llm {

struct BackendError : std::runtime_error {
  enum class Kind { Timeout, Transport, HttpStatus, ScriptExhausted, BadResponse, NotSupported };
  Kind kind;
  BackendError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

enum class BackendKind { Deterministic, Stub, Remote };

struct BackendConfig {
  BackendKind kind = BackendKind::Deterministic;
  std::string endpoint;  // base URL, e.g. http://127.0.0.1:8080
  std::string api_key;
  std::string model = "gpt-4";
  double timeout_seconds = 30.0;   // > 0
  int max_retries = 2;             // >= 0, transport errors only
  double temperature = 0.0;        // remote only
  double backoff_base_seconds = 1.0;  // doubled per retry

  // Applies SEMCOM_LLM_ENDPOINT / SEMCOM_LLM_KEY / SEMCOM_LLM_MODEL.
  static BackendConfig remote_from_env();
};

void validate(const BackendConfig& config);

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendKind kind() const = 0;
  virtual std::string complete(const std::string& prompt) = 0;
};

class DeterministicBackend : public Backend {
 public:
  BackendKind kind() const override { return BackendKind::Deterministic; }
  [[noreturn]] std::string complete(const std::string& prompt) override;
};

// Thread-safe scripted backend; each complete() consumes one entry.
class StubBackend : public Backend {
 public:
  explicit StubBackend(std::vector<std::string> script) : script_(std::move(script)) {}
  BackendKind kind() const override { return BackendKind::Stub; }
  std::string complete(const std::string& prompt) override;
  std::vector<std::string> prompts_seen() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> script_;
  std::vector<std::string> prompts_;
  std::size_t next_ = 0;
};

class RemoteBackend : public Backend {
 public:
  explicit RemoteBackend(BackendConfig config);
  BackendKind kind() const override { return BackendKind::Remote; }
  std::string complete(const std::string& prompt) override;

  struct Attempt {
    int number = 0;  // 1-based
    bool ok = false;
    std::string error;
  };
  std::vector<Attempt> attempt_log() const;
  const BackendConfig& config() const { return config_; }

 private:
  BackendConfig config_;
  mutable std::mutex mutex_;
  std::vector<Attempt> attempts_;
};

std::shared_ptr<Backend> make_backend(const BackendConfig& config,
                                      std::vector<std::string> stub_script = {});

}  // namespace semcom::llm
