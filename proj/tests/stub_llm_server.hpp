#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

// Local chat-completion contract server for remote-backend tests; no live
// network is ever required.
namespace semcom::testsupport {

class StubLlmServer {
 public:
  using Responder = std::function<std::string(const std::string& prompt)>;

  explicit StubLlmServer(Responder responder, double delay_seconds = 0.0, int status = 200)
      : responder_(std::move(responder)), delay_seconds_(delay_seconds), status_(status) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      ++requests_;
      if (delay_seconds_ > 0)
        std::this_thread::sleep_for(std::chrono::duration<double>(delay_seconds_));
      auto body = nlohmann::json::parse(req.body, nullptr, false);
      std::string prompt;
      if (!body.is_discarded() && body.contains("messages"))
        for (const auto& message : body["messages"])
          if (message.value("role", "") == "user") prompt = message.value("content", "");
      {
        std::lock_guard<std::mutex> lock(mutex_);
        last_auth_ = req.get_header_value("Authorization");
      }
      if (status_ != 200) {
        res.status = status_;
        res.set_content("{}", "application/json");
        return;
      }
      nlohmann::json reply = {
          {"choices",
           {{{"message", {{"role", "assistant"}, {"content", responder_(prompt)}}}}}},
      };
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubLlmServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int requests() const { return requests_.load(); }
  std::string last_auth() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return last_auth_;
  }

 private:
  httplib::Server server_;
  Responder responder_;
  double delay_seconds_;
  int status_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> requests_{0};
  mutable std::mutex mutex_;
  std::string last_auth_;
};

}  // namespace semcom::testsupport
