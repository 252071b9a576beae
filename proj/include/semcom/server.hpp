#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "semcom/net.hpp"
#include "semcom/orchestrator.hpp"

namespace semcom::server {

// TCP front end for the transmitter: one handler thread per connection, any
// number of request/reply exchanges per connection. Malformed inbound
// payloads get an ERROR_REPLY and the connection stays open; stop() drains
// in-flight sessions.
class TransmitterServer {
 public:
  TransmitterServer(orchestrator::Transmitter& transmitter, int port);
  ~TransmitterServer();

  void start();
  void stop();
  int port() const;

 private:
  void accept_loop();
  void serve_connection(net::Socket socket);

  orchestrator::Transmitter& transmitter_;
  std::unique_ptr<net::Listener> listener_;
  std::thread accept_thread_;
  std::atomic<bool> stopping_{false};

  std::mutex mutex_;
  std::vector<std::thread> workers_;
  std::vector<int> open_fds_;
};

}  // namespace semcom::server
