#include "semcom/server.hpp"

#include <sys/socket.h>

#include <algorithm>

namespace semcom::server {

TransmitterServer::TransmitterServer(orchestrator::Transmitter& transmitter, int port)
    : transmitter_(transmitter), listener_(std::make_unique<net::Listener>(port)) {}

TransmitterServer::~TransmitterServer() { stop(); }

int TransmitterServer::port() const { return listener_ ? listener_->port() : 0; }

void TransmitterServer::start() {
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void TransmitterServer::accept_loop() {
  while (!stopping_.load()) {
    net::Socket socket = listener_->accept();
    if (!socket.valid()) break;  // listener shut down
    std::lock_guard<std::mutex> lock(mutex_);
    if (stopping_.load()) break;
    open_fds_.push_back(socket.fd());
    workers_.emplace_back([this, s = std::move(socket)]() mutable { serve_connection(std::move(s)); });
  }
}

void TransmitterServer::serve_connection(net::Socket socket) {
  const int fd = socket.fd();
  while (!stopping_.load()) {
    protocol::Message request;
    try {
      request = net::read_message(socket);
    } catch (const protocol::ProtocolError& e) {
      if (e.kind == protocol::ProtocolError::Kind::Truncated) break;  // peer went away
      // Any other decode failure gets an error reply and the connection
      // stays usable: the length prefix already delimited the bad payload.
      try {
        net::send_message(socket, protocol::Message{"-", protocol::ErrorReply{"BAD_MESSAGE",
                                                                              e.what()}});
        continue;
      } catch (const std::exception&) {
        break;
      }
    } catch (const std::exception&) {
      break;
    }
    try {
      net::send_message(socket, transmitter_.handle_message(request));
    } catch (const std::exception&) {
      break;
    }
  }
  {
    // Deregister before closing so stop() never shuts down a recycled fd.
    std::lock_guard<std::mutex> lock(mutex_);
    open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd), open_fds_.end());
  }
  socket.close();
}

void TransmitterServer::stop() {
  if (stopping_.exchange(true)) return;
  if (listener_) listener_->shutdown();
  {
    // Nudge idle connections; in-flight replies still finish because only
    // the read side is shut down.
    std::lock_guard<std::mutex> lock(mutex_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RD);
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    workers.swap(workers_);
  }
  for (auto& worker : workers)
    if (worker.joinable()) worker.join();
}

}  // namespace semcom::server
