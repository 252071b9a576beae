#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "semcom/protocol.hpp"

// Thin RAII wrappers over POSIX TCP sockets plus protocol framing helpers.
namespace semcom::net {

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept;
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }

  void send_all(const std::uint8_t* data, std::size_t size);
  std::size_t recv_some(std::uint8_t* buf, std::size_t size);  // 0 on EOF
  void shutdown_read();
  void shutdown_both();
  void close();

 private:
  int fd_ = -1;
};

Socket connect_tcp(const std::string& host, int port);

class Listener {
 public:
  explicit Listener(int port, const std::string& bind_addr = "0.0.0.0");  // port 0 -> ephemeral
  int port() const { return port_; }
  Socket accept();  // invalid Socket after shutdown
  // Unblocks pending accepts; the descriptor is released by the destructor,
  // after the accepting thread has observed the shutdown.
  void shutdown();
  ~Listener();

 private:
  std::atomic<int> fd_{-1};
  int port_ = 0;
};

class SocketSource : public protocol::ByteSource {
 public:
  explicit SocketSource(Socket& socket) : socket_(socket) {}
  std::size_t read(std::uint8_t* buf, std::size_t n) override { return socket_.recv_some(buf, n); }

 private:
  Socket& socket_;
};

void send_message(Socket& socket, const protocol::Message& msg);
protocol::Message read_message(Socket& socket);  // throws ProtocolError on EOF

}  // namespace semcom::net
