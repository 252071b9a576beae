#include "semcom/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

namespace semcom::net {

namespace {
[[noreturn]] void fail(const std::string& what) {
  char buf[128];
  // GNU strerror_r; reentrant, unlike strerror.
  const char* msg = ::strerror_r(errno, buf, sizeof(buf));
  throw NetError(what + ": " + msg);
}
}  // namespace

Socket::Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

Socket::~Socket() { close(); }

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::shutdown_read() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RD);
}

void Socket::shutdown_both() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::send_all(const std::uint8_t* data, std::size_t size) {
  std::size_t sent = 0;
  while (sent < size) {
    ssize_t n = ::send(fd_, data + sent, size - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::size_t Socket::recv_some(std::uint8_t* buf, std::size_t size) {
  while (true) {
    ssize_t n = ::recv(fd_, buf, size, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      return 0;  // treat a torn connection as EOF
    }
    return static_cast<std::size_t>(n);
  }
}

Socket connect_tcp(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  std::string service = std::to_string(port);
  int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result);
  if (rc != 0) throw NetError("getaddrinfo " + host + ": " + gai_strerror(rc));

  int fd = -1;
  for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(result);
  if (fd < 0) throw NetError("cannot connect to " + host + ":" + service);
  return Socket(fd);
}

Listener::Listener(int port, const std::string& bind_addr) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) fail("socket");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw NetError("invalid bind address: " + bind_addr);
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    int saved = errno;
    ::close(fd);
    errno = saved;
    fail("bind port " + std::to_string(port));
  }
  if (::listen(fd, SOMAXCONN) < 0) {
    ::close(fd);
    fail("listen");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len) == 0)
    port_ = ntohs(bound.sin_port);
  else
    port_ = port;
  fd_.store(fd);
}

Listener::~Listener() {
  shutdown();
  int fd = fd_.exchange(-1);
  if (fd >= 0) ::close(fd);
}

void Listener::shutdown() {
  int fd = fd_.load();
  if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
}

Socket Listener::accept() {
  int fd = fd_.load();
  if (fd < 0) return Socket();
  int client = ::accept(fd, nullptr, nullptr);
  if (client < 0) return Socket();
  return Socket(client);
}

void send_message(Socket& socket, const protocol::Message& msg) {
  auto bytes = protocol::encode_message(msg);
  socket.send_all(bytes.data(), bytes.size());
}

protocol::Message read_message(Socket& socket) {
  SocketSource source(socket);
  return protocol::decode_message(source);
}

}  // namespace semcom::net
