#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "abcd/netsim.hpp"

namespace abcd::net {

namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  throw TransportError(what + ": " + std::strerror(errno));
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

struct Channel {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::uint8_t> data;
  bool closed = false;
};

class MemoryEnd final : public Transport {
 public:
  MemoryEnd(std::shared_ptr<Channel> in, std::shared_ptr<Channel> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~MemoryEnd() override { close(); }

  void send(std::span<const std::uint8_t> bytes) override {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw TransportError("send on closed pipe");
    out_->data.insert(out_->data.end(), bytes.begin(), bytes.end());
    out_->cv.notify_all();
  }

  void recv_exact(std::span<std::uint8_t> out) override {
    std::size_t got = 0;
    std::unique_lock lock(in_->mu);
    while (got < out.size()) {
      in_->cv.wait(lock, [&] { return !in_->data.empty() || in_->closed; });
      if (in_->data.empty()) throw TransportError("peer closed the pipe");
      const std::size_t take = std::min(out.size() - got, in_->data.size());
      std::copy_n(in_->data.begin(), take, out.begin() + static_cast<std::ptrdiff_t>(got));
      in_->data.erase(in_->data.begin(), in_->data.begin() + static_cast<std::ptrdiff_t>(take));
      got += take;
    }
  }

  void close() override {
    for (auto* ch : {in_.get(), out_.get()}) {
      std::lock_guard lock(ch->mu);
      ch->closed = true;
      ch->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<Channel> in_, out_;
};

}  // namespace

FdTransport::FdTransport(int fd) : fd_(fd) {}
FdTransport::~FdTransport() { close(); }
FdTransport::FdTransport(FdTransport&& o) noexcept : fd_(o.release()) {}
FdTransport& FdTransport::operator=(FdTransport&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.release();
  }
  return *this;
}

int FdTransport::release() {
  const int fd = fd_;
  fd_ = -1;
  return fd;
}

void FdTransport::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void FdTransport::send(std::span<const std::uint8_t> bytes) {
  if (fd_ < 0) throw TransportError("send on closed socket");
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t w = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      sys_fail("send");
    }
    sent += static_cast<std::size_t>(w);
  }
}

void FdTransport::recv_exact(std::span<std::uint8_t> out) {
  if (fd_ < 0) throw TransportError("recv on closed socket");
  std::size_t got = 0;
  while (got < out.size()) {
    const ssize_t r = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      sys_fail("recv");
    }
    if (r == 0)
      throw TransportError("peer closed the connection after " + std::to_string(got) + " of " +
                           std::to_string(out.size()) + " bytes");
    got += static_cast<std::size_t>(r);
  }
}

std::pair<FdTransport, FdTransport> make_socket_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) sys_fail("socketpair");
  return {FdTransport(fds[0]), FdTransport(fds[1])};
}

int tcp_listen(std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) sys_fail("socket");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    const int e = errno;
    ::close(fd);
    errno = e;
    sys_fail("bind 127.0.0.1:" + std::to_string(port));
  }
  if (::listen(fd, 1) != 0) {
    const int e = errno;
    ::close(fd);
    errno = e;
    sys_fail("listen");
  }
  return fd;
}

std::uint16_t bound_port(int listen_fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(listen_fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) sys_fail("getsockname");
  return ntohs(addr.sin_port);
}

FdTransport tcp_accept(int listen_fd) {
  for (;;) {
    const int fd = ::accept4(listen_fd, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd >= 0) {
      set_nodelay(fd);
      return FdTransport(fd);
    }
    if (errno != EINTR) sys_fail("accept");
  }
}

FdTransport tcp_connect(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
  if (rc != 0) throw TransportError("resolve " + host + ": " + ::gai_strerror(rc));
  std::string last = "no addresses";
  for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
    const int fd = ::socket(p->ai_family, p->ai_socktype | SOCK_CLOEXEC, p->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      set_nodelay(fd);
      return FdTransport(fd);
    }
    last = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  throw TransportError("connect " + host + ":" + std::to_string(port) + ": " + last);
}

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_memory_pipe() {
  auto ab = std::make_shared<Channel>();
  auto ba = std::make_shared<Channel>();
  return {std::make_unique<MemoryEnd>(ba, ab), std::make_unique<MemoryEnd>(ab, ba)};
}

}  // namespace abcd::net
