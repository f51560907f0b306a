#include "eithne/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <thread>

#include "eithne/error.hpp"

namespace eithne {

namespace {

using Clock = std::chrono::steady_clock;

struct Pipe {
  std::mutex mutex;
  std::condition_variable ready;
  std::deque<std::uint8_t> bytes;
  bool closed = false;

  void close() {
    {
      std::lock_guard lock(mutex);
      closed = true;
    }
    ready.notify_all();
  }
};

class ChannelEndpoint final : public Endpoint {
 public:
  ChannelEndpoint(std::shared_ptr<Pipe> inbound, std::shared_ptr<Pipe> outbound)
      : inbound_(std::move(inbound)), outbound_(std::move(outbound)) {}
  ~ChannelEndpoint() override { close(); }

  void send_all(std::span<const std::uint8_t> bytes) override {
    {
      std::lock_guard lock(outbound_->mutex);
      if (outbound_->closed) throw TransportError("channel closed");
      outbound_->bytes.insert(outbound_->bytes.end(), bytes.begin(), bytes.end());
    }
    outbound_->ready.notify_all();
  }

  void recv_exact(std::span<std::uint8_t> out) override {
    std::size_t got = 0;
    std::unique_lock lock(inbound_->mutex);
    const auto deadline = Clock::now() + timeout_;
    while (got < out.size()) {
      auto has_data = [&] { return !inbound_->bytes.empty() || inbound_->closed; };
      if (timeout_.count() == 0) {
        inbound_->ready.wait(lock, has_data);
      } else if (!inbound_->ready.wait_until(lock, deadline, has_data)) {
        throw TimeoutError("receive timed out", got);
      }
      if (inbound_->bytes.empty()) throw TransportError("channel closed by peer", got);
      const std::size_t n = std::min(out.size() - got, inbound_->bytes.size());
      std::copy_n(inbound_->bytes.begin(), n, out.begin() + static_cast<std::ptrdiff_t>(got));
      inbound_->bytes.erase(inbound_->bytes.begin(), inbound_->bytes.begin() + static_cast<std::ptrdiff_t>(n));
      got += n;
    }
  }

  void close() override {
    outbound_->close();
    inbound_->close();
  }

  void set_receive_timeout(std::chrono::milliseconds timeout) override { timeout_ = timeout; }

 private:
  std::shared_ptr<Pipe> inbound_;
  std::shared_ptr<Pipe> outbound_;
  std::chrono::milliseconds timeout_{0};
};

class TcpEndpoint final : public Endpoint {
 public:
  explicit TcpEndpoint(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~TcpEndpoint() override { close(); }

  void send_all(std::span<const std::uint8_t> bytes) override {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
      const int fd = fd_.load();
      if (fd < 0) throw TransportError("socket closed");
      const ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("send failed: ") + std::strerror(errno));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  void recv_exact(std::span<std::uint8_t> out) override {
    std::size_t got = 0;
    const auto deadline = Clock::now() + timeout_;
    while (got < out.size()) {
      const int fd = fd_.load();
      if (fd < 0) throw TransportError("socket closed", got);
      if (timeout_.count() != 0) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
        if (left.count() <= 0) throw TimeoutError("receive timed out", got);
        pollfd pfd{fd, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (rc == 0) throw TimeoutError("receive timed out", got);
        if (rc < 0 && errno != EINTR) throw TransportError(std::string("poll failed: ") + std::strerror(errno), got);
        if (rc < 0) continue;
      }
      const ssize_t n = ::recv(fd, out.data() + got, out.size() - got, 0);
      if (n == 0) throw TransportError("connection closed by peer", got);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("recv failed: ") + std::strerror(errno), got);
      }
      got += static_cast<std::size_t>(n);
    }
  }

  // May be called from another thread to unblock a pending recv.
  void close() override {
    const int fd = fd_.exchange(-1);
    if (fd >= 0) {
      ::shutdown(fd, SHUT_RDWR);
      ::close(fd);
    }
  }

  void set_receive_timeout(std::chrono::milliseconds timeout) override { timeout_ = timeout; }

 private:
  std::atomic<int> fd_;
  std::chrono::milliseconds timeout_{0};
};

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  const std::string resolved = host == "localhost" ? "127.0.0.1" : host;
  if (::inet_pton(AF_INET, resolved.c_str(), &addr.sin_addr) != 1) {
    throw TransportError("invalid IPv4 address '" + host + "'");
  }
  return addr;
}

}  // namespace

std::pair<EndpointPtr, EndpointPtr> make_channel_pair() {
  auto a_to_b = std::make_shared<Pipe>();
  auto b_to_a = std::make_shared<Pipe>();
  return {std::make_unique<ChannelEndpoint>(b_to_a, a_to_b), std::make_unique<ChannelEndpoint>(a_to_b, b_to_a)};
}

EndpointPtr make_loopback() {
  auto pipe = std::make_shared<Pipe>();
  return std::make_unique<ChannelEndpoint>(pipe, pipe);
}

TcpListener::TcpListener(std::uint16_t port, const std::string& bind_address) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError(std::string("socket failed: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = make_address(bind_address, port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd_, 8) != 0) {
    const std::string reason = std::strerror(errno);
    close();
    throw TransportError("cannot listen on " + bind_address + ":" + std::to_string(port) + ": " + reason);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() { close(); }

void TcpListener::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

EndpointPtr TcpListener::accept(std::chrono::milliseconds timeout) {
  if (fd_ < 0) throw TransportError("listener closed");
  if (timeout.count() != 0) {
    pollfd pfd{fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (rc == 0) throw TimeoutError("accept timed out on port " + std::to_string(port_));
    if (rc < 0) throw TransportError(std::string("poll failed: ") + std::strerror(errno));
  }
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) throw TransportError(std::string("accept failed: ") + std::strerror(errno));
  return std::make_unique<TcpEndpoint>(fd);
}

EndpointPtr tcp_connect(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout) {
  const sockaddr_in addr = make_address(host, port);
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError(std::string("socket failed: ") + std::strerror(errno));
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) == 0) {
      return std::make_unique<TcpEndpoint>(fd);
    }
    const std::string reason = std::strerror(errno);
    ::close(fd);
    if (Clock::now() >= deadline) {
      throw TransportError("cannot connect to " + host + ":" + std::to_string(port) + ": " + reason);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds{20});
  }
}

void FrameLog::append(FrameEvent event) {
  std::lock_guard lock(mutex_);
  events_.push_back(event);
}

std::vector<FrameEvent> FrameLog::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

void FrameLog::clear() {
  std::lock_guard lock(mutex_);
  events_.clear();
}

RecordingEndpoint::RecordingEndpoint(EndpointPtr inner, std::shared_ptr<FrameLog> log)
    : inner_(std::move(inner)), log_(std::move(log)) {}

void RecordingEndpoint::send_all(std::span<const std::uint8_t> bytes) {
  inner_->send_all(bytes);
  feed(sent_pending_, bytes, Direction::kSent);
}

void RecordingEndpoint::recv_exact(std::span<std::uint8_t> out) {
  inner_->recv_exact(out);
  feed(recv_pending_, out, Direction::kReceived);
}

void RecordingEndpoint::feed(Bytes& pending, std::span<const std::uint8_t> bytes, Direction direction) {
  pending.insert(pending.end(), bytes.begin(), bytes.end());
  std::size_t offset = 0;
  while (pending.size() - offset >= kHeaderSize) {
    const FrameHeader h = decode_header(std::span<const std::uint8_t, kHeaderSize>(pending.data() + offset, kHeaderSize));
    const std::size_t frame = kHeaderSize + h.payload_bytes();
    if (pending.size() - offset < frame) break;
    log_->append({direction, h.type, h.object_id});
    offset += frame;
  }
  pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(offset));
}

}  // namespace eithne
