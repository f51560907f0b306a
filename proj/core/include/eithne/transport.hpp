#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eithne/wire.hpp"

namespace eithne {

/// Reliable, ordered, duplex byte stream. Framing lives in wire.hpp.
///
/// An endpoint is owned by one actor at a time; it may be moved between
/// threads but is never used from two threads concurrently.
class Endpoint {
 public:
  virtual ~Endpoint() = default;

  virtual void send_all(std::span<const std::uint8_t> bytes) = 0;
  /// Fills `out` completely or throws TransportError (peer closed) /
  /// TimeoutError, both carrying the number of bytes that did arrive.
  virtual void recv_exact(std::span<std::uint8_t> out) = 0;
  virtual void close() = 0;
  /// Zero blocks forever.
  virtual void set_receive_timeout(std::chrono::milliseconds timeout) = 0;
};

using EndpointPtr = std::unique_ptr<Endpoint>;

/// Two connected in-process endpoints.
std::pair<EndpointPtr, EndpointPtr> make_channel_pair();

/// An endpoint whose sends are delivered to its own receive queue.
EndpointPtr make_loopback();

class TcpListener {
 public:
  /// Port 0 binds an ephemeral port; see port().
  explicit TcpListener(std::uint16_t port, const std::string& bind_address = "127.0.0.1");
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  EndpointPtr accept(std::chrono::milliseconds timeout = std::chrono::milliseconds{0});
  void close();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Connects to a listening device, retrying until `timeout` elapses.
EndpointPtr tcp_connect(const std::string& host, std::uint16_t port,
                        std::chrono::milliseconds timeout = std::chrono::milliseconds{5000});

enum class Direction { kSent, kReceived };

struct FrameEvent {
  Direction direction;
  MsgType type;
  std::uint16_t object_id;
};

/// Ordered log of the frames that crossed a RecordingEndpoint.
class FrameLog {
 public:
  void append(FrameEvent event);
  std::vector<FrameEvent> events() const;
  void clear();

 private:
  mutable std::mutex mutex_;
  std::vector<FrameEvent> events_;
};

/// Pass-through endpoint that reassembles frames in both directions and logs them.
class RecordingEndpoint final : public Endpoint {
 public:
  RecordingEndpoint(EndpointPtr inner, std::shared_ptr<FrameLog> log);

  void send_all(std::span<const std::uint8_t> bytes) override;
  void recv_exact(std::span<std::uint8_t> out) override;
  void close() override { inner_->close(); }
  void set_receive_timeout(std::chrono::milliseconds timeout) override { inner_->set_receive_timeout(timeout); }

 private:
  void feed(Bytes& pending, std::span<const std::uint8_t> bytes, Direction direction);

  EndpointPtr inner_;
  std::shared_ptr<FrameLog> log_;
  Bytes sent_pending_;
  Bytes recv_pending_;
};

}  // namespace eithne
