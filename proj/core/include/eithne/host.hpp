#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "eithne/registry.hpp"
#include "eithne/transport.hpp"

namespace eithne {

/// Brackets one EXECUTE -> EXECUTE_DONE exchange on the monotonic clock.
struct TimingRecord {
  std::uint16_t kernel_id = 0;
  std::uint16_t core_id = 0;
  std::int64_t t_start_ns = 0;
  std::int64_t t_end_ns = 0;

  double elapsed_s() const { return static_cast<double>(t_end_ns - t_start_ns) * 1e-9; }
};

struct LatencyStats {
  double min_s = 0;
  double median_s = 0;
  double mean_s = 0;
  std::size_t samples = 0;
  /// Set when the link failed before all repetitions completed.
  bool partial = false;
};

struct BandwidthSample {
  std::size_t bytes = 0;
  /// Fastest of the repetitions.
  double elapsed_s = 0;
  double mb_per_s = 0;
};

struct HostOptions {
  std::uint16_t host_id = 0;
  std::chrono::milliseconds timeout{60'000};
};

/// Order statistics of a non-empty sample set.
LatencyStats summarize(std::vector<double> samples_s);

/// Host-side orchestrator for one benchmark program. The session owns a
/// mirror of the device variable table and one link per connected core.
class HostSession {
 public:
  explicit HostSession(std::span<const VariableSpec> registrations, HostOptions options = {});
  ~HostSession();
  HostSession(const HostSession&) = delete;
  HostSession& operator=(const HostSession&) = delete;

  /// Takes ownership of the link and checks that the core's table matches
  /// ours; throws ProtocolError (and drops the link) on mismatch.
  void connect(std::uint16_t core_id, EndpointPtr endpoint);
  bool connected(std::uint16_t core_id) const { return links_.count(core_id) != 0; }

  VariableTable& variables() noexcept { return vars_; }
  const VariableTable& variables() const noexcept { return vars_; }
  std::uint16_t host_id() const noexcept { return options_.host_id; }

  /// Fire-and-forget DATA_SEND; a device-side rejection surfaces on the
  /// next exchange with that core.
  void send_var(std::uint16_t core_id, std::uint16_t var_id);
  void recv_var(std::uint16_t core_id, std::uint16_t var_id);
  TimingRecord execute_kernel(std::uint16_t core_id, std::uint16_t kernel_id);

  /// PING -> PONG round trip; drains any pending device errors first.
  void sync(std::uint16_t core_id);

  LatencyStats probe_latency(std::uint16_t core_id, std::size_t repetitions);
  /// Each size must be a positive multiple of 4 and fit the core's free scratchpad.
  std::vector<BandwidthSample> probe_bandwidth(std::uint16_t core_id, std::span<const std::size_t> sizes,
                                               std::size_t repetitions);

  /// Sends STOP and releases the link.
  void stop(std::uint16_t core_id);

 private:
  Endpoint& link(std::uint16_t core_id);
  Message await(std::uint16_t core_id);

  VariableTable vars_;
  HostOptions options_;
  std::map<std::uint16_t, EndpointPtr> links_;
};

std::int64_t monotonic_ns();

}  // namespace eithne
