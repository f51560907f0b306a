#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "eithne/registry.hpp"
#include "eithne/transport.hpp"

namespace eithne {

enum class CoreState : std::uint8_t { kIdle, kRunning, kStopped };

std::string_view to_string(CoreState state);

/// One simulated micro-core: a private scratchpad of `mem_budget_bytes`
/// holding the registered variables and the kernels' nominal code size,
/// plus a listener that services one host link.
class DeviceCore {
 public:
  DeviceCore(std::uint16_t core_id, std::size_t mem_budget_bytes);

  /// Installs kernels and variables. Fails atomically with MemoryBudgetError
  /// if the footprint does not fit; the core is left unchanged.
  void init(std::span<const KernelDescriptor> kernels, std::span<const VariableSpec> registrations);
  void init(const KernelProgram& program) { init(program.kernels, program.variables); }

  void attach(EndpointPtr endpoint);

  /// Serves requests until STOP or until the link closes.
  void listen();

  /// Closes the link from outside the listener; listen() then returns.
  void halt();

  std::uint16_t core_id() const noexcept { return core_id_; }
  CoreState state() const noexcept { return state_.load(); }
  std::size_t mem_budget_bytes() const noexcept { return mem_budget_bytes_; }
  std::size_t used_bytes() const noexcept { return used_bytes_; }
  std::size_t free_bytes() const noexcept { return mem_budget_bytes_ - used_bytes_; }
  const VariableTable& variables() const noexcept { return vars_; }
  VariableTable& variables() noexcept { return vars_; }
  std::span<const KernelDescriptor> kernels() const noexcept { return kernels_; }

  /// Applies one request to the core and returns the replies it produces.
  /// listen() is a loop over this; exposed for single-step tests.
  std::vector<Message> handle(const Message& request);

 private:
  Message reply_error(const Message& request, ErrorCode code) const;
  std::shared_ptr<Endpoint> link() const;

  std::uint16_t core_id_;
  std::size_t mem_budget_bytes_;
  std::size_t used_bytes_ = 0;
  VariableTable vars_;
  std::vector<KernelDescriptor> kernels_;
  mutable std::mutex endpoint_mutex_;
  std::shared_ptr<Endpoint> endpoint_;
  std::atomic<CoreState> state_{CoreState::kIdle};
  bool stop_requested_ = false;
};

/// Throws MemoryBudgetError if `program` cannot fit in `budget_bytes`.
void check_budget(const KernelProgram& program, std::size_t budget_bytes);

struct DeviceConfig {
  std::string name = "simulated";
  std::uint16_t core_count = 1;
  std::size_t mem_budget_bytes = 32 * 1024;
  /// Label used by metrics; has no effect on execution speed.
  double clock_mhz = 100.0;
};

struct LinkPair {
  EndpointPtr host;
  EndpointPtr device;
};

/// Creates the link for one core.
using TransportFactory = std::function<LinkPair(std::uint16_t core_id)>;

TransportFactory in_process_transport();
/// Device side listens on `port_base + core_id` (an ephemeral port when
/// `port_base` is 0) and the host side connects to it.
TransportFactory tcp_transport(std::uint16_t port_base = 0, std::string address = "127.0.0.1");

/// A running simulated device: one listener thread per core.
class DeviceHandle {
 public:
  DeviceHandle() = default;
  DeviceHandle(DeviceHandle&&) noexcept = default;
  DeviceHandle& operator=(DeviceHandle&&) noexcept;
  ~DeviceHandle();

  const DeviceConfig& config() const noexcept { return config_; }
  std::size_t core_count() const noexcept { return cores_.size(); }
  const DeviceCore& core(std::uint16_t core_id) const { return *cores_.at(core_id); }

  /// Host side of a core's link; can be taken once.
  EndpointPtr take_host_endpoint(std::uint16_t core_id);

  /// Closes every link and joins the listeners.
  void shutdown();

 private:
  friend DeviceHandle spawn_device(const DeviceConfig&, const KernelProgram&, const TransportFactory&);

  DeviceConfig config_;
  std::vector<std::unique_ptr<DeviceCore>> cores_;
  std::vector<EndpointPtr> host_endpoints_;
  std::vector<std::thread> listeners_;
};

/// Starts `config.core_count` cores, each loaded with `program`. On any
/// failure the cores already started are torn down before the error
/// propagates (SpawnError for transport setup, MemoryBudgetError for fit).
DeviceHandle spawn_device(const DeviceConfig& config, const KernelProgram& program, const TransportFactory& transport);

/// Standalone device mode: listens on `port_base + core` for every core and
/// serves host connections one after another, each on a fresh core. Returns
/// once every core has served `sessions_per_core` sessions (0 = forever).
void serve_tcp(const DeviceConfig& config, const KernelProgram& program, std::uint16_t port_base,
               const std::string& bind_address = "127.0.0.1", std::size_t sessions_per_core = 0);

}  // namespace eithne
