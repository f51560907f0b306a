#include "eithne/device.hpp"

#include <string>

#include "eithne/error.hpp"

namespace eithne {

std::string_view to_string(CoreState state) {
  switch (state) {
    case CoreState::kIdle:
      return "IDLE";
    case CoreState::kRunning:
      return "RUNNING";
    case CoreState::kStopped:
      return "STOPPED";
  }
  return "UNKNOWN";
}

namespace {

void check_fit(std::span<const KernelDescriptor> kernels, std::span<const VariableSpec> registrations,
               std::size_t budget) {
  std::size_t total = 0;
  for (const auto& k : kernels) total += k.code_bytes;
  for (const auto& v : registrations) total += v.byte_size();
  if (total <= budget) return;

  // Name the first entry whose cumulative footprint crosses the budget.
  std::size_t running = 0;
  std::string offending;
  for (const auto& k : kernels) {
    running += k.code_bytes;
    if (running > budget) {
      offending = "kernel '" + k.name + "'";
      break;
    }
  }
  if (offending.empty()) {
    for (const auto& v : registrations) {
      running += v.byte_size();
      if (running > budget) {
        offending = "variable '" + v.name + "'";
        break;
      }
    }
  }
  const std::size_t overflow = total - budget;
  throw MemoryBudgetError("scratchpad budget exceeded at " + offending + ": needs " + std::to_string(total) +
                              " bytes, budget " + std::to_string(budget) + " (over by " + std::to_string(overflow) +
                              " bytes)",
                          offending, overflow);
}

}  // namespace

void check_budget(const KernelProgram& program, std::size_t budget_bytes) {
  check_fit(program.kernels, program.variables, budget_bytes);
}

DeviceCore::DeviceCore(std::uint16_t core_id, std::size_t mem_budget_bytes)
    : core_id_(core_id), mem_budget_bytes_(mem_budget_bytes) {}

void DeviceCore::init(std::span<const KernelDescriptor> kernels, std::span<const VariableSpec> registrations) {
  if (state_.load() != CoreState::kIdle) throw Error("device_init on a core that is not IDLE");
  check_fit(kernels, registrations, mem_budget_bytes_);

  VariableTable vars = make_table(registrations);
  std::vector<KernelDescriptor> table(kernels.begin(), kernels.end());
  std::size_t used = vars.total_bytes();
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i].kernel_id = static_cast<std::uint16_t>(i);
    used += table[i].code_bytes;
  }
  vars_ = std::move(vars);
  kernels_ = std::move(table);
  used_bytes_ = used;
}

void DeviceCore::attach(EndpointPtr endpoint) {
  std::lock_guard lock(endpoint_mutex_);
  endpoint_ = std::move(endpoint);
}

std::shared_ptr<Endpoint> DeviceCore::link() const {
  std::lock_guard lock(endpoint_mutex_);
  return endpoint_;
}

void DeviceCore::halt() {
  if (auto ep = link()) ep->close();
}

Message DeviceCore::reply_error(const Message& request, ErrorCode code) const {
  return make_error(core_id_, request.object_id, code);
}

std::vector<Message> DeviceCore::handle(const Message& request) {
  if (request.target_id != core_id_) return {reply_error(request, ErrorCode::kUnexpectedMessage)};

  switch (request.type) {
    case MsgType::kDataSend: {
      if (request.object_id == kScratchVarId) {
        // Bandwidth probe sink: checked against free scratchpad, then dropped.
        if (request.payload.size() > free_bytes()) return {reply_error(request, ErrorCode::kMemoryBudget)};
        return {};
      }
      if (!vars_.contains(request.object_id)) return {reply_error(request, ErrorCode::kUnknownVariable)};
      const auto& d = vars_.descriptor(request.object_id);
      if (request.element_type != element_type_of(d.kind)) return {reply_error(request, ErrorCode::kTypeMismatch)};
      if (request.payload.size() != d.byte_size()) return {reply_error(request, ErrorCode::kSizeMismatch)};
      vars_.unmarshal(request.object_id, request.payload);
      return {};
    }
    case MsgType::kDataRequest: {
      if (!vars_.contains(request.object_id)) return {reply_error(request, ErrorCode::kUnknownVariable)};
      auto snapshot = vars_.marshal(request.object_id);
      return {make_data(MsgType::kDataResponse, core_id_, request.object_id, snapshot.element_type,
                        std::move(snapshot.payload))};
    }
    case MsgType::kExecute: {
      if (request.object_id >= kernels_.size()) return {reply_error(request, ErrorCode::kUnknownKernel)};
      state_.store(CoreState::kRunning);
      try {
        kernels_[request.object_id].entry(vars_);
      } catch (const std::exception&) {
        state_.store(CoreState::kIdle);
        return {reply_error(request, ErrorCode::kKernelFailed)};
      }
      state_.store(CoreState::kIdle);
      return {make_control(MsgType::kExecuteDone, core_id_, request.object_id)};
    }
    case MsgType::kPing:
      return {make_control(MsgType::kPong, core_id_, request.object_id)};
    case MsgType::kTableRequest: {
      const auto words = layout_words(vars_.descriptors());
      return {make_data(MsgType::kTableResponse, core_id_, static_cast<std::uint16_t>(kernels_.size()),
                        ElementType::kInt32, pack_int32(words))};
    }
    case MsgType::kStop:
      stop_requested_ = true;
      return {};
    default:
      return {reply_error(request, ErrorCode::kUnexpectedMessage)};
  }
}

void DeviceCore::listen() {
  auto ep = link();
  if (!ep) throw Error("listener started without a link");
  stop_requested_ = false;
  state_.store(CoreState::kIdle);
  try {
    while (!stop_requested_) {
      const Message request = recv_message(*ep);
      for (const auto& reply : handle(request)) send_message(*ep, reply);
    }
  } catch (const TransportError&) {
    // Link closed: the host has gone away.
  } catch (const DecodeError&) {
    // The stream cannot be resynchronised after a corrupt header.
  }
  ep->close();
  state_.store(CoreState::kStopped);
}

TransportFactory in_process_transport() {
  return [](std::uint16_t) {
    auto [host, device] = make_channel_pair();
    return LinkPair{std::move(host), std::move(device)};
  };
}

TransportFactory tcp_transport(std::uint16_t port_base, std::string address) {
  return [port_base, address](std::uint16_t core_id) {
    const std::uint16_t port = port_base == 0 ? 0 : static_cast<std::uint16_t>(port_base + core_id);
    TcpListener listener(port, address);
    EndpointPtr host = tcp_connect(address, listener.port(), std::chrono::milliseconds{2000});
    EndpointPtr device = listener.accept(std::chrono::milliseconds{2000});
    return LinkPair{std::move(host), std::move(device)};
  };
}

DeviceHandle& DeviceHandle::operator=(DeviceHandle&& other) noexcept {
  if (this != &other) {
    shutdown();
    config_ = std::move(other.config_);
    cores_ = std::move(other.cores_);
    host_endpoints_ = std::move(other.host_endpoints_);
    listeners_ = std::move(other.listeners_);
  }
  return *this;
}

DeviceHandle::~DeviceHandle() { shutdown(); }

EndpointPtr DeviceHandle::take_host_endpoint(std::uint16_t core_id) {
  auto& ep = host_endpoints_.at(core_id);
  if (!ep) throw Error("host endpoint for core " + std::to_string(core_id) + " already taken");
  return std::move(ep);
}

void DeviceHandle::shutdown() {
  for (auto& core : cores_) core->halt();
  for (auto& t : listeners_) {
    if (t.joinable()) t.join();
  }
  listeners_.clear();
  host_endpoints_.clear();
}

DeviceHandle spawn_device(const DeviceConfig& config, const KernelProgram& program,
                          const TransportFactory& transport) {
  if (config.core_count == 0) throw SpawnError("device '" + config.name + "' needs at least one core");
  check_budget(program, config.mem_budget_bytes);

  DeviceHandle handle;
  handle.config_ = config;
  for (std::uint16_t id = 0; id < config.core_count; ++id) {
    auto core = std::make_unique<DeviceCore>(id, config.mem_budget_bytes);
    core->init(program);
    LinkPair link;
    try {
      link = transport(id);
    } catch (const std::exception& e) {
      handle.shutdown();
      throw SpawnError("cannot create link for core " + std::to_string(id) + " of '" + config.name +
                       "': " + e.what());
    }
    core->attach(std::move(link.device));
    DeviceCore* raw = core.get();
    handle.cores_.push_back(std::move(core));
    handle.host_endpoints_.push_back(std::move(link.host));
    handle.listeners_.emplace_back([raw] { raw->listen(); });
  }
  return handle;
}

void serve_tcp(const DeviceConfig& config, const KernelProgram& program, std::uint16_t port_base,
               const std::string& bind_address, std::size_t sessions_per_core) {
  if (config.core_count == 0) throw SpawnError("device '" + config.name + "' needs at least one core");
  check_budget(program, config.mem_budget_bytes);
  std::vector<std::unique_ptr<TcpListener>> listeners;
  try {
    for (std::uint16_t id = 0; id < config.core_count; ++id) {
      listeners.push_back(std::make_unique<TcpListener>(static_cast<std::uint16_t>(port_base + id), bind_address));
    }
  } catch (const TransportError& e) {
    throw SpawnError("cannot listen for device '" + config.name + "': " + e.what());
  }
  std::vector<std::thread> threads;
  for (std::uint16_t id = 0; id < config.core_count; ++id) {
    threads.emplace_back([&, id] {
      for (std::size_t served = 0; sessions_per_core == 0 || served < sessions_per_core; ++served) {
        // Every session starts from a freshly initialised scratchpad.
        DeviceCore core(id, config.mem_budget_bytes);
        core.init(program);
        try {
          core.attach(listeners[id]->accept());
        } catch (const TransportError&) {
          return;
        }
        core.listen();
      }
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace eithne
