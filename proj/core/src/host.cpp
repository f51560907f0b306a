#include "eithne/host.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "eithne/error.hpp"

namespace eithne {

namespace {

std::string core_label(std::uint16_t core_id) { return "core " + std::to_string(core_id); }

[[noreturn]] void raise_device_error(const Message& m, const std::string& during) {
  const auto code = static_cast<ErrorCode>(m.error_code);
  throw DeviceError(core_label(m.target_id) + " rejected " + during + ": " + std::string(to_string(code)) +
                        " (object " + std::to_string(m.object_id) + ")",
                    m.error_code);
}

}  // namespace

std::int64_t monotonic_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

LatencyStats summarize(std::vector<double> samples_s) {
  if (samples_s.empty()) throw InvalidArgument("no samples to summarize");
  std::sort(samples_s.begin(), samples_s.end());
  LatencyStats s;
  s.samples = samples_s.size();
  s.min_s = samples_s.front();
  const std::size_t mid = samples_s.size() / 2;
  s.median_s = samples_s.size() % 2 ? samples_s[mid] : 0.5 * (samples_s[mid - 1] + samples_s[mid]);
  s.mean_s = std::accumulate(samples_s.begin(), samples_s.end(), 0.0) / static_cast<double>(samples_s.size());
  return s;
}

HostSession::HostSession(std::span<const VariableSpec> registrations, HostOptions options)
    : vars_(make_table(registrations)), options_(options) {}

HostSession::~HostSession() {
  for (auto& [id, ep] : links_) ep->close();
}

Endpoint& HostSession::link(std::uint16_t core_id) {
  const auto it = links_.find(core_id);
  if (it == links_.end()) throw Error(core_label(core_id) + " is not connected");
  return *it->second;
}

Message HostSession::await(std::uint16_t core_id) {
  Message m = recv_message(link(core_id));
  if (m.target_id != core_id) {
    throw ProtocolError("reply from " + core_label(m.target_id) + " on the link of " + core_label(core_id));
  }
  return m;
}

void HostSession::connect(std::uint16_t core_id, EndpointPtr endpoint) {
  if (links_.count(core_id)) throw Error(core_label(core_id) + " is already connected");
  endpoint->set_receive_timeout(options_.timeout);
  links_.emplace(core_id, std::move(endpoint));
  try {
    send_message(link(core_id), make_control(MsgType::kTableRequest, core_id));
    const Message reply = await(core_id);
    if (reply.type != MsgType::kTableResponse || reply.element_type != ElementType::kInt32) {
      throw ProtocolError("handshake with " + core_label(core_id) + " got " + std::string(to_string(reply.type)));
    }
    const auto remote = layout_from_words(unpack_int32(reply.payload));
    if (!structurally_equal(remote, vars_.descriptors())) {
      throw ProtocolError("handshake with " + core_label(core_id) +
                          " failed: device variable table does not match the host registrations");
    }
  } catch (...) {
    links_.erase(core_id);
    throw;
  }
}

void HostSession::send_var(std::uint16_t core_id, std::uint16_t var_id) {
  if (!vars_.contains(var_id)) throw RegistryError("unknown variable id " + std::to_string(var_id));
  auto snapshot = vars_.marshal(var_id);
  send_message(link(core_id),
               make_data(MsgType::kDataSend, core_id, var_id, snapshot.element_type, std::move(snapshot.payload)));
}

void HostSession::recv_var(std::uint16_t core_id, std::uint16_t var_id) {
  if (!vars_.contains(var_id)) throw RegistryError("unknown variable id " + std::to_string(var_id));
  send_message(link(core_id), make_control(MsgType::kDataRequest, core_id, var_id));
  const Message reply = await(core_id);
  if (reply.type == MsgType::kError) raise_device_error(reply, "DATA_REQUEST");
  const auto& d = vars_.descriptor(var_id);
  if (reply.type != MsgType::kDataResponse || reply.object_id != var_id) {
    throw ProtocolError("expected DATA_RESPONSE for variable " + std::to_string(var_id) + ", got " +
                        std::string(to_string(reply.type)) + " for object " + std::to_string(reply.object_id));
  }
  if (reply.element_type != element_type_of(d.kind) || reply.payload.size() != d.byte_size()) {
    throw ProtocolError("DATA_RESPONSE for '" + d.name + "' has " + std::to_string(reply.payload.size()) +
                        " bytes, expected " + std::to_string(d.byte_size()));
  }
  vars_.unmarshal(var_id, reply.payload);
}

TimingRecord HostSession::execute_kernel(std::uint16_t core_id, std::uint16_t kernel_id) {
  Endpoint& ep = link(core_id);
  const Bytes frame = encode_message(make_control(MsgType::kExecute, core_id, kernel_id));

  TimingRecord record;
  record.kernel_id = kernel_id;
  record.core_id = core_id;
  record.t_start_ns = monotonic_ns();
  ep.send_all(frame);
  const Message reply = await(core_id);
  record.t_end_ns = monotonic_ns();

  if (reply.type == MsgType::kError) raise_device_error(reply, "EXECUTE");
  if (reply.type != MsgType::kExecuteDone || reply.object_id != kernel_id) {
    throw ProtocolError("expected EXECUTE_DONE for kernel " + std::to_string(kernel_id) + ", got " +
                        std::string(to_string(reply.type)));
  }
  return record;
}

void HostSession::sync(std::uint16_t core_id) {
  send_message(link(core_id), make_control(MsgType::kPing, core_id));
  std::optional<Message> error;
  for (;;) {
    Message reply = await(core_id);
    if (reply.type == MsgType::kPong) break;
    if (reply.type == MsgType::kError) {
      if (!error) error = std::move(reply);
      continue;
    }
    throw ProtocolError("expected PONG, got " + std::string(to_string(reply.type)));
  }
  if (error) raise_device_error(*error, "an earlier request");
}

LatencyStats HostSession::probe_latency(std::uint16_t core_id, std::size_t repetitions) {
  if (repetitions == 0) throw InvalidArgument("latency probe needs at least one repetition");
  Endpoint& ep = link(core_id);
  const Bytes ping = encode_message(make_control(MsgType::kPing, core_id));
  std::vector<double> samples;
  samples.reserve(repetitions);
  bool partial = false;
  for (std::size_t i = 0; i < repetitions; ++i) {
    try {
      const std::int64_t t0 = monotonic_ns();
      ep.send_all(ping);
      const Message reply = await(core_id);
      const std::int64_t t1 = monotonic_ns();
      if (reply.type != MsgType::kPong) throw ProtocolError("expected PONG, got " + std::string(to_string(reply.type)));
      samples.push_back(static_cast<double>(t1 - t0) * 1e-9);
    } catch (const TransportError&) {
      if (samples.empty()) throw;
      partial = true;
      break;
    }
  }
  LatencyStats stats = summarize(std::move(samples));
  stats.partial = partial;
  return stats;
}

std::vector<BandwidthSample> HostSession::probe_bandwidth(std::uint16_t core_id, std::span<const std::size_t> sizes,
                                                          std::size_t repetitions) {
  if (repetitions == 0) throw InvalidArgument("bandwidth probe needs at least one repetition");
  for (const std::size_t size : sizes) {
    if (size == 0 || size % 4 != 0) {
      throw InvalidArgument("probe size " + std::to_string(size) + " is not a positive multiple of 4 bytes");
    }
  }
  Endpoint& ep = link(core_id);
  const Bytes ping = encode_message(make_control(MsgType::kPing, core_id));
  std::vector<BandwidthSample> out;
  for (const std::size_t size : sizes) {
    Bytes payload(size);
    for (std::size_t i = 0; i < size; ++i) payload[i] = static_cast<std::uint8_t>(i * 131u + 7u);
    const Bytes frame =
        encode_message(make_data(MsgType::kDataSend, core_id, kScratchVarId, ElementType::kInt32, std::move(payload)));

    double best = 0;
    for (std::size_t r = 0; r < repetitions; ++r) {
      // DATA_SEND has no reply, so a trailing PING marks completion.
      const std::int64_t t0 = monotonic_ns();
      ep.send_all(frame);
      ep.send_all(ping);
      Message reply = await(core_id);
      const std::int64_t t1 = monotonic_ns();
      if (reply.type == MsgType::kError) {
        (void)await(core_id);  // the PONG that follows
        throw MemoryBudgetError("probe of " + std::to_string(size) + " bytes exceeds the free scratchpad of " +
                                    core_label(core_id),
                                "probe", size);
      }
      if (reply.type != MsgType::kPong) throw ProtocolError("expected PONG, got " + std::string(to_string(reply.type)));
      const double elapsed = static_cast<double>(t1 - t0) * 1e-9;
      if (r == 0 || elapsed < best) best = elapsed;
    }
    out.push_back({size, best, static_cast<double>(size) / best / 1e6});
  }
  return out;
}

void HostSession::stop(std::uint16_t core_id) {
  Endpoint& ep = link(core_id);
  try {
    send_message(ep, make_control(MsgType::kStop, core_id));
  } catch (const TransportError&) {
  }
  ep.close();
  links_.erase(core_id);
}

}  // namespace eithne
