#include <gtest/gtest.h>

#include <functional>
#include <thread>

#include "eithne/device.hpp"
#include "eithne/error.hpp"
#include "eithne/host.hpp"
#include "eithne/linpack.hpp"

namespace eithne {
namespace {

using namespace std::chrono_literals;

KernelProgram small_program() {
  KernelProgram p;
  p.name = "small";
  p.variables = {{0, "A", VarKind::kFloatArray, 6}, {1, "N", VarKind::kIntScalar, 1}};
  p.kernels.push_back({0, "double", [](VariableTable& v) {
                         for (auto& x : v.floats(0)) x *= 2;
                         v.set_int(1, v.int_value(1) + 1);
                       }});
  p.kernels.push_back({1, "noop", [](VariableTable&) {}});
  return p;
}

// A single core served by a DeviceCore whose replies pass through `tamper`.
class ScriptedDevice {
 public:
  using Tamper = std::function<void(Message&)>;

  ScriptedDevice(const KernelProgram& program, Tamper tamper) : core_(0, 4096) {
    core_.init(program);
    auto [host, device] = make_channel_pair();
    host_ = std::move(host);
    thread_ = std::thread([this, ep = std::shared_ptr<Endpoint>(std::move(device)), tamper] {
      try {
        for (;;) {
          for (auto reply : core_.handle(recv_message(*ep))) {
            if (tamper) tamper(reply);
            send_message(*ep, reply);
          }
        }
      } catch (const TransportError&) {
      }
    });
  }
  ~ScriptedDevice() {
    if (host_) host_->close();
    thread_.join();
  }

  EndpointPtr take() { return std::move(host_); }

 private:
  DeviceCore core_;
  EndpointPtr host_;
  std::thread thread_;
};

struct Connected {
  DeviceHandle device;
  std::unique_ptr<HostSession> session;
};

Connected connect_small(std::uint16_t cores = 1) {
  Connected c;
  const auto program = small_program();
  c.device = spawn_device(DeviceConfig{"test", cores, 4096, 100}, program, in_process_transport());
  c.session = std::make_unique<HostSession>(program.variables, HostOptions{0, 5000ms});
  for (std::uint16_t id = 0; id < cores; ++id) c.session->connect(id, c.device.take_host_endpoint(id));
  return c;
}

TEST(HostSession, SendThenReceiveEchoes) {
  auto c = connect_small();
  auto a = c.session->variables().floats(0);
  const std::vector<float> values = {1.5f, -2.25f, 3.0f, 0.0f, 1e-20f, -7.0f};
  std::copy(values.begin(), values.end(), a.begin());
  c.session->send_var(0, 0);
  std::fill(a.begin(), a.end(), 99.0f);
  c.session->recv_var(0, 0);
  EXPECT_EQ(std::vector<float>(a.begin(), a.end()), values);
}

TEST(HostSession, ReceiveBeforeSendYieldsZeros) {
  auto c = connect_small();
  auto a = c.session->variables().floats(0);
  std::fill(a.begin(), a.end(), 5.0f);
  c.session->recv_var(0, 0);
  for (float x : a) EXPECT_EQ(x, 0.0f);
}

TEST(HostSession, UnregisteredVariableSendsNothing) {
  const auto program = small_program();
  auto device = spawn_device(DeviceConfig{"test", 1, 4096, 100}, program, in_process_transport());
  auto log = std::make_shared<FrameLog>();
  HostSession session(program.variables);
  session.connect(0, std::make_unique<RecordingEndpoint>(device.take_host_endpoint(0), log));
  log->clear();
  EXPECT_THROW(session.send_var(0, 42), RegistryError);
  EXPECT_THROW(session.recv_var(0, 42), RegistryError);
  EXPECT_TRUE(log->events().empty());
}

TEST(HostSession, KernelRunsOnDeviceData) {
  auto c = connect_small();
  auto& vars = c.session->variables();
  std::fill(vars.floats(0).begin(), vars.floats(0).end(), 1.25f);
  vars.set_int(1, 41);
  c.session->send_var(0, 0);
  c.session->send_var(0, 1);
  const auto t = c.session->execute_kernel(0, 0);
  EXPECT_EQ(t.kernel_id, 0);
  EXPECT_EQ(t.core_id, 0);
  EXPECT_GT(t.t_end_ns, t.t_start_ns);
  c.session->recv_var(0, 0);
  c.session->recv_var(0, 1);
  for (float x : vars.floats(0)) EXPECT_EQ(x, 2.5f);
  EXPECT_EQ(vars.int_value(1), 42);
}

TEST(HostSession, NoopKernelHasPositiveElapsed) {
  auto c = connect_small();
  EXPECT_GT(c.session->execute_kernel(0, 1).elapsed_s(), 0.0);
}

TEST(HostSession, UnknownKernelRaisesAndSessionSurvives) {
  auto c = connect_small();
  try {
    c.session->execute_kernel(0, 99);
    FAIL() << "expected DeviceError";
  } catch (const DeviceError& e) {
    EXPECT_EQ(e.code(), static_cast<std::uint16_t>(ErrorCode::kUnknownKernel));
  }
  EXPECT_NO_THROW(c.session->sync(0));
  EXPECT_NO_THROW(c.session->execute_kernel(0, 1));
}

TEST(HostSession, WrongLengthReplyIsProtocolError) {
  const auto program = small_program();
  ScriptedDevice device(program, [](Message& m) {
    if (m.type == MsgType::kDataResponse) {
      m.payload.resize(8);
      m.count = 2;
    }
  });
  HostSession session(program.variables, HostOptions{0, 5000ms});
  session.connect(0, device.take());
  EXPECT_THROW(session.recv_var(0, 0), ProtocolError);
}

TEST(HostSession, WrongReplyTypeIsProtocolError) {
  const auto program = small_program();
  ScriptedDevice device(program, [](Message& m) {
    if (m.type == MsgType::kExecuteDone) m.type = MsgType::kPong;
  });
  HostSession session(program.variables, HostOptions{0, 5000ms});
  session.connect(0, device.take());
  EXPECT_THROW(session.execute_kernel(0, 1), ProtocolError);
}

TEST(HostSession, HandshakeRejectsMismatchedTables) {
  const auto program = small_program();
  auto device = spawn_device(DeviceConfig{"test", 1, 4096, 100}, program, in_process_transport());
  std::vector<VariableSpec> other = {{0, "A", VarKind::kFloatArray, 7}, {1, "N", VarKind::kIntScalar, 1}};
  HostSession session(other);
  EXPECT_THROW(session.connect(0, device.take_host_endpoint(0)), ProtocolError);
  EXPECT_FALSE(session.connected(0));
}

TEST(HostSession, SilentDeviceTimesOut) {
  auto [host, device] = make_channel_pair();
  HostSession session(small_program().variables, HostOptions{0, 100ms});
  EXPECT_THROW(session.connect(0, std::move(host)), TimeoutError);
  EXPECT_FALSE(session.connected(0));
}

TEST(HostSession, LatencySingleRepetition) {
  auto c = connect_small();
  const auto s = c.session->probe_latency(0, 1);
  EXPECT_EQ(s.samples, 1u);
  EXPECT_EQ(s.min_s, s.median_s);
  EXPECT_EQ(s.median_s, s.mean_s);
  EXPECT_FALSE(s.partial);
}

TEST(HostSession, InProcessLatencyIsSubMillisecond) {
  auto c = connect_small();
  const auto s = c.session->probe_latency(0, 1000);
  EXPECT_EQ(s.samples, 1000u);
  EXPECT_LE(s.min_s, s.median_s);
  EXPECT_LT(s.median_s, 1e-3);
  EXPECT_THROW(c.session->probe_latency(0, 0), InvalidArgument);
}

TEST(HostSession, BandwidthSamplesEachSize) {
  auto c = connect_small();
  const std::vector<std::size_t> sizes = {4, 64, 1024, 2048};
  const auto samples = c.session->probe_bandwidth(0, sizes, 3);
  ASSERT_EQ(samples.size(), sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    EXPECT_EQ(samples[i].bytes, sizes[i]);
    EXPECT_GT(samples[i].elapsed_s, 0.0);
    EXPECT_NEAR(samples[i].mb_per_s, sizes[i] / samples[i].elapsed_s / 1e6, 1e-9 * samples[i].mb_per_s);
  }
}

TEST(HostSession, BandwidthRejectsBadSizes) {
  auto c = connect_small();
  const std::vector<std::size_t> odd = {6};
  EXPECT_THROW(c.session->probe_bandwidth(0, odd, 1), InvalidArgument);
  const std::vector<std::size_t> huge = {8192};
  EXPECT_THROW(c.session->probe_bandwidth(0, huge, 1), MemoryBudgetError);
  EXPECT_NO_THROW(c.session->sync(0));
}

TEST(HostSession, CoresKeepSeparateState) {
  auto c = connect_small(4);
  auto& vars = c.session->variables();
  for (std::uint16_t id = 0; id < 4; ++id) {
    vars.set_int(1, id * 10);
    c.session->send_var(id, 1);
  }
  for (std::uint16_t id = 0; id < 4; ++id) {
    c.session->execute_kernel(id, 0);
    c.session->recv_var(id, 1);
    EXPECT_EQ(vars.int_value(1), id * 10 + 1);
  }
}

TEST(HostSession, StopReleasesTheLink) {
  auto c = connect_small();
  c.session->stop(0);
  EXPECT_FALSE(c.session->connected(0));
  EXPECT_THROW(c.session->sync(0), Error);
}

TEST(Summarize, EvenAndOddSampleCounts) {
  const auto odd = summarize({3.0, 1.0, 2.0});
  EXPECT_EQ(odd.min_s, 1.0);
  EXPECT_EQ(odd.median_s, 2.0);
  EXPECT_EQ(odd.mean_s, 2.0);
  const auto even = summarize({4.0, 1.0, 2.0, 3.0});
  EXPECT_EQ(even.median_s, 2.5);
  EXPECT_THROW(summarize({}), InvalidArgument);
}

}  // namespace
}  // namespace eithne
