#include <benchmark/benchmark.h>

#include "eithne/device.hpp"
#include "eithne/host.hpp"
#include "eithne/linpack.hpp"
#include "eithne/wire.hpp"

namespace {

using namespace eithne;

Message data_frame(std::size_t floats) {
  std::vector<float> values(floats, 1.5f);
  return make_data(MsgType::kDataSend, 0, 0, ElementType::kFloat32, pack_float32(values));
}

void BM_Encode(benchmark::State& state) {
  const auto m = data_frame(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(encode_message(m));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(m.payload.size()));
}
BENCHMARK(BM_Encode)->Arg(1)->Arg(400)->Arg(16384);

void BM_Decode(benchmark::State& state) {
  const auto bytes = encode_message(data_frame(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(decode_message(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_Decode)->Arg(1)->Arg(400)->Arg(16384);

void BM_PingRoundTrip(benchmark::State& state) {
  const bool tcp = state.range(0) != 0;
  KernelProgram empty;
  auto device = spawn_device(DeviceConfig{"bench", 1, 32768, 100}, empty, tcp ? tcp_transport() : in_process_transport());
  HostSession session(empty.variables);
  session.connect(0, device.take_host_endpoint(0));
  for (auto _ : state) session.sync(0);
  state.SetLabel(tcp ? "tcp" : "in-process");
}
BENCHMARK(BM_PingRoundTrip)->Arg(0)->Arg(1);

void BM_LinpackOverLink(benchmark::State& state) {
  const auto program = linpack::make_program();
  auto device = spawn_device(DeviceConfig{"bench", 1, 32768, 100}, program, in_process_transport());
  HostSession session(program.variables);
  session.connect(0, device.take_host_endpoint(0));
  const auto problem = linpack::matgen(20, 20);
  auto a = session.variables().floats(linpack::var::kA);
  for (auto _ : state) {
    std::copy(problem.a.data.begin(), problem.a.data.end(), a.begin());
    session.send_var(0, linpack::var::kA);
    session.execute_kernel(0, linpack::kernel::kSgefa);
    session.recv_var(0, linpack::var::kA);
  }
}
BENCHMARK(BM_LinpackOverLink);

}  // namespace
