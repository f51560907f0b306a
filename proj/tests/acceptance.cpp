// Acceptance suite: one PASS/FAIL line per criterion.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "eithne/device.hpp"
#include "eithne/error.hpp"
#include "eithne/flows.hpp"
#include "eithne/fourier.hpp"
#include "eithne/host.hpp"
#include "eithne/linpack.hpp"
#include "eithne/metrics.hpp"
#include "eithne/suite.hpp"
#include "eithne/transport.hpp"
#include "eithne/wire.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "process.hpp"

namespace {

using namespace eithne;
using namespace std::chrono_literals;

const std::string kFixtures = EITHNE_FIXTURES;
const std::string kCli = EITHNE_CLI;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string fmt(double v) { return metrics::format_number(v); }

Outcome protocol_soundness() {
  Outcome o;
  std::mt19937 rng(1);
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const Message m = testing::random_message(rng);
    const Bytes bytes = encode_message(m);
    const auto d = decode_message(bytes);
    o.require(d.message == m && d.consumed == bytes.size() && encode_message(d.message) == bytes,
              "roundtrip mismatch at case " + std::to_string(i));
  }
  std::vector<Message> three;
  Bytes stream;
  for (int i = 0; i < 3; ++i) {
    three.push_back(testing::random_message(rng));
    const auto b = encode_message(three.back());
    stream.insert(stream.end(), b.begin(), b.end());
  }
  std::span<const std::uint8_t> rest(stream);
  for (const auto& m : three) {
    const auto d = decode_message(rest);
    o.require(d.message == m, "concatenated frame decoded differently");
    rest = rest.subspan(d.consumed);
  }
  o.require(rest.empty(), "trailing bytes after three frames");
  return o;
}

template <typename T>
bool bit_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

Outcome framework_equivalence() {
  Outcome o;
  auto direct_lin = linpack::matgen(20, 20, linpack::kDefaultSeed);
  const auto problem = direct_lin;
  linpack::solve_in_place(direct_lin);

  const auto signal = fourier::make_test_signal(256, 1);
  const auto spectrum = fourier::fft(signal, false);
  auto roundtrip = fourier::fft(spectrum, true);
  fourier::scale(roundtrip, 1.0f / 256.0f);

  const std::pair<const char*, TransportFactory> transports[] = {{"in-process", in_process_transport()},
                                                                 {"tcp", tcp_transport()}};
  for (const auto& [name, factory] : transports) {
    const std::string tag = name;
    {
      const auto program = linpack::make_program(20, 20);
      auto device = spawn_device(DeviceConfig{"sim", 1, 32768, 100}, program, factory);
      HostSession session(program.variables, HostOptions{0, 10'000ms});
      session.connect(0, device.take_host_endpoint(0));
      const auto out = run_linpack(session, 0, problem);
      o.require(out.info == direct_lin.info, tag + " LINPACK info differs");
      o.require(bit_equal(out.lu, direct_lin.a.data), tag + " LU factors differ");
      o.require(bit_equal(out.ipvt, direct_lin.ipvt), tag + " pivots differ");
      o.require(bit_equal(out.x, direct_lin.b), tag + " solution differs");
    }
    {
      const auto program = fourier::make_program(8);
      auto device = spawn_device(DeviceConfig{"sim", 1, 32768, 100}, program, factory);
      HostSession session(program.variables, HostOptions{0, 10'000ms});
      session.connect(0, device.take_host_endpoint(0));
      const auto out = run_fourier(session, 0, fourier::kernel::kFft, signal);
      o.require(bit_equal(fourier::interleave(out.spectrum), fourier::interleave(spectrum)), tag + " FFT spectrum differs");
      o.require(bit_equal(fourier::interleave(out.roundtrip), fourier::interleave(roundtrip)), tag + " inverse FFT differs");
    }
  }
  return o;
}

Outcome linpack_correctness() {
  Outcome o;
  auto p = linpack::matgen(20, 20, 1325);
  linpack::solve_in_place(p);
  o.require(p.info == 0, "sgefa info " + std::to_string(p.info));
  const double xerr = linpack::residual_check(p, p.b).x_err_norm;
  o.require(xerr <= 1e-4, "max|x-1| = " + fmt(xerr));

  double worst = 0;
  for (std::uint32_t seed = 1; seed <= 20; ++seed) {
    auto q = linpack::matgen(20, 20, seed * 2654435761u);
    std::vector<std::int32_t> ipvt(20);
    if (linpack::sgefa(q.a.data, 20, 20, ipvt) != 0) {
      o.require(false, "zero pivot for seed " + std::to_string(seed));
      continue;
    }
    const auto r = oracle::reconstruct_plu(q.a.data, 20, 20, ipvt);
    for (int j = 0; j < 20; ++j) {
      for (int i = 0; i < 20; ++i) worst = std::max(worst, std::fabs(r[i + j * 20] - q.a_orig(i, j)));
    }
  }
  o.require(worst <= 1e-4, "PLU reconstruction error " + fmt(worst));
  if (o.pass) o.detail = "max|x-1| " + fmt(xerr) + ", PLU error " + fmt(worst);
  return o;
}

Outcome fourier_correctness() {
  Outcome o;
  double worst_ratio = 0;
  double worst_roundtrip = 0;
  double worst_parseval = 0;
  for (std::uint32_t seed = 1; seed <= 10; ++seed) {
    for (std::size_t n = 1; n <= 1024; n *= 2) {
      // Size-scaled bound: 1e-4, or 1e-6 * n for larger transforms.
      const double tol = std::max(1e-4, 1e-6 * static_cast<double>(n));
      const auto x = fourier::make_test_signal(n, seed);
      std::vector<std::complex<double>> wide;
      for (const auto& c : x) wide.emplace_back(c.a, c.b);
      for (bool inv : {false, true}) {
        const auto got = fourier::fft(x, inv);
        const auto want = oracle::dft(wide, inv);
        double err = 0;
        for (std::size_t k = 0; k < n; ++k) {
          err = std::max({err, std::fabs(got[k].a - want[k].real()), std::fabs(got[k].b - want[k].imag())});
        }
        worst_ratio = std::max(worst_ratio, err / tol);
        o.require(err <= tol, "FFT vs DFT error " + fmt(err) + " at n=" + std::to_string(n));
      }
      const auto f = fourier::fft(x, false);
      auto back = fourier::fft(f, true);
      fourier::scale(back, 1.0f / static_cast<float>(n));
      double rt = 0;
      double time = 0;
      double freq = 0;
      for (std::size_t k = 0; k < n; ++k) {
        rt = std::max({rt, static_cast<double>(std::fabs(back[k].a - x[k].a)), static_cast<double>(std::fabs(back[k].b - x[k].b))});
        time += double{x[k].a} * x[k].a + double{x[k].b} * x[k].b;
        freq += double{f[k].a} * f[k].a + double{f[k].b} * f[k].b;
      }
      worst_roundtrip = std::max(worst_roundtrip, rt);
      const double parseval = std::fabs(freq / static_cast<double>(n) - time) / time;
      worst_parseval = std::max(worst_parseval, parseval);
    }
  }
  o.require(worst_roundtrip <= 1e-4, "roundtrip error " + fmt(worst_roundtrip));
  o.require(worst_parseval <= 1e-3, "Parseval relative error " + fmt(worst_parseval));
  if (o.pass) {
    o.detail = "worst FFT error " + fmt(worst_ratio) + " of bound, roundtrip " + fmt(worst_roundtrip) + ", Parseval " +
               fmt(worst_parseval);
  }
  return o;
}

Outcome arithmetic_regression() {
  Outcome o;
  const auto report = metrics::build_report(metrics::load_inputs(kFixtures + "/tables2-3.json"));
  auto row = [&](const std::string& device, const std::string& bench) -> const metrics::ReportRow& {
    for (const auto& r : report.rows) {
      if (r.device == device && r.benchmark == bench) return r;
    }
    throw Error("fixture has no " + device + "/" + bench + " row");
  };
  const auto& e3 = row("Epiphany-III", "fft");
  const auto& fpu_dft = row("MicroBlaze+FPU", "dft");
  const auto& fpu_fft = row("MicroBlaze+FPU", "fft");
  struct Check {
    const char* what;
    double value;
    double quoted;
  };
  const Check checks[] = {
      {"speedup", *e3.speedup_vs_baseline, 653},
      {"speedup", *fpu_dft.speedup_vs_baseline, 13.7},
      {"clock-normalized speedup", *e3.clock_normalized_speedup_vs_baseline, 109},
      {"energy ratio", *e3.energy_ratio_vs_baseline, 328},
      {"energy ratio", *fpu_fft.energy_ratio_vs_baseline, 12},
      {"W/core", *e3.watts_per_core, 0.27},
      {"W/core at 100 MHz", *e3.watts_per_core_at_ref, 0.045},
      {"power fraction", *fpu_fft.baseline_power_fraction, 0.862},
  };
  std::string misses;
  std::string summary;
  for (const auto& c : checks) {
    const double off = std::fabs(c.value - c.quoted) / c.quoted;
    if (off > 0.005) {
      o.pass = false;
      misses += (misses.empty() ? "" : "; ") + std::string(c.what) + " " + fmt(c.value) + " vs " + fmt(c.quoted) +
                " (" + fmt(100 * off) + "% off)";
    }
    summary += (summary.empty() ? "" : ", ") + fmt(c.value);
  }
  o.detail = o.pass ? summary : misses;
  return o;
}

Outcome memory_budget() {
  Outcome o;
  const auto fft13 = fourier::make_program(13);

  DeviceCore small(0, 32 * 1024);
  small.init(linpack::make_program());
  const auto before = small.used_bytes();
  try {
    small.init(fft13);
    o.require(false, "2^13-point FFT accepted on a 32 KiB core");
  } catch (const MemoryBudgetError& e) {
    o.require(small.used_bytes() == before && small.variables().size() == 5 &&
                  small.variables().descriptor(linpack::var::kA).length == 400,
              "rejected init changed the core");
  }

  int links = 0;
  TransportFactory counting = [&](std::uint16_t id) {
    ++links;
    return in_process_transport()(id);
  };
  try {
    spawn_device(DeviceConfig{"small", 8, 32 * 1024, 100}, fft13, counting);
    o.require(false, "spawn accepted an over-budget program");
  } catch (const MemoryBudgetError&) {
    o.require(links == 0, "links were created before the budget check");
  }

  const auto large = *preset("paper-128k");
  DeviceCore big(0, large.mem_budget_bytes);
  try {
    big.init(fft13);
  } catch (const MemoryBudgetError& e) {
    o.require(false, std::string("128 KiB preset rejects the 2^13-point FFT: ") + e.what());
  }
  return o;
}

Outcome window_purity() {
  Outcome o;
  auto log = std::make_shared<FrameLog>();
  const RunConfig config = default_config();
  const auto result =
      run_suite(config, [&](EndpointPtr ep) { return std::make_unique<RecordingEndpoint>(std::move(ep), log); });
  o.require(result.all_verified(), "default suite failed verification");
  const auto events = log->events();
  bool open = false;
  int windows = 0;
  int data_inside = 0;
  for (const auto& e : events) {
    if (e.direction == Direction::kSent && e.type == MsgType::kExecute) {
      open = true;
      ++windows;
    } else if (e.direction == Direction::kReceived && e.type == MsgType::kExecuteDone) {
      open = false;
    } else if (open && is_data_frame(e.type)) {
      ++data_inside;
    }
  }
  int expected = 0;
  for (const auto& b : config.benchmarks) expected += 2 * b.params.repetitions;
  o.require(windows == expected, std::to_string(windows) + " timed windows, expected " + std::to_string(expected));
  o.require(data_inside == 0, std::to_string(data_inside) + " DATA frames inside timed windows");
  if (o.pass) o.detail = std::to_string(windows) + " windows, " + std::to_string(events.size()) + " frames";
  return o;
}

Outcome cli_contract() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("eithne-acceptance-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string cli = testing::quote(kCli);

  const auto run = testing::run_command(cli + " run --output " + testing::quote((dir / "out").string()) + " 2>&1");
  o.require(run.exit_code == 0, "default run exited " + std::to_string(run.exit_code) + ": " + run.out);
  o.require(run.out.find(" NO") == std::string::npos, "default run reported unverified results");

  TcpListener listener(0);
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << R"({"devices": [{"name": "r", "transport": "tcp", "address": "127.0.0.1", "port_base": )"
                     << listener.port() << R"(, "cores": 1}], "benchmarks": [{"name": "fft", "params": {"log2n": 13}}]})";
  const auto invalid = testing::run_command(cli + " run --config " + testing::quote(bad.string()) + " 2>&1");
  o.require(invalid.exit_code == 2, "invalid config exited " + std::to_string(invalid.exit_code));
  bool connected = true;
  try {
    listener.accept(100ms);
  } catch (const TimeoutError&) {
    connected = false;
  }
  o.require(!connected, "invalid config still connected to the device");

  const std::string report = cli + " report " + testing::quote(kFixtures + "/tables2-3.json") + " --code-sizes " +
                             testing::quote(kFixtures + "/code-sizes.json") + " --format csv,json";
  const auto first = testing::run_command(report);
  const auto second = testing::run_command(report);
  o.require(first.exit_code == 0 && second.exit_code == 0, "report failed");
  o.require(!first.out.empty() && first.out == second.out, "report output differs between invocations");
  std::filesystem::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {"protocol soundness", protocol_soundness},
      {"framework equivalence", framework_equivalence},
      {"LINPACK correctness", linpack_correctness},
      {"Fourier correctness", fourier_correctness},
      {"metrics arithmetic", arithmetic_regression},
      {"memory budget", memory_budget},
      {"timed-window purity", window_purity},
      {"CLI contract", cli_contract},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %d %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", index, c.name, secs, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
