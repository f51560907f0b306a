#pragma once

// Run configuration, presets and the benchmark suite driver behind the CLI.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eithne/device.hpp"
#include "eithne/fourier.hpp"
#include "eithne/host.hpp"
#include "eithne/linpack.hpp"
#include "eithne/metrics.hpp"

namespace eithne {

enum class TransportKind { kInProcess, kTcp };

std::string_view to_string(TransportKind kind);

struct DeviceEntry {
  std::string name;
  TransportKind transport = TransportKind::kInProcess;
  /// Set for tcp devices served by a separate process; otherwise the suite
  /// spawns the device itself.
  std::optional<std::string> address;
  std::uint16_t port_base = 0;
  std::uint16_t cores = 8;
  std::size_t mem_budget_bytes = 32 * 1024;
  double clock_mhz = 100.0;
  std::uint32_t kernel_code_bytes = 0;
  std::optional<metrics::PowerRecord> power;
};

enum class BenchmarkKind { kLinpack, kDft, kFft };

std::string_view to_string(BenchmarkKind kind);

struct BenchmarkParams {
  int n = linpack::kDefaultOrder;
  int lda = linpack::kDefaultOrder;
  std::uint32_t seed = linpack::kDefaultSeed;
  int log2n = fourier::kDefaultLog2n;
  int repetitions = 5;
};

struct BenchmarkEntry {
  BenchmarkKind kind = BenchmarkKind::kLinpack;
  BenchmarkParams params;
};

struct OutputSpec {
  std::string path = "eithne-results";
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  std::vector<DeviceEntry> devices;
  std::vector<BenchmarkEntry> benchmarks;
  OutputSpec output;
  /// Run every core of a device concurrently, one session per core.
  bool replicate = false;
  std::string baseline;
  std::chrono::milliseconds timeout{60'000};
};

/// Named device shapes: paper-8x32k (8 x 32 KiB), paper-128k (4 x 128 KiB),
/// epiphany-16 (16 x 32 KiB at 600 MHz).
std::optional<DeviceEntry> preset(std::string_view name);
std::vector<std::string> preset_names();

/// One in-process paper-8x32k device running linpack n=20 and fft n=256, 5 repetitions.
RunConfig default_config();

/// Parses the JSON config; throws ConfigError naming the line or field.
RunConfig parse_config(std::string_view json_text, std::string_view source = "config");
RunConfig load_config(const std::string& path);

/// Throws ConfigError for any shape, range or memory-budget violation.
/// Never touches a transport.
void validate(const RunConfig& config);

/// The program a benchmark downloads to every core.
KernelProgram program_for(const BenchmarkEntry& bench, const DeviceEntry& device);

struct Overrides {
  std::optional<std::string> device;
  std::optional<std::string> benchmark;
  std::optional<int> repetitions;
  std::optional<std::string> output;
  std::optional<std::vector<std::string>> formats;
  /// Problem size: matrix order for linpack, point count for dft/fft.
  std::optional<int> size;
};

/// Narrows and edits the config; throws ConfigError for unknown names or bad values.
void apply(RunConfig& config, const Overrides& overrides);

/// Wraps each host-side link before the session connects; used to observe traffic.
using LinkWrapper = std::function<EndpointPtr(EndpointPtr)>;

struct SuiteResult {
  std::vector<metrics::TimingInput> timings;
  std::vector<std::string> failures;

  bool all_verified() const { return failures.empty(); }
};

/// Runs every benchmark on every device in order.
SuiteResult run_suite(const RunConfig& config, const LinkWrapper& wrap = {});

metrics::ReportInputs report_inputs(const RunConfig& config, const SuiteResult& result);

/// Writes results.csv and/or results.json under config.output.path; returns the paths written.
std::vector<std::string> write_results(const RunConfig& config, const SuiteResult& result);

struct ProbeRequest {
  std::string device;
  bool latency = true;
  std::size_t latency_repetitions = 1000;
  std::vector<std::size_t> bandwidth_sizes;
  std::size_t bandwidth_repetitions = 5;
};

struct ProbeResult {
  std::optional<LatencyStats> latency;
  std::vector<BandwidthSample> bandwidth;
};

/// Spawns (or connects to) the named device and probes core 0.
ProbeResult run_probe(const RunConfig& config, const ProbeRequest& request);

std::string render_probe_table(const ProbeResult& result);
std::string render_probe_csv(const ProbeResult& result);

}  // namespace eithne
