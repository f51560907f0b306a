// eithne: run benchmark suites on simulated devices, probe links and build reports.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eithne/error.hpp"
#include "eithne/metrics.hpp"
#include "eithne/suite.hpp"

namespace {

enum Exit : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kTransportError = 3 };

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw eithne::ConfigError("--size", "'" + item + "' is not a byte count");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  return sizes;
}

eithne::RunConfig load(const std::string& config_path) {
  eithne::RunConfig config = config_path.empty() ? eithne::default_config() : eithne::load_config(config_path);
  if (const char* env = std::getenv("EITHNE_PORT_BASE")) {
    char* end = nullptr;
    const long port = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || port < 1 || port > 65535) {
      throw eithne::ConfigError("EITHNE_PORT_BASE", std::string("'") + env + "' is not a port number");
    }
    for (auto& d : config.devices) {
      if (d.transport == eithne::TransportKind::kTcp && d.port_base == 0) d.port_base = static_cast<std::uint16_t>(port);
    }
  }
  return config;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw eithne::Error("cannot write '" + path.string() + "'");
}

void print_summary(const eithne::SuiteResult& result) {
  struct Key {
    std::string device, benchmark, kernel;
    bool operator<(const Key& o) const {
      return std::tie(device, benchmark, kernel) < std::tie(o.device, o.benchmark, o.kernel);
    }
  };
  std::map<Key, std::vector<double>> samples;
  std::map<Key, bool> verified;
  std::vector<Key> order;
  for (const auto& t : result.timings) {
    Key k{t.device, t.benchmark, t.kernel};
    if (!samples.count(k)) order.push_back(k);
    samples[k].push_back(t.elapsed_s);
    auto [it, inserted] = verified.emplace(k, true);
    it->second = it->second && t.verified.value_or(false);
  }
  std::printf("%-16s %-8s %-8s %5s %14s %14s %14s  %s\n", "device", "bench", "kernel", "reps", "min_s", "median_s",
              "mean_s", "verified");
  for (const auto& k : order) {
    const auto s = eithne::summarize(samples[k]);
    std::printf("%-16s %-8s %-8s %5zu %14.6e %14.6e %14.6e  %s\n", k.device.c_str(), k.benchmark.c_str(),
                k.kernel.c_str(), s.samples, s.min_s, s.median_s, s.mean_s, verified[k] ? "yes" : "NO");
  }
}

int cmd_run(const std::string& config_path, const eithne::Overrides& overrides, bool replicate) {
  eithne::RunConfig config = load(config_path);
  eithne::apply(config, overrides);
  if (replicate) config.replicate = true;
  eithne::validate(config);

  const auto result = eithne::run_suite(config);
  print_summary(result);
  for (const auto& path : eithne::write_results(config, result)) std::printf("wrote %s\n", path.c_str());
  if (!result.all_verified()) {
    std::fprintf(stderr, "verification failed:\n");
    for (const auto& f : result.failures) std::fprintf(stderr, "  %s\n", f.c_str());
    return kVerifyFailed;
  }
  return kOk;
}

int cmd_probe(const std::string& config_path, const std::string& device, bool latency, bool bandwidth,
              const std::string& sizes_text, std::optional<int> repeat, const std::optional<std::string>& output) {
  eithne::RunConfig config = load(config_path);
  eithne::ProbeRequest request;
  request.device = device.empty() ? config.devices.front().name : device;
  request.latency = latency || !bandwidth;
  if (bandwidth) {
    request.bandwidth_sizes = parse_sizes(sizes_text.empty() ? "4096,16384" : sizes_text);
    if (request.bandwidth_sizes.empty()) throw eithne::ConfigError("--size", "no bandwidth sizes given");
  }
  if (repeat) {
    if (*repeat < 1) throw eithne::ConfigError("--repeat", "must be >= 1");
    request.latency_repetitions = request.bandwidth_repetitions = static_cast<std::size_t>(*repeat);
  }
  if (output) config.output.path = *output;

  const auto result = eithne::run_probe(config, request);
  std::fputs(eithne::render_probe_table(result).c_str(), stdout);
  const auto path = std::filesystem::path(config.output.path) / "probe.csv";
  write_file(path, eithne::render_probe_csv(result));
  std::printf("wrote %s\n", path.string().c_str());
  return kOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& code_sizes, const std::string& baseline,
               const std::optional<std::string>& output, const std::vector<std::string>& formats) {
  if (inputs.empty()) throw eithne::ConfigError("inputs", "no input files given");
  bool csv = false;
  bool json = false;
  for (const auto& f : formats) {
    if (f == "csv") {
      csv = true;
    } else if (f == "json") {
      json = true;
    } else {
      throw eithne::ConfigError("--format", "expected csv or json, got '" + f + "'");
    }
  }
  if (!csv && !json) csv = true;

  eithne::metrics::ReportInputs merged;
  for (const auto& path : inputs) eithne::metrics::merge_into(merged, eithne::metrics::load_inputs(path));
  if (!code_sizes.empty()) {
    auto sizes = eithne::metrics::load_code_sizes(code_sizes);
    merged.code_sizes.insert(merged.code_sizes.end(), sizes.begin(), sizes.end());
  }
  if (!baseline.empty()) merged.baseline = baseline;
  const auto report = eithne::metrics::build_report(merged);

  if (output) {
    const std::filesystem::path dir(*output);
    auto emit = [&](const char* name, const std::string& body) {
      write_file(dir / name, body);
      std::printf("wrote %s\n", (dir / name).string().c_str());
    };
    if (csv) emit("report.csv", eithne::metrics::render_csv(report));
    if (json) emit("report.json", eithne::metrics::render_json(report));
    if (!report.code_sizes.empty()) {
      if (csv) emit("code-sizes.csv", eithne::metrics::render_code_sizes_csv(report));
      if (json) emit("code-sizes.json", eithne::metrics::render_code_sizes_json(report));
    }
    return kOk;
  }
  if (csv) {
    std::fputs(eithne::metrics::render_csv(report).c_str(), stdout);
    if (!report.code_sizes.empty()) {
      std::fputs("\r\n", stdout);
      std::fputs(eithne::metrics::render_code_sizes_csv(report).c_str(), stdout);
    }
  }
  if (json) {
    std::fputs(eithne::metrics::render_json(report).c_str(), stdout);
    if (!report.code_sizes.empty()) std::fputs(eithne::metrics::render_code_sizes_json(report).c_str(), stdout);
  }
  return kOk;
}

int cmd_list_devices(const std::string& config_path) {
  std::printf("%-16s %-10s %6s %12s %10s  %s\n", "name", "transport", "cores", "budget_B", "clock_MHz", "source");
  for (const auto& name : eithne::preset_names()) {
    const auto d = *eithne::preset(name);
    std::printf("%-16s %-10s %6u %12zu %10g  preset\n", d.name.c_str(), std::string(to_string(d.transport)).c_str(),
                static_cast<unsigned>(d.cores), d.mem_budget_bytes, d.clock_mhz);
  }
  const eithne::RunConfig config = load(config_path);
  for (const auto& d : config.devices) {
    std::printf("%-16s %-10s %6u %12zu %10g  %s\n", d.name.c_str(), std::string(to_string(d.transport)).c_str(),
                static_cast<unsigned>(d.cores), d.mem_budget_bytes, d.clock_mhz,
                config_path.empty() ? "default config" : config_path.c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark kernels on simulated micro-core devices"};
  app.require_subcommand(1);

  std::string config_path;
  eithne::Overrides overrides;
  std::string device;
  std::string benchmark;
  int repeat = 0;
  std::string output;
  std::string format;
  std::string size;
  bool replicate = false;

  auto* run = app.add_subcommand("run", "Run the configured benchmark suite");
  run->add_option("--config", config_path, "Run configuration (JSON); built-in default when omitted");
  run->add_option("--device", device, "Only run on this device");
  run->add_option("--benchmark", benchmark, "Only run this benchmark: linpack, dft or fft");
  run->add_option("--repeat", repeat, "Repetitions per benchmark");
  run->add_option("--output", output, "Output directory");
  run->add_option("--format", format, "Output formats, e.g. csv,json");
  run->add_option("--size", size, "Matrix order (linpack) or point count (dft, fft)");
  run->add_flag("--replicate", replicate, "Run every core concurrently");

  bool latency = false;
  bool bandwidth = false;
  std::string bandwidth_sizes;
  auto* probe = app.add_subcommand("probe", "Measure link latency and bandwidth");
  probe->add_option("--config", config_path, "Run configuration (JSON)");
  probe->add_option("--device", device, "Device to probe; first configured device by default");
  probe->add_flag("--latency", latency, "PING/PONG round-trip latency");
  auto* bw = probe->add_option("--bandwidth", bandwidth_sizes, "DATA_SEND bandwidth, optionally with sizes")
                 ->expected(0, 1);
  probe->add_option("--size", size, "Comma-separated bandwidth sizes in bytes");
  probe->add_option("--repeat", repeat, "Repetitions per measurement");
  probe->add_option("--output", output, "Output directory");

  std::vector<std::string> inputs;
  std::string code_sizes;
  std::string baseline;
  auto* report = app.add_subcommand("report", "Derive metrics from timing and power inputs");
  report->add_option("inputs", inputs, "Input JSON files");
  report->add_option("--code-sizes", code_sizes, "Kernel binary sizes (JSON)");
  report->add_option("--baseline", baseline, "Device the ratio columns compare against");
  report->add_option("--output", output, "Write report files here instead of stdout");
  report->add_option("--format", format, "csv, json or csv,json");

  auto* list = app.add_subcommand("list-devices", "Show presets and configured devices");
  list->add_option("--config", config_path, "Run configuration (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };

  try {
    if (run->parsed()) {
      if (given(run, "--device")) overrides.device = device;
      if (given(run, "--benchmark")) overrides.benchmark = benchmark;
      if (given(run, "--repeat")) overrides.repetitions = repeat;
      if (given(run, "--output")) overrides.output = output;
      if (given(run, "--format")) overrides.formats = split_list(format);
      if (given(run, "--size")) {
        try {
          overrides.size = std::stoi(size);
        } catch (const std::exception&) {
          throw eithne::ConfigError("--size", "'" + size + "' is not a number");
        }
      }
      return cmd_run(config_path, overrides, replicate);
    }
    if (probe->parsed()) {
      const bool want_bandwidth = bw->count() > 0;
      const std::string sizes_text = !bandwidth_sizes.empty() ? bandwidth_sizes : size;
      return cmd_probe(config_path, device, latency, want_bandwidth, sizes_text,
                       given(probe, "--repeat") ? std::optional<int>(repeat) : std::nullopt,
                       given(probe, "--output") ? std::optional<std::string>(output) : std::nullopt);
    }
    if (report->parsed()) {
      return cmd_report(inputs, code_sizes, baseline,
                        given(report, "--output") ? std::optional<std::string>(output) : std::nullopt,
                        split_list(format));
    }
    return cmd_list_devices(config_path);
  } catch (const eithne::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const eithne::MemoryBudgetError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const eithne::ReportError& e) {
    std::fprintf(stderr, "report error: %s\n", e.what());
    return kConfigError;
  } catch (const eithne::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kTransportError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kTransportError;
  }
}
