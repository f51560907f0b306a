#include "eithne/suite.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "eithne/error.hpp"
#include "eithne/flows.hpp"
#include "json_fields.hpp"

namespace eithne {

using detail::Json;

std::string_view to_string(TransportKind kind) { return kind == TransportKind::kTcp ? "tcp" : "in-process"; }

std::string_view to_string(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::kLinpack:
      return "linpack";
    case BenchmarkKind::kDft:
      return "dft";
    case BenchmarkKind::kFft:
      return "fft";
  }
  return "unknown";
}

namespace {

std::optional<BenchmarkKind> benchmark_kind(std::string_view name) {
  if (name == "linpack") return BenchmarkKind::kLinpack;
  if (name == "dft") return BenchmarkKind::kDft;
  if (name == "fft") return BenchmarkKind::kFft;
  return std::nullopt;
}

void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(detail::join_path(path, key), "unknown field");
    }
  }
}

template <typename T>
T in_range(long long v, long long lo, long long hi, const std::string& field) {
  if (v < lo || v > hi) {
    throw ConfigError(field, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                                 std::to_string(v));
  }
  return static_cast<T>(v);
}

int log2_exact(long long points, const std::string& field) {
  if (points < 1 || !fourier::is_power_of_two(static_cast<std::size_t>(points))) {
    throw ConfigError(field, "point count " + std::to_string(points) + " is not a power of two");
  }
  int k = 0;
  while ((1LL << k) < points) ++k;
  return k;
}

DeviceEntry parse_device(const Json& d, const std::string& path) {
  using namespace detail;
  require_object(d, path);
  check_keys(d,
             {"name", "preset", "transport", "address", "port_base", "cores", "mem_budget_bytes", "clock_mhz",
              "kernel_code_bytes", "power"},
             path);
  DeviceEntry dev;
  if (auto p = opt_string(d, "preset", path)) {
    auto base = preset(*p);
    if (!base) throw ConfigError(path + ".preset", "unknown preset '" + *p + "'");
    dev = *base;
  }
  if (auto name = opt_string(d, "name", path)) {
    dev.name = *name;
  } else if (dev.name.empty()) {
    throw ConfigError(path + ".name", "missing required field");
  }
  if (dev.name.empty()) throw ConfigError(path + ".name", "must not be empty");
  if (auto t = opt_string(d, "transport", path)) {
    if (*t == "in-process") {
      dev.transport = TransportKind::kInProcess;
    } else if (*t == "tcp") {
      dev.transport = TransportKind::kTcp;
    } else {
      throw ConfigError(path + ".transport", "expected \"in-process\" or \"tcp\", got \"" + *t + "\"");
    }
  }
  dev.address = opt_string(d, "address", path);
  if (dev.address && dev.transport != TransportKind::kTcp) {
    throw ConfigError(path + ".address", "only tcp devices take an address");
  }
  if (auto v = opt_integer(d, "port_base", path)) dev.port_base = in_range<std::uint16_t>(*v, 0, 65535, path + ".port_base");
  if (auto v = opt_integer(d, "cores", path)) dev.cores = in_range<std::uint16_t>(*v, 1, 4096, path + ".cores");
  if (auto v = opt_integer(d, "mem_budget_bytes", path)) {
    dev.mem_budget_bytes = in_range<std::size_t>(*v, 1, 1LL << 32, path + ".mem_budget_bytes");
  }
  if (auto v = opt_number(d, "clock_mhz", path)) {
    if (!(*v > 0)) throw ConfigError(path + ".clock_mhz", "must be > 0");
    dev.clock_mhz = *v;
  }
  if (auto v = opt_integer(d, "kernel_code_bytes", path)) {
    dev.kernel_code_bytes = in_range<std::uint32_t>(*v, 0, 1LL << 31, path + ".kernel_code_bytes");
  }
  if (const Json* p = find(d, "power")) {
    const std::string pp = path + ".power";
    require_object(*p, pp);
    check_keys(*p, {"idle_w", "load_w"}, pp);
    metrics::PowerRecord rec{dev.name, get_number(*p, "idle_w", pp), get_number(*p, "load_w", pp)};
    if (!(rec.idle_w > 0)) throw ConfigError(pp + ".idle_w", "must be > 0");
    if (!(rec.load_w >= rec.idle_w)) throw ConfigError(pp + ".load_w", "must be >= idle_w");
    dev.power = rec;
  }
  return dev;
}

BenchmarkEntry parse_benchmark(const Json& b, const std::string& path) {
  using namespace detail;
  require_object(b, path);
  check_keys(b, {"name", "params"}, path);
  const std::string name = get_string(b, "name", path);
  const auto kind = benchmark_kind(name);
  if (!kind) throw ConfigError(path + ".name", "expected linpack, dft or fft, got \"" + name + "\"");
  BenchmarkEntry bench{*kind, {}};
  if (const Json* p = find(b, "params")) {
    const std::string pp = path + ".params";
    require_object(*p, pp);
    check_keys(*p, {"n", "lda", "seed", "log2n", "points", "repetitions"}, pp);
    auto& params = bench.params;
    if (auto v = opt_integer(*p, "n", pp)) {
      params.n = in_range<int>(*v, 1, 4096, pp + ".n");
      params.lda = params.n;
    }
    if (auto v = opt_integer(*p, "lda", pp)) params.lda = in_range<int>(*v, 1, 4096, pp + ".lda");
    if (auto v = opt_integer(*p, "seed", pp)) params.seed = in_range<std::uint32_t>(*v, 0, 0xFFFFFFFFLL, pp + ".seed");
    if (auto v = opt_integer(*p, "log2n", pp)) params.log2n = in_range<int>(*v, 0, 24, pp + ".log2n");
    if (auto v = opt_integer(*p, "points", pp)) params.log2n = log2_exact(*v, pp + ".points");
    if (auto v = opt_integer(*p, "repetitions", pp)) params.repetitions = in_range<int>(*v, 1, 1000000, pp + ".repetitions");
  }
  return bench;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DeviceConfig device_config(const DeviceEntry& dev) {
  return DeviceConfig{dev.name, dev.cores, dev.mem_budget_bytes, dev.clock_mhz};
}

// Host-side links for the cores a run uses, either to a device this process
// spawns or to a separate device process.
struct Attached {
  DeviceHandle handle;
  std::vector<EndpointPtr> links;
};

Attached attach(const DeviceEntry& dev, const KernelProgram& program, std::uint16_t cores_used,
                std::chrono::milliseconds timeout) {
  Attached out;
  if (dev.address) {
    for (std::uint16_t id = 0; id < cores_used; ++id) {
      out.links.push_back(tcp_connect(*dev.address, static_cast<std::uint16_t>(dev.port_base + id), timeout));
    }
    return out;
  }
  const TransportFactory factory =
      dev.transport == TransportKind::kTcp ? tcp_transport(dev.port_base) : in_process_transport();
  out.handle = spawn_device(device_config(dev), program, factory);
  for (std::uint16_t id = 0; id < cores_used; ++id) out.links.push_back(out.handle.take_host_endpoint(id));
  return out;
}

struct Sample {
  std::string kernel;
  double elapsed_s = 0;
  std::optional<double> ops;
  bool verified = false;
};

using Repetition = std::vector<Sample>;

double max_abs_diff(const std::vector<fourier::Complex>& x, const std::vector<fourier::Complex>& y) {
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max({worst, std::abs(static_cast<double>(x[i].a) - y[i].a),
                      std::abs(static_cast<double>(x[i].b) - y[i].b)});
  }
  return worst;
}

Repetition linpack_repetition(HostSession& session, std::uint16_t core, const BenchmarkParams& p,
                              std::vector<std::string>& notes) {
  const auto problem = linpack::matgen(p.n, p.lda, p.seed);
  const auto out = run_linpack(session, core, problem);
  bool ok = out.info == 0;
  if (!ok) {
    notes.push_back("sgefa reported a zero pivot (info " + std::to_string(out.info) + ")");
  } else {
    const auto r = linpack::residual_check(problem, out.x);
    double norm_a = 0;
    for (int j = 0; j < p.n; ++j) {
      for (int i = 0; i < p.n; ++i) norm_a = std::max(norm_a, std::abs(static_cast<double>(problem.a_orig(i, j))));
    }
    double norm_x = 0;
    for (const float v : out.x) norm_x = std::max(norm_x, std::abs(static_cast<double>(v)));
    const double normalized = r.residual_norm / (p.n * norm_a * norm_x * FLT_EPSILON);
    if (!(normalized <= 100.0)) {
      ok = false;
      notes.push_back("normalized residual " + metrics::format_number(normalized) + " exceeds 100");
    }
  }
  Repetition rep;
  rep.push_back({"sgefa", out.factor.elapsed_s(), std::nullopt, ok});
  double total = out.factor.elapsed_s();
  if (out.info == 0) {
    rep.push_back({"sgesl", out.solve.elapsed_s(), std::nullopt, ok});
    total += out.solve.elapsed_s();
  }
  rep.push_back({"linpack", total, linpack::ops(p.n), ok});
  return rep;
}

Repetition fourier_repetition(HostSession& session, std::uint16_t core, BenchmarkKind kind, const BenchmarkParams& p,
                              std::vector<std::string>& notes) {
  const std::size_t n = std::size_t{1} << p.log2n;
  const auto signal = fourier::make_test_signal(n, p.seed);
  const auto kernel_id = kind == BenchmarkKind::kDft ? fourier::kernel::kDft : fourier::kernel::kFft;
  const auto out = run_fourier(session, core, kernel_id, signal);
  const double tolerance = std::max(1e-4, 1e-6 * static_cast<double>(n));
  const double err = max_abs_diff(out.roundtrip, signal);
  const bool ok = err <= tolerance;
  if (!ok) notes.push_back("roundtrip error " + metrics::format_number(err) + " exceeds " + metrics::format_number(tolerance));
  return {{"forward", out.forward.elapsed_s(), std::nullopt, ok}, {"inverse", out.inverse.elapsed_s(), std::nullopt, ok}};
}

struct CoreRun {
  std::vector<Repetition> repetitions;
  std::vector<std::string> notes;
};

CoreRun run_on_core(const BenchmarkEntry& bench, const KernelProgram& program, std::uint16_t core, EndpointPtr link,
                    std::chrono::milliseconds timeout) {
  HostSession session(program.variables, HostOptions{0, timeout});
  session.connect(core, std::move(link));
  CoreRun run;
  for (int r = 0; r < bench.params.repetitions; ++r) {
    std::vector<std::string> notes;
    run.repetitions.push_back(bench.kind == BenchmarkKind::kLinpack
                                  ? linpack_repetition(session, core, bench.params, notes)
                                  : fourier_repetition(session, core, bench.kind, bench.params, notes));
    for (auto& n : notes) run.notes.push_back("core " + std::to_string(core) + " repetition " + std::to_string(r) + ": " + n);
  }
  session.stop(core);
  return run;
}

}  // namespace

std::optional<DeviceEntry> preset(std::string_view name) {
  DeviceEntry d;
  d.name = std::string(name);
  if (name == "paper-8x32k") {
    d.cores = 8;
    d.mem_budget_bytes = 32 * 1024;
    d.clock_mhz = 100.0;
  } else if (name == "paper-128k") {
    d.cores = 4;
    d.mem_budget_bytes = 128 * 1024;
    d.clock_mhz = 100.0;
  } else if (name == "epiphany-16") {
    d.cores = 16;
    d.mem_budget_bytes = 32 * 1024;
    d.clock_mhz = 600.0;
  } else {
    return std::nullopt;
  }
  return d;
}

std::vector<std::string> preset_names() { return {"paper-8x32k", "paper-128k", "epiphany-16"}; }

RunConfig default_config() {
  RunConfig config;
  DeviceEntry dev = *preset("paper-8x32k");
  dev.name = "simulated";
  config.devices.push_back(dev);
  config.benchmarks.push_back({BenchmarkKind::kLinpack, {}});
  config.benchmarks.push_back({BenchmarkKind::kFft, {}});
  return config;
}

RunConfig parse_config(std::string_view json_text, std::string_view source) {
  using namespace detail;
  const Json doc = parse_document(json_text, source);
  require_object(doc, "");
  check_keys(doc, {"devices", "benchmarks", "output", "replicate", "baseline", "timeout_ms"}, "");

  RunConfig config;
  const Json* devices = find(doc, "devices");
  if (!devices) throw ConfigError("devices", "missing required field");
  require_array(*devices, "devices");
  for (std::size_t i = 0; i < devices->size(); ++i) {
    config.devices.push_back(parse_device((*devices)[i], index_path("devices", i)));
  }
  const Json* benchmarks = find(doc, "benchmarks");
  if (!benchmarks) throw ConfigError("benchmarks", "missing required field");
  require_array(*benchmarks, "benchmarks");
  for (std::size_t i = 0; i < benchmarks->size(); ++i) {
    config.benchmarks.push_back(parse_benchmark((*benchmarks)[i], index_path("benchmarks", i)));
  }
  if (const Json* out = find(doc, "output")) {
    require_object(*out, "output");
    check_keys(*out, {"path", "formats"}, "output");
    if (auto p = opt_string(*out, "path", "output")) config.output.path = *p;
    if (const Json* formats = find(*out, "formats")) {
      require_array(*formats, "output.formats");
      config.output.csv = config.output.json = false;
      for (std::size_t i = 0; i < formats->size(); ++i) {
        const auto& f = (*formats)[i];
        const std::string field = index_path("output.formats", i);
        if (!f.is_string()) throw ConfigError(field, "expected a string");
        if (f == "csv") {
          config.output.csv = true;
        } else if (f == "json") {
          config.output.json = true;
        } else {
          throw ConfigError(field, "expected \"csv\" or \"json\"");
        }
      }
    }
  }
  config.replicate = opt_bool(doc, "replicate", "").value_or(false);
  config.baseline = opt_string(doc, "baseline", "").value_or("");
  if (auto t = opt_integer(doc, "timeout_ms", "")) {
    config.timeout = std::chrono::milliseconds{in_range<long long>(*t, 1, 86'400'000, "timeout_ms")};
  }
  return config;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

KernelProgram program_for(const BenchmarkEntry& bench, const DeviceEntry& device) {
  if (bench.kind == BenchmarkKind::kLinpack) {
    return linpack::make_program(bench.params.n, bench.params.lda, device.kernel_code_bytes);
  }
  return fourier::make_program(bench.params.log2n, device.kernel_code_bytes);
}

void validate(const RunConfig& config) {
  if (config.devices.empty()) throw ConfigError("devices", "at least one device is required");
  if (config.benchmarks.empty()) throw ConfigError("benchmarks", "at least one benchmark is required");
  if (!config.output.csv && !config.output.json) throw ConfigError("output.formats", "no output format selected");

  std::set<std::string> names;
  for (std::size_t i = 0; i < config.devices.size(); ++i) {
    const auto& d = config.devices[i];
    const std::string path = detail::index_path("devices", i);
    if (!names.insert(d.name).second) throw ConfigError(path + ".name", "duplicate device name '" + d.name + "'");
    if (d.cores < 1) throw ConfigError(path + ".cores", "must be >= 1");
    if (d.mem_budget_bytes == 0) throw ConfigError(path + ".mem_budget_bytes", "must be > 0");
    if (!(d.clock_mhz > 0)) throw ConfigError(path + ".clock_mhz", "must be > 0");
    if (d.address && d.transport != TransportKind::kTcp) throw ConfigError(path + ".address", "only tcp devices take an address");
    if (d.transport == TransportKind::kTcp && d.port_base != 0 && d.port_base + d.cores - 1 > 65535) {
      throw ConfigError(path + ".port_base", "port range exceeds 65535");
    }
    if (d.address && d.port_base == 0) throw ConfigError(path + ".port_base", "a remote tcp device needs a port base");
  }
  if (!config.baseline.empty() && !names.count(config.baseline)) {
    throw ConfigError("baseline", "'" + config.baseline + "' is not a configured device");
  }

  for (std::size_t i = 0; i < config.benchmarks.size(); ++i) {
    const auto& b = config.benchmarks[i];
    const std::string path = detail::index_path("benchmarks", i) + ".params";
    if (b.params.repetitions < 1) throw ConfigError(path + ".repetitions", "must be >= 1");
    if (b.kind == BenchmarkKind::kLinpack) {
      if (b.params.n < 1) throw ConfigError(path + ".n", "must be >= 1");
      if (b.params.lda < b.params.n) throw ConfigError(path + ".lda", "must be >= n");
    } else if (b.params.log2n < 0 || b.params.log2n > 24) {
      throw ConfigError(path + ".log2n", "must be in [0, 24]");
    }
    for (const auto& d : config.devices) {
      try {
        check_budget(program_for(b, d), d.mem_budget_bytes);
      } catch (const MemoryBudgetError& e) {
        throw ConfigError(path, std::string(to_string(b.kind)) + " does not fit device '" + d.name + "': " + e.what());
      }
    }
  }
}

void apply(RunConfig& config, const Overrides& o) {
  if (o.device) {
    const auto it = std::find_if(config.devices.begin(), config.devices.end(),
                                 [&](const DeviceEntry& d) { return d.name == *o.device; });
    if (it == config.devices.end()) throw ConfigError("--device", "no device named '" + *o.device + "'");
    DeviceEntry keep = *it;
    config.devices = {keep};
    if (!config.baseline.empty() && config.baseline != keep.name) config.baseline.clear();
  }
  if (o.benchmark) {
    const auto kind = benchmark_kind(*o.benchmark);
    if (!kind) throw ConfigError("--benchmark", "expected linpack, dft or fft, got '" + *o.benchmark + "'");
    std::vector<BenchmarkEntry> kept;
    for (const auto& b : config.benchmarks) {
      if (b.kind == *kind) kept.push_back(b);
    }
    if (kept.empty()) kept.push_back({*kind, {}});
    config.benchmarks = std::move(kept);
  }
  if (o.repetitions) {
    if (*o.repetitions < 1) throw ConfigError("--repeat", "must be >= 1");
    for (auto& b : config.benchmarks) b.params.repetitions = *o.repetitions;
  }
  if (o.output) config.output.path = *o.output;
  if (o.formats) {
    config.output.csv = config.output.json = false;
    for (const auto& f : *o.formats) {
      if (f == "csv") {
        config.output.csv = true;
      } else if (f == "json") {
        config.output.json = true;
      } else {
        throw ConfigError("--format", "expected csv or json, got '" + f + "'");
      }
    }
  }
  if (o.size) {
    for (auto& b : config.benchmarks) {
      if (b.kind == BenchmarkKind::kLinpack) {
        if (*o.size < 1) throw ConfigError("--size", "matrix order must be >= 1");
        b.params.n = b.params.lda = *o.size;
      } else {
        b.params.log2n = log2_exact(*o.size, "--size");
      }
    }
  }
}

SuiteResult run_suite(const RunConfig& config, const LinkWrapper& wrap) {
  validate(config);
  SuiteResult result;
  for (const auto& dev : config.devices) {
    for (const auto& bench : config.benchmarks) {
      const KernelProgram program = program_for(bench, dev);
      const std::uint16_t cores_used = config.replicate ? dev.cores : 1;
      Attached attached = attach(dev, program, cores_used, config.timeout);

      std::vector<CoreRun> runs(cores_used);
      std::vector<std::exception_ptr> errors(cores_used);
      auto work = [&](std::uint16_t core) {
        try {
          EndpointPtr link = std::move(attached.links[core]);
          if (wrap) link = wrap(std::move(link));
          runs[core] = run_on_core(bench, program, core, std::move(link), config.timeout);
        } catch (...) {
          errors[core] = std::current_exception();
        }
      };
      if (cores_used == 1) {
        work(0);
      } else {
        std::vector<std::thread> threads;
        for (std::uint16_t core = 0; core < cores_used; ++core) threads.emplace_back(work, core);
        for (auto& t : threads) t.join();
      }
      attached.handle.shutdown();
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }

      // Replicated runs report the slowest core per repetition.
      const std::string label = dev.name + "/" + std::string(to_string(bench.kind));
      for (int r = 0; r < bench.params.repetitions; ++r) {
        const Repetition& first = runs[0].repetitions[static_cast<std::size_t>(r)];
        for (std::size_t k = 0; k < first.size(); ++k) {
          metrics::TimingInput t;
          t.device = dev.name;
          t.benchmark = std::string(to_string(bench.kind));
          t.kernel = first[k].kernel;
          t.repetition = r;
          t.ops = first[k].ops;
          t.elapsed_s = 0;
          bool verified = true;
          for (const auto& run : runs) {
            const auto& rep = run.repetitions[static_cast<std::size_t>(r)];
            const auto it = std::find_if(rep.begin(), rep.end(), [&](const Sample& s) { return s.kernel == first[k].kernel; });
            if (it == rep.end()) {
              verified = false;
              continue;
            }
            t.elapsed_s = std::max(t.elapsed_s, it->elapsed_s);
            verified = verified && it->verified;
          }
          t.verified = verified;
          result.timings.push_back(std::move(t));
        }
      }
      for (const auto& run : runs) {
        for (const auto& n : run.notes) result.failures.push_back(label + " " + n);
      }
    }
  }
  return result;
}

metrics::ReportInputs report_inputs(const RunConfig& config, const SuiteResult& result) {
  metrics::ReportInputs in;
  for (const auto& d : config.devices) {
    in.devices.push_back({d.name, d.cores, d.clock_mhz});
    if (d.power) {
      auto p = *d.power;
      p.device = d.name;
      in.power.push_back(p);
    }
  }
  in.timings = result.timings;
  in.baseline = config.baseline;
  return in;
}

std::vector<std::string> write_results(const RunConfig& config, const SuiteResult& result) {
  namespace fs = std::filesystem;
  const auto report = metrics::build_report(report_inputs(config, result));
  std::error_code ec;
  fs::create_directories(config.output.path, ec);
  if (ec) throw Error("cannot create output directory '" + config.output.path + "': " + ec.message());
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& body) {
    const fs::path path = fs::path(config.output.path) / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw Error("cannot write '" + path.string() + "'");
    written.push_back(path.string());
  };
  if (config.output.csv) emit("results.csv", metrics::render_csv(report));
  if (config.output.json) emit("results.json", metrics::render_json(report));
  return written;
}

ProbeResult run_probe(const RunConfig& config, const ProbeRequest& request) {
  const auto it = std::find_if(config.devices.begin(), config.devices.end(),
                               [&](const DeviceEntry& d) { return d.name == request.device; });
  if (it == config.devices.end()) throw ConfigError("--device", "no device named '" + request.device + "'");
  for (const auto size : request.bandwidth_sizes) {
    if (size == 0 || size % 4 != 0) {
      throw ConfigError("--size", "bandwidth size " + std::to_string(size) + " is not a positive multiple of 4");
    }
  }
  KernelProgram program;
  program.name = "probe";
  Attached attached = attach(*it, program, 1, config.timeout);

  ProbeResult result;
  HostSession session(program.variables, HostOptions{0, config.timeout});
  session.connect(0, std::move(attached.links[0]));
  if (request.latency) result.latency = session.probe_latency(0, request.latency_repetitions);
  if (!request.bandwidth_sizes.empty()) {
    result.bandwidth = session.probe_bandwidth(0, request.bandwidth_sizes, request.bandwidth_repetitions);
  }
  session.stop(0);
  attached.handle.shutdown();
  return result;
}

std::string render_probe_table(const ProbeResult& result) {
  std::ostringstream out;
  char line[160];
  if (result.latency) {
    const auto& l = *result.latency;
    std::snprintf(line, sizeof(line), "latency   samples %zu  min %.3f us  median %.3f us  mean %.3f us%s\n", l.samples,
                  l.min_s * 1e6, l.median_s * 1e6, l.mean_s * 1e6, l.partial ? "  (partial)" : "");
    out << line;
  }
  for (const auto& b : result.bandwidth) {
    std::snprintf(line, sizeof(line), "bandwidth %10zu B  elapsed %.3f us  %.3f MB/s\n", b.bytes, b.elapsed_s * 1e6,
                  b.mb_per_s);
    out << line;
  }
  return out.str();
}

std::string render_probe_csv(const ProbeResult& result) {
  using metrics::format_number;
  std::ostringstream out;
  out << "probe,bytes,samples,min_s,median_s,mean_s,elapsed_s,mb_per_s,partial\r\n";
  if (result.latency) {
    const auto& l = *result.latency;
    out << "latency,," << l.samples << ',' << format_number(l.min_s) << ',' << format_number(l.median_s) << ','
        << format_number(l.mean_s) << ",,," << (l.partial ? "true" : "false") << "\r\n";
  }
  for (const auto& b : result.bandwidth) {
    out << "bandwidth," << b.bytes << ",,,,," << format_number(b.elapsed_s) << ',' << format_number(b.mb_per_s)
        << ",\r\n";
  }
  return out.str();
}

}  // namespace eithne
