// eithne-device: serve a configured device's cores over TCP, one port per core.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "eithne/device.hpp"
#include "eithne/error.hpp"
#include "eithne/suite.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Standalone simulated device serving cores over TCP"};
  std::string config_path;
  std::string device;
  std::string benchmark = "linpack";
  int port_base = 0;
  std::string bind = "127.0.0.1";
  std::size_t sessions = 0;
  app.add_option("--config", config_path, "Run configuration (JSON); built-in default when omitted");
  app.add_option("--device", device, "Device entry to serve; first configured device by default");
  app.add_option("--benchmark", benchmark, "Program to load: linpack, dft or fft");
  app.add_option("--port-base", port_base, "Core k listens on port-base + k; EITHNE_PORT_BASE otherwise");
  app.add_option("--bind", bind, "Listen address");
  app.add_option("--sessions", sessions, "Host sessions each core serves before exiting (0 = forever)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    eithne::RunConfig config = config_path.empty() ? eithne::default_config() : eithne::load_config(config_path);
    eithne::Overrides overrides;
    if (!device.empty()) overrides.device = device;
    overrides.benchmark = benchmark;
    eithne::apply(config, overrides);
    eithne::validate(config);

    if (port_base == 0) {
      if (const char* env = std::getenv("EITHNE_PORT_BASE")) port_base = std::atoi(env);
    }
    if (port_base == 0) port_base = config.devices.front().port_base;
    if (port_base < 1 || port_base > 65535) {
      throw eithne::ConfigError("--port-base", "set --port-base or EITHNE_PORT_BASE to a port number");
    }

    const auto& dev = config.devices.front();
    const auto program = eithne::program_for(config.benchmarks.front(), dev);
    std::printf("serving '%s' (%s) on %s:%d..%d\n", dev.name.c_str(), benchmark.c_str(), bind.c_str(), port_base,
                port_base + dev.cores - 1);
    std::fflush(stdout);
    eithne::serve_tcp(eithne::DeviceConfig{dev.name, dev.cores, dev.mem_budget_bytes, dev.clock_mhz}, program,
                      static_cast<std::uint16_t>(port_base), bind, sessions);
    return 0;
  } catch (const eithne::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
