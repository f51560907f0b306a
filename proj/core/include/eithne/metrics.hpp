#pragma once

// Derived performance, power and energy metrics, and the CSV/JSON report.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eithne::metrics {

struct PowerRecord {
  std::string device;
  double idle_w = 0;
  double load_w = 0;
};

struct DeviceSpec {
  std::string device;
  int cores = 1;
  double clock_mhz = 0;
};

struct EnergyRecord {
  std::string device;
  std::string benchmark;
  double elapsed_s = 0;
  double energy_j = 0;          ///< load_w * t
  double dynamic_energy_j = 0;  ///< (load_w - idle_w) * t
};

struct CodeSizeRecord {
  std::string device;
  std::string kernel;
  double size_bytes = 0;
};

/// One measured (or published) execution time.
struct TimingInput {
  std::string device;
  std::string benchmark;
  std::string kernel;
  std::optional<int> repetition;
  double elapsed_s = 0;
  /// Floating-point operation count, when the benchmark defines one.
  std::optional<double> ops;
  std::optional<bool> verified;
};

// Throw InvalidArgument on the stated domain violations.
void validate(const PowerRecord& p);
void validate(const DeviceSpec& d);
void validate(const CodeSizeRecord& c);

/// E = P t, with P the load power.
double energy(double load_w, double elapsed_s);
double dynamic_energy(double idle_w, double load_w, double elapsed_s);
EnergyRecord energy_record(const PowerRecord& power, std::string benchmark, double elapsed_s);
double energy_ratio(double e_a, double e_b);
double speedup(double t_slow, double t_fast);
/// Speedup had the slow device run at the fast one's clock: (t_slow/t_fast) * (f_slow/f_fast).
double clock_normalized_speedup(double t_slow, double t_fast, double f_slow_mhz, double f_fast_mhz);
double watts_per_core(double load_w, int cores);
/// watts_per_core under linear frequency scaling to `f_target_mhz`.
double scaled_watts_per_core(double load_w, int cores, double f_mhz, double f_target_mhz);
double flops_per_watt(double mflops, double load_w);
/// load_a / load_b.
double power_fraction(double load_a, double load_b);

struct ReportInputs {
  std::vector<DeviceSpec> devices;
  std::vector<PowerRecord> power;
  std::vector<TimingInput> timings;
  std::vector<CodeSizeRecord> code_sizes;
  /// Device the *_vs_baseline columns compare against; first device when empty.
  std::string baseline;
  double reference_mhz = 100.0;
};

struct ReportRow {
  std::string device;
  std::string benchmark;
  std::string kernel;
  std::optional<int> repetition;
  double elapsed_s = 0;
  int cores = 0;
  double clock_mhz = 0;
  std::optional<double> idle_w;
  std::optional<double> load_w;
  std::optional<double> energy_j;
  std::optional<double> dynamic_energy_j;
  std::optional<double> watts_per_core;
  std::optional<double> watts_per_core_at_ref;
  std::optional<double> ops;
  std::optional<double> mflops;
  std::optional<double> mflops_per_watt;
  std::optional<double> speedup_vs_baseline;
  std::optional<double> clock_normalized_speedup_vs_baseline;
  std::optional<double> energy_ratio_vs_baseline;
  std::optional<double> baseline_power_fraction;
  std::optional<bool> verified;
};

struct CodeSizeRow {
  std::string device;
  std::string kernel;
  double size_bytes = 0;
  double size_kib = 0;
  double ratio_to_smallest = 0;
};

struct Report {
  std::string baseline;
  double reference_mhz = 100.0;
  std::vector<ReportRow> rows;
  std::vector<CodeSizeRow> code_sizes;
};

/// Throws ReportError listing every name that is not a declared device.
Report build_report(const ReportInputs& inputs);

/// Six significant digits, "%.6g".
std::string format_number(double v);

std::string render_csv(const Report& report);
std::string render_code_sizes_csv(const Report& report);
/// Array of per-row objects, same values as the CSV.
std::string render_json(const Report& report);
std::string render_code_sizes_json(const Report& report);

/// Parses the report input schema; throws ConfigError naming the field.
ReportInputs parse_inputs(std::string_view json_text, std::string_view source = "input");
ReportInputs load_inputs(const std::string& path);
/// Concatenates record lists; the first non-empty baseline wins.
void merge_into(ReportInputs& into, ReportInputs from);
/// Accepts either {"code_sizes": [...]} or a flat {"device": bytes} map for kernel `fft`.
std::vector<CodeSizeRecord> load_code_sizes(const std::string& path);

}  // namespace eithne::metrics
