#include "eithne/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "eithne/error.hpp"
#include "json_fields.hpp"

namespace eithne::metrics {

using detail::Json;

void validate(const PowerRecord& p) {
  if (!(p.idle_w > 0) || !(p.load_w >= p.idle_w)) {
    throw InvalidArgument("power record for '" + p.device + "' needs load_w >= idle_w > 0");
  }
}

void validate(const DeviceSpec& d) {
  if (d.cores < 1 || !(d.clock_mhz > 0)) {
    throw InvalidArgument("device '" + d.device + "' needs cores >= 1 and clock_mhz > 0");
  }
}

void validate(const CodeSizeRecord& c) {
  if (!(c.size_bytes > 0)) throw InvalidArgument("code size for '" + c.device + "' must be positive");
}

double energy(double load_w, double elapsed_s) {
  if (!(load_w > 0)) throw InvalidArgument("energy needs positive power");
  if (elapsed_s < 0) throw InvalidArgument("energy needs a non-negative time");
  return load_w * elapsed_s;
}

double dynamic_energy(double idle_w, double load_w, double elapsed_s) {
  validate(PowerRecord{"", idle_w, load_w});
  if (elapsed_s < 0) throw InvalidArgument("energy needs a non-negative time");
  return (load_w - idle_w) * elapsed_s;
}

EnergyRecord energy_record(const PowerRecord& power, std::string benchmark, double elapsed_s) {
  validate(power);
  return {power.device, std::move(benchmark), elapsed_s, energy(power.load_w, elapsed_s),
          dynamic_energy(power.idle_w, power.load_w, elapsed_s)};
}

double energy_ratio(double e_a, double e_b) {
  if (!(e_b > 0)) throw InvalidArgument("energy ratio with a non-positive denominator");
  return e_a / e_b;
}

double speedup(double t_slow, double t_fast) {
  if (!(t_fast > 0)) throw InvalidArgument("speedup with a non-positive denominator");
  return t_slow / t_fast;
}

double clock_normalized_speedup(double t_slow, double t_fast, double f_slow_mhz, double f_fast_mhz) {
  if (!(t_slow > 0) || !(t_fast > 0) || !(f_slow_mhz > 0) || !(f_fast_mhz > 0)) {
    throw InvalidArgument("clock-normalised speedup needs positive times and frequencies");
  }
  return (t_slow / t_fast) * (f_slow_mhz / f_fast_mhz);
}

double watts_per_core(double load_w, int cores) {
  if (cores < 1) throw InvalidArgument("watts per core needs at least one core");
  return load_w / cores;
}

double scaled_watts_per_core(double load_w, int cores, double f_mhz, double f_target_mhz) {
  if (!(f_mhz > 0) || !(f_target_mhz > 0)) throw InvalidArgument("frequencies must be positive");
  return watts_per_core(load_w, cores) * (f_target_mhz / f_mhz);
}

double flops_per_watt(double mflops, double load_w) {
  if (!(load_w > 0)) throw InvalidArgument("MFLOPS/W needs positive power");
  return mflops / load_w;
}

double power_fraction(double load_a, double load_b) {
  if (!(load_b > 0)) throw InvalidArgument("power fraction with a non-positive denominator");
  return load_a / load_b;
}

Report build_report(const ReportInputs& inputs) {
  std::map<std::string, const DeviceSpec*> devices;
  for (const auto& d : inputs.devices) {
    validate(d);
    devices.emplace(d.device, &d);
  }
  std::map<std::string, const PowerRecord*> power;
  for (const auto& p : inputs.power) {
    validate(p);
    power.emplace(p.device, &p);
  }

  std::set<std::string> unmatched;
  auto check = [&](const std::string& name) {
    if (!devices.count(name)) unmatched.insert(name);
  };
  for (const auto& p : inputs.power) check(p.device);
  for (const auto& t : inputs.timings) check(t.device);
  for (const auto& c : inputs.code_sizes) check(c.device);
  std::string baseline = inputs.baseline;
  if (baseline.empty() && !inputs.devices.empty()) baseline = inputs.devices.front().device;
  if (!baseline.empty() && !inputs.timings.empty()) check(baseline);
  if (!unmatched.empty()) {
    std::string names;
    for (const auto& n : unmatched) names += (names.empty() ? "" : ", ") + n;
    throw ReportError("report inputs name undeclared devices: " + names);
  }

  Report report;
  report.baseline = baseline;
  report.reference_mhz = inputs.reference_mhz;

  // Baseline row for a (benchmark, kernel, repetition), falling back to the
  // baseline's first row for that (benchmark, kernel).
  auto find_baseline = [&](const TimingInput& t) -> const TimingInput* {
    const TimingInput* fallback = nullptr;
    for (const auto& b : inputs.timings) {
      if (b.device != baseline || b.benchmark != t.benchmark || b.kernel != t.kernel) continue;
      if (b.repetition == t.repetition) return &b;
      if (!fallback) fallback = &b;
    }
    return fallback;
  };

  for (const auto& t : inputs.timings) {
    if (t.elapsed_s < 0) throw InvalidArgument("negative elapsed time for '" + t.device + "'");
    const DeviceSpec& spec = *devices.at(t.device);
    ReportRow row;
    row.device = t.device;
    row.benchmark = t.benchmark;
    row.kernel = t.kernel;
    row.repetition = t.repetition;
    row.elapsed_s = t.elapsed_s;
    row.cores = spec.cores;
    row.clock_mhz = spec.clock_mhz;
    row.ops = t.ops;
    row.verified = t.verified;
    if (t.ops && t.elapsed_s > 0) row.mflops = *t.ops / (t.elapsed_s * 1e6);

    const auto pit = power.find(t.device);
    const PowerRecord* p = pit == power.end() ? nullptr : pit->second;
    if (p) {
      row.idle_w = p->idle_w;
      row.load_w = p->load_w;
      row.energy_j = energy(p->load_w, t.elapsed_s);
      row.dynamic_energy_j = dynamic_energy(p->idle_w, p->load_w, t.elapsed_s);
      row.watts_per_core = watts_per_core(p->load_w, spec.cores);
      row.watts_per_core_at_ref = scaled_watts_per_core(p->load_w, spec.cores, spec.clock_mhz, inputs.reference_mhz);
      if (row.mflops) row.mflops_per_watt = flops_per_watt(*row.mflops, p->load_w);
    }

    if (const TimingInput* b = find_baseline(t)) {
      const DeviceSpec& bspec = *devices.at(b->device);
      if (t.elapsed_s > 0 && b->elapsed_s > 0) {
        row.speedup_vs_baseline = speedup(b->elapsed_s, t.elapsed_s);
        row.clock_normalized_speedup_vs_baseline =
            clock_normalized_speedup(b->elapsed_s, t.elapsed_s, bspec.clock_mhz, spec.clock_mhz);
      }
      const auto bit = power.find(b->device);
      if (bit != power.end() && p) {
        const double eb = energy(bit->second->load_w, b->elapsed_s);
        const double er = energy(p->load_w, t.elapsed_s);
        if (er > 0) row.energy_ratio_vs_baseline = energy_ratio(eb, er);
        row.baseline_power_fraction = power_fraction(bit->second->load_w, p->load_w);
      }
    }
    report.rows.push_back(std::move(row));
  }

  std::map<std::string, double> smallest;
  for (const auto& c : inputs.code_sizes) {
    validate(c);
    auto [it, inserted] = smallest.emplace(c.kernel, c.size_bytes);
    if (!inserted) it->second = std::min(it->second, c.size_bytes);
  }
  for (const auto& c : inputs.code_sizes) {
    report.code_sizes.push_back({c.device, c.kernel, c.size_bytes, c.size_bytes / 1024.0,
                                 c.size_bytes / smallest.at(c.kernel)});
  }
  return report;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {

// A cell is either absent, text, or a number rendered with format_number.
struct Cell {
  enum class Kind { kNull, kText, kNumber, kBool } kind = Kind::kNull;
  std::string text;
  bool flag = false;
};

Cell text(const std::string& s) { return {Cell::Kind::kText, s}; }
Cell number(double v) { return {Cell::Kind::kNumber, format_number(v)}; }
Cell number(const std::optional<double>& v) { return v ? number(*v) : Cell{}; }
Cell integer(const std::optional<int>& v) { return v ? Cell{Cell::Kind::kNumber, std::to_string(*v)} : Cell{}; }
Cell boolean(const std::optional<bool>& v) { return v ? Cell{Cell::Kind::kBool, *v ? "true" : "false", *v} : Cell{}; }

const std::vector<std::string> kRowColumns = {
    "device", "benchmark", "kernel", "repetition", "elapsed_s", "cores", "clock_mhz", "idle_w", "load_w",
    "energy_j", "dynamic_energy_j", "watts_per_core", "watts_per_core_at_ref", "ops", "mflops", "mflops_per_watt",
    "speedup_vs_baseline", "clock_normalized_speedup_vs_baseline", "energy_ratio_vs_baseline",
    "baseline_power_fraction", "verified"};

std::vector<Cell> cells(const ReportRow& r) {
  return {text(r.device),
          text(r.benchmark),
          text(r.kernel),
          integer(r.repetition),
          number(r.elapsed_s),
          integer(r.cores),
          number(r.clock_mhz),
          number(r.idle_w),
          number(r.load_w),
          number(r.energy_j),
          number(r.dynamic_energy_j),
          number(r.watts_per_core),
          number(r.watts_per_core_at_ref),
          number(r.ops),
          number(r.mflops),
          number(r.mflops_per_watt),
          number(r.speedup_vs_baseline),
          number(r.clock_normalized_speedup_vs_baseline),
          number(r.energy_ratio_vs_baseline),
          number(r.baseline_power_fraction),
          boolean(r.verified)};
}

const std::vector<std::string> kCodeColumns = {"device", "kernel", "size_bytes", "size_kib", "ratio_to_smallest"};

std::vector<Cell> cells(const CodeSizeRow& r) {
  return {text(r.device), text(r.kernel), number(r.size_bytes), number(r.size_kib), number(r.ratio_to_smallest)};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <typename Row>
std::string csv(const std::vector<std::string>& columns, const std::vector<Row>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\r\n";
  for (const auto& row : rows) {
    const auto cs = cells(row);
    for (std::size_t i = 0; i < cs.size(); ++i) out << (i ? "," : "") << csv_escape(cs[i].text);
    out << "\r\n";
  }
  return out.str();
}

template <typename Row>
std::string json(const std::vector<std::string>& columns, const std::vector<Row>& rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    const auto cs = cells(row);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      switch (cs[i].kind) {
        case Cell::Kind::kNull:
          obj[columns[i]] = nullptr;
          break;
        case Cell::Kind::kText:
          obj[columns[i]] = cs[i].text;
          break;
        case Cell::Kind::kNumber:
          obj[columns[i]] = std::stod(cs[i].text);
          break;
        case Cell::Kind::kBool:
          obj[columns[i]] = cs[i].flag;
          break;
      }
    }
    doc.push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string render_csv(const Report& report) { return csv(kRowColumns, report.rows); }
std::string render_code_sizes_csv(const Report& report) { return csv(kCodeColumns, report.code_sizes); }
std::string render_json(const Report& report) { return json(kRowColumns, report.rows); }
std::string render_code_sizes_json(const Report& report) { return json(kCodeColumns, report.code_sizes); }

ReportInputs parse_inputs(std::string_view json_text, std::string_view source) {
  using namespace detail;
  const Json doc = parse_document(json_text, source);
  require_object(doc, "");
  ReportInputs in;

  if (const Json* devices = find(doc, "devices")) {
    require_array(*devices, "devices");
    for (std::size_t i = 0; i < devices->size(); ++i) {
      const std::string path = index_path("devices", i);
      const Json& d = require_object((*devices)[i], path);
      DeviceSpec spec{get_string(d, "name", path), static_cast<int>(get_integer(d, "cores", path)),
                      get_number(d, "clock_mhz", path)};
      if (spec.cores < 1) throw ConfigError(path + ".cores", "must be >= 1");
      if (!(spec.clock_mhz > 0)) throw ConfigError(path + ".clock_mhz", "must be > 0");
      in.devices.push_back(std::move(spec));
    }
  }
  if (const Json* power = find(doc, "power")) {
    require_array(*power, "power");
    for (std::size_t i = 0; i < power->size(); ++i) {
      const std::string path = index_path("power", i);
      const Json& p = require_object((*power)[i], path);
      PowerRecord rec{get_string(p, "device", path), get_number(p, "idle_w", path), get_number(p, "load_w", path)};
      if (!(rec.idle_w > 0)) throw ConfigError(path + ".idle_w", "must be > 0");
      if (!(rec.load_w >= rec.idle_w)) throw ConfigError(path + ".load_w", "must be >= idle_w");
      in.power.push_back(std::move(rec));
    }
  }
  if (const Json* timings = find(doc, "timings")) {
    require_array(*timings, "timings");
    for (std::size_t i = 0; i < timings->size(); ++i) {
      const std::string path = index_path("timings", i);
      const Json& t = require_object((*timings)[i], path);
      TimingInput rec;
      rec.device = get_string(t, "device", path);
      rec.benchmark = get_string(t, "benchmark", path);
      rec.kernel = opt_string(t, "kernel", path).value_or("");
      if (auto r = opt_integer(t, "repetition", path)) rec.repetition = static_cast<int>(*r);
      rec.elapsed_s = get_number(t, "elapsed_s", path);
      if (rec.elapsed_s < 0) throw ConfigError(path + ".elapsed_s", "must be >= 0");
      rec.ops = opt_number(t, "ops", path);
      rec.verified = opt_bool(t, "verified", path);
      in.timings.push_back(std::move(rec));
    }
  }
  if (const Json* sizes = find(doc, "code_sizes")) {
    require_array(*sizes, "code_sizes");
    for (std::size_t i = 0; i < sizes->size(); ++i) {
      const std::string path = index_path("code_sizes", i);
      const Json& c = require_object((*sizes)[i], path);
      CodeSizeRecord rec{get_string(c, "device", path), opt_string(c, "kernel", path).value_or("fft"),
                         get_number(c, "size_bytes", path)};
      if (!(rec.size_bytes > 0)) throw ConfigError(path + ".size_bytes", "must be > 0");
      in.code_sizes.push_back(std::move(rec));
    }
  }
  in.baseline = opt_string(doc, "baseline", "").value_or("");
  if (auto ref = opt_number(doc, "reference_mhz", "")) {
    if (!(*ref > 0)) throw ConfigError("reference_mhz", "must be > 0");
    in.reference_mhz = *ref;
  }
  return in;
}

ReportInputs load_inputs(const std::string& path) { return parse_inputs(read_file(path), path); }

void merge_into(ReportInputs& into, ReportInputs from) {
  auto append = [](auto& dst, auto& src) { dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end())); };
  append(into.devices, from.devices);
  append(into.power, from.power);
  append(into.timings, from.timings);
  append(into.code_sizes, from.code_sizes);
  if (into.baseline.empty()) into.baseline = std::move(from.baseline);
}

std::vector<CodeSizeRecord> load_code_sizes(const std::string& path) {
  using namespace detail;
  const std::string text = read_file(path);
  const Json doc = parse_document(text, path);
  require_object(doc, "");
  if (doc.contains("code_sizes")) return parse_inputs(text, path).code_sizes;

  std::vector<CodeSizeRecord> out;
  for (const auto& [device, value] : doc.items()) {
    if (!value.is_number()) throw ConfigError(device, "expected a byte count");
    CodeSizeRecord rec{device, "fft", value.get<double>()};
    if (!(rec.size_bytes > 0)) throw ConfigError(device, "must be > 0");
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace eithne::metrics
