#include "lightcrystal/io.hpp"

#include <bit>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lightcrystal {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {

constexpr char kSnapshotMagic[8] = {'L', 'C', 'S', 'N', 'A', 'P', '0', '1'};
constexpr std::uint32_t kSnapshotVersion = 1;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& text, double& out) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) return false;
  out = v;
  return true;
}

bool parse_long(const std::string& text, long long& out) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) return false;
  out = v;
  return true;
}

bool parse_bool(const std::string& text, bool& out) {
  if (text == "0" || text == "false") {
    out = false;
    return true;
  }
  if (text == "1" || text == "true") {
    out = true;
    return true;
  }
  return false;
}

bool parse_double_list(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) return false;
    double v;
    if (!parse_double(item, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

bool parse_schedule(const std::string& text, RampSchedule& out) {
  out.breakpoints.clear();
  std::stringstream ss(text);
  std::string chunk;
  while (std::getline(ss, chunk, ';')) {
    chunk = trim(chunk);
    if (chunk.empty()) continue;
    std::stringstream fields(chunk);
    ScheduleBreakpoint bp;
    if (!(fields >> bp.t >> bp.s_left >> bp.s_right)) return false;
    std::string rest;
    if (fields >> rest) return false;
    out.breakpoints.push_back(bp);
  }
  return !out.breakpoints.empty();
}

std::string list_to_string(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  result.config.source_text = text;
  SimulationParams& p = result.config.params;
  ProtocolOptions& proto = result.config.protocol;
  std::map<std::string, int> key_lines;

  std::stringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back({line_no, "expected `key = value`"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      result.errors.push_back({line_no, "expected `key = value`"});
      continue;
    }
    key_lines[key] = line_no;

    auto bad_value = [&] {
      result.errors.push_back({line_no, "invalid value for `" + key + "`"});
    };

    double d;
    long long ll;
    bool b;
    if (key == "zeta") {
      parse_double(value, p.zeta) || (bad_value(), false);
    } else if (key == "gcN") {
      parse_double(value, p.gcN) || (bad_value(), false);
    } else if (key == "trap_length") {
      parse_double(value, p.trap_length) || (bad_value(), false);
    } else if (key == "box_length") {
      parse_double(value, p.box_length) || (bad_value(), false);
    } else if (key == "n_grid") {
      if (parse_long(value, ll))
        p.n_grid = static_cast<int>(ll);
      else
        bad_value();
    } else if (key == "dt") {
      parse_double(value, p.dt) || (bad_value(), false);
    } else if (key == "s_left") {
      parse_double(value, p.s_left) || (bad_value(), false);
    } else if (key == "s_right") {
      parse_double(value, p.s_right) || (bad_value(), false);
    } else if (key == "gamma") {
      parse_double(value, p.gamma) || (bad_value(), false);
    } else if (key == "v_ext_height") {
      parse_double(value, p.v_ext_height) || (bad_value(), false);
    } else if (key == "noise_amplitude") {
      parse_double(value, p.noise_amplitude) || (bad_value(), false);
    } else if (key == "rng_seed") {
      if (parse_long(value, ll) && ll >= 0)
        p.rng_seed = static_cast<std::uint64_t>(ll);
      else
        bad_value();
    } else if (key == "dtau") {
      parse_double(value, p.dtau) || (bad_value(), false);
    } else if (key == "max_iters") {
      if (parse_long(value, ll))
        p.max_iters = static_cast<long>(ll);
      else
        bad_value();
    } else if (key == "tol_energy") {
      parse_double(value, p.tol_energy) || (bad_value(), false);
    } else if (key == "tol_psi") {
      parse_double(value, p.tol_psi) || (bad_value(), false);
    } else if (key == "t_final") {
      parse_double(value, p.t_final) || (bad_value(), false);
    } else if (key == "sample_stride") {
      if (parse_long(value, ll))
        p.sample_stride = static_cast<int>(ll);
      else
        bad_value();
    } else if (key == "t_ramp") {
      parse_double(value, proto.t_ramp) || (bad_value(), false);
    } else if (key == "t_hold") {
      parse_double(value, proto.t_hold) || (bad_value(), false);
    } else if (key == "ramp_down") {
      if (parse_bool(value, b))
        proto.ramp_down = b;
      else
        bad_value();
    } else if (key == "threshold_resolution") {
      if (parse_double(value, d) && d > 0.0)
        proto.threshold_resolution = d;
      else
        bad_value();
    } else if (key == "scale_reference_ratio") {
      parse_double(value, proto.scale_reference_ratio) || (bad_value(), false);
    } else if (key == "s_values") {
      parse_double_list(value, proto.s_values) || (bad_value(), false);
    } else if (key == "gamma_values") {
      parse_double_list(value, proto.gamma_values) || (bad_value(), false);
    } else if (key == "scale_factors") {
      parse_double_list(value, proto.scale_factors) || (bad_value(), false);
    } else if (key == "asymmetries") {
      parse_double_list(value, proto.asymmetries) || (bad_value(), false);
    } else if (key == "total_power_values") {
      parse_double_list(value, proto.total_power_values) || (bad_value(), false);
    } else if (key == "s_over_sc") {
      parse_double_list(value, proto.s_over_sc) || (bad_value(), false);
    } else if (key == "schedule") {
      if (!parse_schedule(value, result.config.schedule)) bad_value();
    } else {
      result.errors.push_back({line_no, "unknown key `" + key + "`"});
    }
  }

  const ValidationReport report = validate(p);
  for (const auto& issue : report.issues) {
    const auto it = key_lines.find(issue.key);
    result.errors.push_back({it == key_lines.end() ? 0 : it->second,
                             issue.key + ": " + issue.message});
  }
  if (!result.config.schedule.empty()) {
    try {
      result.config.schedule.check();
    } catch (const std::exception& e) {
      const auto it = key_lines.find("schedule");
      result.errors.push_back({it == key_lines.end() ? 0 : it->second, e.what()});
    }
  }
  result.ok = result.errors.empty();
  return result;
}

std::string serialize_params(const SimulationParams& p) {
  std::ostringstream out;
  out << "zeta = " << format_double(p.zeta) << '\n'
      << "gcN = " << format_double(p.gcN) << '\n'
      << "trap_length = " << format_double(p.trap_length) << '\n'
      << "box_length = " << format_double(p.box_length) << '\n'
      << "n_grid = " << p.n_grid << '\n'
      << "dt = " << format_double(p.dt) << '\n'
      << "s_left = " << format_double(p.s_left) << '\n'
      << "s_right = " << format_double(p.s_right) << '\n'
      << "gamma = " << format_double(p.gamma) << '\n'
      << "v_ext_height = " << format_double(p.v_ext_height) << '\n'
      << "noise_amplitude = " << format_double(p.noise_amplitude) << '\n'
      << "rng_seed = " << p.rng_seed << '\n'
      << "dtau = " << format_double(p.dtau) << '\n'
      << "max_iters = " << p.max_iters << '\n'
      << "tol_energy = " << format_double(p.tol_energy) << '\n'
      << "tol_psi = " << format_double(p.tol_psi) << '\n'
      << "t_final = " << format_double(p.t_final) << '\n'
      << "sample_stride = " << p.sample_stride << '\n';
  return out.str();
}

void write_snapshot(const std::filesystem::path& path, const ArrayXcd& data,
                    double dx, double t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path.string());
  char header[64] = {};
  std::memcpy(header, kSnapshotMagic, 8);
  const std::uint32_t version = kSnapshotVersion;
  const std::uint32_t n = static_cast<std::uint32_t>(data.size());
  std::memcpy(header + 8, &version, 4);
  std::memcpy(header + 12, &n, 4);
  std::memcpy(header + 16, &dx, 8);
  std::memcpy(header + 24, &t, 8);
  out.write(header, sizeof header);
  for (Eigen::Index j = 0; j < data.size(); ++j) {
    const double re = data[j].real();
    const double im = data[j].imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
  if (!out) throw std::runtime_error("write_snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path.string());
  char header[64];
  in.read(header, sizeof header);
  if (!in || std::memcmp(header, kSnapshotMagic, 8) != 0)
    throw std::runtime_error("read_snapshot: bad magic in " + path.string());
  std::uint32_t version, n;
  std::memcpy(&version, header + 8, 4);
  std::memcpy(&n, header + 12, 4);
  if (version != kSnapshotVersion)
    throw std::runtime_error("read_snapshot: unsupported version");
  Snapshot snap;
  std::memcpy(&snap.dx, header + 16, 8);
  std::memcpy(&snap.t, header + 24, 8);
  snap.data.resize(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    double re, im;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    snap.data[j] = Complex(re, im);
  }
  if (!in) throw std::runtime_error("read_snapshot: truncated file " + path.string());
  return snap;
}

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<ObservableSample>& samples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_series_csv: cannot open " + path.string());
  out << "t,r_abs2_left,r_abs2_right,r_phase,t_phase,eta,delta_phi,e_kin,norm,"
         "density_order,mean_x\n";
  for (const auto& s : samples) {
    out << format_double(s.t) << ',' << format_double(s.r_abs2_left) << ','
        << format_double(s.r_abs2_right) << ',' << format_double(s.r_phase)
        << ',' << format_double(s.t_phase) << ',' << format_double(s.eta)
        << ',' << format_double(s.delta_phi) << ',' << format_double(s.e_kin)
        << ',' << format_double(s.norm) << ',' << format_double(s.density_order)
        << ',' << format_double(s.mean_x) << '\n';
  }
  if (!out) throw std::runtime_error("write_series_csv: write failed");
}

std::vector<ObservableSample> read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_series_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_series_csv: missing header");
  std::vector<ObservableSample> samples;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string field;
    double values[11];
    for (int i = 0; i < 11; ++i) {
      if (!std::getline(ss, field, ','))
        throw std::runtime_error("read_series_csv: short row");
      values[i] = std::strtod(field.c_str(), nullptr);
    }
    ObservableSample s;
    s.t = values[0];
    s.r_abs2_left = values[1];
    s.r_abs2_right = values[2];
    s.r_phase = values[3];
    s.t_phase = values[4];
    s.eta = values[5];
    s.delta_phi = values[6];
    s.e_kin = values[7];
    s.norm = values[8];
    s.density_order = values[9];
    s.mean_x = values[10];
    samples.push_back(s);
  }
  return samples;
}

RunManifest write_run(const RunRecord& record, const std::filesystem::path& dir,
                      const std::string& subcommand,
                      const std::string& config_text) {
  std::filesystem::create_directories(dir);
  RunManifest manifest;
  manifest.directory = dir;
  manifest.series_csv = dir / "series.csv";
  write_series_csv(manifest.series_csv, record.samples);

  const double dx = record.params.dx();
  const double t = record.final_state.time;
  const auto psi_path = dir / "psi.bin";
  const auto left_path = dir / "field_left.bin";
  const auto right_path = dir / "field_right.bin";
  write_snapshot(psi_path, record.final_state.wavefunction.psi, dx, t);
  write_snapshot(left_path, record.final_state.left_field.envelope, dx, t);
  write_snapshot(right_path, record.final_state.right_field.envelope, dx, t);
  manifest.snapshots = {psi_path, left_path, right_path};

  {
    std::ofstream out(dir / "summary.txt", std::ios::trunc);
    out << "aborted = " << (record.aborted ? 1 : 0) << '\n';
    if (!record.samples.empty()) {
      const auto& last = record.samples.back();
      out << "final_t = " << format_double(last.t) << '\n'
          << "final_r_abs2_left = " << format_double(last.r_abs2_left) << '\n'
          << "final_eta = " << format_double(last.eta) << '\n'
          << "final_norm = " << format_double(last.norm) << '\n';
    }
    for (const auto& [key, value] : record.extras)
      out << key << " = " << format_double(value) << '\n';
  }

  manifest.manifest_file = dir / "manifest.txt";
  {
    std::ofstream out(manifest.manifest_file, std::ios::trunc);
    out << "version = " << record.version << '\n'
        << "subcommand = " << (subcommand.empty() ? "(library)" : subcommand) << '\n'
        << "seed = " << record.seed << '\n'
        << "timestamp = " << iso_timestamp() << '\n'
        << "output = series.csv\n"
        << "output = psi.bin\n"
        << "output = field_left.bin\n"
        << "output = field_right.bin\n"
        << "output = summary.txt\n"
        << "[params]\n"
        << serialize_params(record.params);
    if (!record.schedule.empty()) {
      out << "[schedule]\n";
      for (const auto& bp : record.schedule.breakpoints)
        out << format_double(bp.t) << ' ' << format_double(bp.s_left) << ' '
            << format_double(bp.s_right) << '\n';
    }
    if (!config_text.empty()) {
      out << "[config]\n" << config_text;
      if (config_text.back() != '\n') out << '\n';
    }
  }
  return manifest;
}

void write_threshold_scan(const ThresholdScanResult& result,
                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "scan.csv", std::ios::trunc);
    out << "s,eta,r_abs2,transmitted,delta_phi,ordered,converged\n";
    for (const auto& p : result.table)
      out << format_double(p.s) << ',' << format_double(p.eta) << ','
          << format_double(p.r_abs2) << ',' << format_double(p.transmitted)
          << ',' << format_double(p.delta_phi) << ',' << (p.ordered ? 1 : 0)
          << ',' << (p.converged ? 1 : 0) << '\n';
  }
  std::ofstream out(dir / "summary.txt", std::ios::trunc);
  out << "threshold = " << format_double(result.threshold) << '\n'
      << "bracket_low = " << format_double(result.bracket_low) << '\n'
      << "bracket_high = " << format_double(result.bracket_high) << '\n'
      << "scan_knee_eta = " << format_double(result.scan_knee_eta) << '\n'
      << "scan_knee_r = " << format_double(result.scan_knee_r) << '\n'
      << "floor_eta = " << format_double(result.floor_eta) << '\n'
      << "floor_r = " << format_double(result.floor_r) << '\n'
      << "resolution = " << format_double(result.resolution) << '\n';
}

void write_phase_diagram(const std::vector<PhaseDiagramRow>& rows,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "phase_diagram.csv", std::ios::trunc);
  out << "asymmetry,total_power_threshold\n";
  for (const auto& row : rows)
    out << format_double(row.asymmetry) << ','
        << format_double(row.total_power_threshold) << '\n';
}

void write_scaling(const ScalingResult& result,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "scaling.csv", std::ios::trunc);
    out << "factor,s_over_sc,r_abs2\n";
    for (const auto& curve : result.curves)
      for (std::size_t m = 0; m < curve.s_over_sc.size(); ++m)
        out << format_double(curve.factor) << ','
            << format_double(curve.s_over_sc[m]) << ','
            << format_double(curve.r_abs2[m]) << '\n';
  }
  std::ofstream out(dir / "summary.txt", std::ios::trunc);
  out << "reference_ratio = " << format_double(result.reference_ratio) << '\n'
      << "fit_slope = " << format_double(result.fit_slope) << '\n'
      << "fit_intercept = " << format_double(result.fit_intercept) << '\n'
      << "fit_r_squared = " << format_double(result.fit_r_squared) << '\n';
  for (const auto& curve : result.curves)
    out << "r_at_reference_factor_" << format_double(curve.factor) << " = "
        << format_double(curve.r_at_reference) << '\n';
}

}  // namespace lightcrystal
