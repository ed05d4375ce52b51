#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lightcrystal/protocols.hpp"
#include "lightcrystal/units.hpp"

namespace lightcrystal {

// Knobs consumed by the protocol subcommands, all settable from the config
// file next to the physics parameters.
struct ProtocolOptions {
  double t_ramp = 20.0;
  double t_hold = 30.0;
  bool ramp_down = false;
  std::vector<double> s_values;  // threshold scan grid; empty = derive from zeta
  double threshold_resolution = 0.25;
  std::vector<double> gamma_values = {0.0, 0.001, 0.01};
  std::vector<double> scale_factors = {1.0, 1.5, 2.0};
  std::vector<double> asymmetries = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> total_power_values;  // phase diagram grid; empty = derive
  std::vector<double> s_over_sc = {0.5, 0.8, 1.2, 1.6, 2.0, 3.0, 4.0};
  double scale_reference_ratio = 2.0;
};

struct Config {
  SimulationParams params;
  ProtocolOptions protocol;
  RampSchedule schedule;  // empty unless the config provides one
  std::string source_text;
};

struct ParseIssue {
  int line = 0;  // 0 when the issue is not tied to a single line
  std::string message;
};

struct ParseResult {
  bool ok = false;
  Config config;
  std::vector<ParseIssue> errors;
};

// Flat `key = value` text; `#` starts a comment; unknown keys are errors.
// List values are comma-separated; the optional pump schedule is given as
// `schedule = t s_left s_right; t s_left s_right; ...`.
// The parsed params are validated and validation failures are reported with
// the line that set the offending key.
ParseResult parse_config(const std::string& text);

// Round-trip companion of parse_config (params keys only).
std::string serialize_params(const SimulationParams& params);

// Raw complex-array snapshot: 64-byte header (magic "LCSNAP01", u32
// version, u32 n, f64 dx, f64 t, zero padding), then n interleaved re/im
// little-endian float64 pairs.
void write_snapshot(const std::filesystem::path& path, const ArrayXcd& data,
                    double dx, double t);

struct Snapshot {
  ArrayXcd data;
  double dx = 0.0;
  double t = 0.0;
};

Snapshot read_snapshot(const std::filesystem::path& path);

// Time-series CSV with the fixed column order
//   t, r_abs2_left, r_abs2_right, r_phase, t_phase, eta, delta_phi, e_kin,
//   norm, density_order, mean_x
// Bytes depend only on the samples, never on wall-clock time.
void write_series_csv(const std::filesystem::path& path,
                      const std::vector<ObservableSample>& samples);

std::vector<ObservableSample> read_series_csv(const std::filesystem::path& path);

struct RunManifest {
  std::filesystem::path directory;
  std::filesystem::path series_csv;
  std::filesystem::path manifest_file;
  std::vector<std::filesystem::path> snapshots;
};

// Persists one RunRecord: series CSV, final-state snapshots (wavefunction
// and both field envelopes), a key=value summary with the protocol scalars,
// and a manifest sufficient to reproduce the run on the same build.
RunManifest write_run(const RunRecord& record, const std::filesystem::path& dir,
                      const std::string& subcommand = "",
                      const std::string& config_text = "");

void write_threshold_scan(const ThresholdScanResult& result,
                          const std::filesystem::path& dir);
void write_phase_diagram(const std::vector<PhaseDiagramRow>& rows,
                         const std::filesystem::path& dir);
void write_scaling(const ScalingResult& result,
                   const std::filesystem::path& dir);

// Stable float formatting used for all persisted numbers.
std::string format_double(double value);

}  // namespace lightcrystal
