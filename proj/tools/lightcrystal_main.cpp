#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lightcrystal/io.hpp"
#include "lightcrystal/protocols.hpp"

namespace fs = std::filesystem;
using namespace lightcrystal;

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("LIGHTCRYSTAL_OUT");
  return env && *env ? env : "out";
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Default scan grids bracket the calibrated threshold with room for
// finite-size shifts.
std::vector<double> default_scan_grid(double anchor) {
  const double fractions[] = {0.3, 0.5, 0.7, 0.9, 1.2, 1.6, 2.2, 3.0};
  std::vector<double> grid;
  for (double f : fractions) grid.push_back(f * anchor);
  return grid;
}

void write_point_summary(const fs::path& dir, const SystemState& state,
                         const SimulationParams& params, const Grid& grid) {
  fs::create_directories(dir);
  write_snapshot(dir / "psi.bin", state.wavefunction.psi, grid.dx, state.time);
  write_snapshot(dir / "field_left.bin", state.left_field.envelope, grid.dx,
                 state.time);
  write_snapshot(dir / "field_right.bin", state.right_field.envelope, grid.dx,
                 state.time);
  const double k_eff = effective_wavenumber(params.zeta, params.trap_length);
  std::ofstream out(dir / "summary.txt", std::ios::trunc);
  out << "s_left = " << format_double(state.s_left) << '\n'
      << "s_right = " << format_double(state.s_right) << '\n'
      << "r_abs2_left = " << format_double(std::norm(state.left_field.r)) << '\n'
      << "t_abs2_left = " << format_double(std::norm(state.left_field.t)) << '\n'
      << "eta = " << format_double(eta(state.wavefunction.psi, grid, k_eff))
      << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"self-consistent condensate + counter-propagating light simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = default_out_dir();
  long long seed_override = -1;
  int workers = 0;
  int stride_override = -1;
  app.add_option("--config", config_path, "path to key = value config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed_override, "override rng_seed from the config");
  app.add_option("--workers", workers, "worker threads for scans (0 = all cores)");
  app.add_option("--sample-stride", stride_override, "record every Nth step");

  auto* cmd_ground = app.add_subcommand("ground-state", "converged stationary state at the configured pumps");
  auto* cmd_quench = app.add_subcommand("quench", "sudden pump turn-on from the seeded homogeneous state");
  auto* cmd_ramp = app.add_subcommand("ramp", "linear pump ramp (up, hold, optional down)");
  auto* cmd_thresh = app.add_subcommand("threshold-scan", "locate the ordering threshold by scan + bisection");
  auto* cmd_phase = app.add_subcommand("phase-diagram", "homogeneous-phase boundary versus pump asymmetry");
  auto* cmd_super = app.add_subcommand("superradiance", "single-side pump instability run");
  auto* cmd_loss = app.add_subcommand("loss-run", "quench runs across loss rates");
  auto* cmd_scaling = app.add_subcommand("scaling-run", "reflectivity versus particle-number factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n' << app.help();
    return 2;
  }

  std::string config_text;
  if (!config_path.empty()) config_text = read_file(config_path);
  const ParseResult parsed = parse_config(config_text);
  if (!parsed.ok) {
    for (const auto& issue : parsed.errors)
      std::cerr << "error: config-parse: line " << issue.line << ": "
                << issue.message << '\n';
    return 2;
  }
  Config config = parsed.config;
  if (seed_override >= 0)
    config.params.rng_seed = static_cast<std::uint64_t>(seed_override);
  if (stride_override > 0) config.params.sample_stride = stride_override;

  const SimulationParams& params = config.params;
  const ProtocolOptions& proto = config.protocol;
  const fs::path out(out_dir);
  fs::create_directories(out);

  auto finish_run = [&](const RunRecord& record, const char* name) -> int {
    write_run(record, out, name, config_text);
    if (!record.samples.empty()) {
      const auto& last = record.samples.back();
      std::cout << name << ": t=" << last.t << " |r|^2=" << last.r_abs2_left
                << " eta=" << last.eta << " norm=" << last.norm << '\n';
    }
    if (record.aborted) {
      std::cerr << "error: runtime: blow-up, run aborted at t="
                << record.extras.at("abort_time") << '\n';
      return 1;
    }
    return 0;
  };

  if (*cmd_ground) {
    CoupledDriver driver(params);
    driver.set_pumps(params.s_left, params.s_right);
    const GroundStateResult gs = driver.ground_state();
    RunRecord record;
    record.params = params;
    record.version = kVersion;
    record.seed = params.rng_seed;
    record.final_state = driver.state();
    record.samples.push_back(sample_observables(driver.state(), params,
                                                driver.grid(), driver.transform()));
    record.extras["converged"] = gs.converged ? 1.0 : 0.0;
    record.extras["iterations"] = static_cast<double>(gs.iterations);
    record.extras["final_energy"] = gs.final_energy;
    record.extras["energy_residual"] = gs.energy_residual;
    record.extras["psi_residual"] = gs.psi_residual;
    write_run(record, out, "ground-state", config_text);
    std::cout << "ground-state: converged=" << gs.converged
              << " iterations=" << gs.iterations << " E=" << gs.final_energy
              << " |r|^2=" << record.samples.back().r_abs2_left << '\n';
    if (!gs.converged && !gs.ordered_exit) {
      std::cerr << "error: runtime: ground state not converged after "
                << gs.iterations << " iterations (dE=" << gs.energy_residual
                << ", dpsi=" << gs.psi_residual << ")\n";
      return 1;
    }
    return 0;
  }
  if (*cmd_quench) return finish_run(quench_run(params), "quench");
  if (*cmd_ramp)
    return finish_run(ramp_run(params, proto.t_ramp, proto.t_hold, proto.ramp_down),
                      "ramp");
  if (*cmd_thresh) {
    std::vector<double> grid = proto.s_values;
    if (grid.empty())
      grid = default_scan_grid(critical_intensity_per_beam(params.zeta));
    const auto sink = [&](std::size_t i, const SystemState& state,
                          const Grid& g) {
      char name[32];
      std::snprintf(name, sizeof name, "point_%03zu", i);
      write_point_summary(out / name, state, params, g);
    };
    const ThresholdScanResult result =
        threshold_scan(params, grid, proto.threshold_resolution, workers, sink);
    write_threshold_scan(result, out);
    std::cout << "threshold-scan: I_c=" << result.threshold << " bracket=["
              << result.bracket_low << ", " << result.bracket_high
              << "] knee_eta=" << result.scan_knee_eta
              << " knee_r=" << result.scan_knee_r << '\n';
    return 0;
  }
  if (*cmd_phase) {
    std::vector<double> powers = proto.total_power_values;
    if (powers.empty())
      powers = default_scan_grid(1.0 / (params.zeta * params.zeta));
    const auto rows = asymmetry_phase_diagram(params, proto.asymmetries, powers,
                                              proto.threshold_resolution, workers);
    write_phase_diagram(rows, out);
    std::cout << "phase-diagram: " << rows.size() << " asymmetry points\n";
    return 0;
  }
  if (*cmd_super) return finish_run(superradiance_run(params), "superradiance");
  if (*cmd_loss) {
    const auto records = loss_run(params, proto.gamma_values);
    std::ofstream summary(out / "summary.txt", std::ios::trunc);
    for (std::size_t i = 0; i < records.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "gamma_%03zu", i);
      write_run(records[i], out / name, "loss-run", config_text);
      summary << "gamma = " << format_double(proto.gamma_values[i])
              << "  final_norm = "
              << format_double(records[i].samples.back().norm) << '\n';
    }
    std::cout << "loss-run: " << records.size() << " runs\n";
    for (const auto& record : records)
      if (record.aborted) {
        std::cerr << "error: runtime: blow-up in loss run\n";
        return 1;
      }
    return 0;
  }
  if (*cmd_scaling) {
    const ScalingResult result =
        scaling_run(params, proto.scale_factors, proto.s_over_sc,
                    proto.scale_reference_ratio, workers);
    write_scaling(result, out);
    std::cout << "scaling-run: slope=" << result.fit_slope
              << " R^2=" << result.fit_r_squared << '\n';
    return 0;
  }
  std::cerr << "error: usage: no subcommand\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: validation: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << '\n';
    return 1;
  }
}
