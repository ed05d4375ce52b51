#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lightcrystal/driver.hpp"
#include "lightcrystal/observables.hpp"
#include "lightcrystal/units.hpp"

namespace lightcrystal {

// Piecewise-linear pump schedule; values are clamped to the first/last
// breakpoint outside the covered time range. An empty schedule means
// constant pumping at the params values.
struct ScheduleBreakpoint {
  double t = 0.0;
  double s_left = 0.0;
  double s_right = 0.0;
};

struct RampSchedule {
  std::vector<ScheduleBreakpoint> breakpoints;

  bool empty() const { return breakpoints.empty(); }
  std::pair<double, double> at(double t) const;
  void check() const;  // throws on non-increasing times or negative s

  // 0 -> s over t_ramp, hold for t_hold, optionally back down over t_ramp.
  static RampSchedule trapezoid(double s_left, double s_right, double t_ramp,
                                double t_hold, bool down);
};

// One recorded run: everything needed to reproduce and analyze it.
struct RunRecord {
  SimulationParams params;
  RampSchedule schedule;
  std::vector<ObservableSample> samples;
  SystemState final_state;
  std::string version;
  std::uint64_t seed = 0;
  bool aborted = false;  // blow-up: samples end at the last good snapshot
  std::map<std::string, double> extras;
};

struct ScanPoint {
  double s = 0.0;  // per-beam intensity (total power for asymmetric scans)
  double eta = 0.0;
  double r_abs2 = 0.0;
  double transmitted = 0.0;
  double delta_phi = 0.0;
  bool ordered = false;
  bool converged = false;
};

struct ThresholdScanResult {
  std::vector<ScanPoint> table;
  double floor_eta = 0.0;
  double floor_r = 0.0;
  double threshold = 0.0;       // bisection-refined, eta classifier
  double bracket_low = 0.0;     // last non-ordered bisection point
  double bracket_high = 0.0;    // first ordered bisection point
  double scan_knee_eta = 0.0;   // first scan s with eta above the floor
  double scan_knee_r = 0.0;     // first scan s with |r|^2 above the floor
  double resolution = 0.0;
};

struct PhaseDiagramRow {
  double asymmetry = 0.0;
  double total_power_threshold = 0.0;
};

struct ScalingCurve {
  double factor = 0.0;
  std::vector<double> s_over_sc;
  std::vector<double> r_abs2;
  double r_at_reference = 0.0;
};

struct ScalingResult {
  std::vector<ScalingCurve> curves;
  double reference_ratio = 0.0;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double fit_r_squared = 0.0;
};

// Homogeneous and ordered phases are told apart by the 2k_eff spectral
// weight: a state counts as ordered once eta exceeds 10x the
// below-threshold floor, with the floor measured at 0.2x the calibrated
// critical intensity.
inline constexpr double kOrderFloorFraction = 0.2;
inline constexpr double kOrderFactor = 10.0;

// Runs fn(0..count-1) on a bounded pool; results must be written by index
// so the merge is deterministic regardless of completion order.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

// Real-time evolution from the relaxed zero-field state plus a noise seed,
// following the given schedule. The shared building block of the runs below.
RunRecord run_real_time(const SimulationParams& params,
                        const RampSchedule& schedule, double t_final);

// Sudden turn-on at the params pump values.
RunRecord quench_run(const SimulationParams& params);

// Linear ramp up over t_ramp, hold, and optionally ramp back down. When
// ramping down the record keeps the overlap with the homogeneous reference.
RunRecord ramp_run(const SimulationParams& params, double t_ramp,
                   double t_hold, bool down);

// Called for every coarse scan point with its converged state; points are
// independent, so sinks may write to per-index locations without locking.
using ScanPointSink =
    std::function<void(std::size_t index, const SystemState& state, const Grid& grid)>;

// Ground-state scan over per-beam intensities with bisection refinement of
// the ordering threshold. Throws if no knee lies inside the scanned range.
ThresholdScanResult threshold_scan(const SimulationParams& params,
                                   const std::vector<double>& s_values,
                                   double resolution, int workers = 1,
                                   const ScanPointSink& sink = {});

// Stability boundary of the homogeneous phase versus pump asymmetry
// (I_l - I_r)/(I_l + I_r), scanned over total power.
std::vector<PhaseDiagramRow> asymmetry_phase_diagram(
    const SimulationParams& params, const std::vector<double>& asymmetries,
    const std::vector<double>& total_power_values, double resolution,
    int workers = 1);

// Single-side drive; tracks the reflection flash and the momentum
// directionality (recorded per sample, with the flash-time value and onset
// stored in extras).
RunRecord superradiance_run(const SimulationParams& params);

// Quench runs for each loss rate, sharing the same initial state.
std::vector<RunRecord> loss_run(const SimulationParams& params,
                                const std::vector<double>& gamma_values);

// Particle-number proxy: zeta and gcN scaled together, intensities fixed as
// multiples of the corresponding critical intensity.
ScalingResult scaling_run(const SimulationParams& params,
                          const std::vector<double>& scale_factors,
                          const std::vector<double>& s_over_sc,
                          double reference_ratio, int workers = 1);

}  // namespace lightcrystal
