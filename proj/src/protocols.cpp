#include "lightcrystal/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "lightcrystal/rng.hpp"

namespace lightcrystal {

std::pair<double, double> RampSchedule::at(double t) const {
  if (breakpoints.empty()) throw std::logic_error("RampSchedule::at on empty schedule");
  if (t <= breakpoints.front().t)
    return {breakpoints.front().s_left, breakpoints.front().s_right};
  if (t >= breakpoints.back().t)
    return {breakpoints.back().s_left, breakpoints.back().s_right};
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (t <= breakpoints[i].t) {
      const auto& a = breakpoints[i - 1];
      const auto& b = breakpoints[i];
      const double w = (t - a.t) / (b.t - a.t);
      return {a.s_left + w * (b.s_left - a.s_left),
              a.s_right + w * (b.s_right - a.s_right)};
    }
  }
  return {breakpoints.back().s_left, breakpoints.back().s_right};
}

void RampSchedule::check() const {
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i].s_left < 0.0 || breakpoints[i].s_right < 0.0)
      throw std::invalid_argument("schedule: intensities must be >= 0");
    if (i > 0 && !(breakpoints[i].t > breakpoints[i - 1].t))
      throw std::invalid_argument("schedule: breakpoint times must be strictly increasing");
  }
}

RampSchedule RampSchedule::trapezoid(double s_left, double s_right,
                                     double t_ramp, double t_hold, bool down) {
  RampSchedule sched;
  if (t_ramp <= 0.0) {
    sched.breakpoints.push_back({0.0, s_left, s_right});
  } else {
    sched.breakpoints.push_back({0.0, 0.0, 0.0});
    sched.breakpoints.push_back({t_ramp, s_left, s_right});
  }
  if (down) {
    const double t_up = std::max(t_ramp, 0.0);
    sched.breakpoints.push_back({t_up + t_hold, s_left, s_right});
    sched.breakpoints.push_back({t_up + t_hold + std::max(t_ramp, 1e-9), 0.0, 0.0});
  }
  sched.check();
  return sched;
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t pool =
      std::min<std::size_t>(count, workers > 0 ? workers : hw);
  if (pool <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (std::size_t w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failed.load()) std::rethrow_exception(error);
}

namespace {

// Relax without light, then kick with noise: the standard starting point of
// every real-time run.
void prepare_seeded_start(CoupledDriver& driver) {
  const SimulationParams& p = driver.params();
  driver.set_pumps(0.0, 0.0);
  GroundStateOptions opts;
  opts.apply_seed = false;
  driver.ground_state(opts);
  driver.state().time = 0.0;
  seed_fluctuations(driver.state().wavefunction, p.noise_amplitude, p.rng_seed,
                    driver.grid(), p.trap_length);
}

struct RealTimeExtras {
  std::vector<double>* directionality = nullptr;
};

RunRecord evolve(CoupledDriver& driver, const RampSchedule& schedule,
                 double t_final, const RealTimeExtras& hooks = {}) {
  const SimulationParams& p = driver.params();
  RunRecord record;
  record.params = p;
  record.schedule = schedule;
  record.version = kVersion;
  record.seed = p.rng_seed;

  const long n_steps = std::lround(t_final / p.dt);
  auto sample_now = [&] {
    record.samples.push_back(sample_observables(
        driver.state(), p, driver.grid(), driver.transform()));
    if (hooks.directionality)
      hooks.directionality->push_back(momentum_directionality(
          driver.state().wavefunction.psi, driver.grid(), driver.transform()));
  };

  const auto s0 = schedule.at(0.0);
  driver.set_pumps(s0.first, s0.second);
  driver.refresh_fields();
  sample_now();

  for (long step = 0; step < n_steps; ++step) {
    const double t_mid = driver.state().time + 0.5 * p.dt;
    const auto s = schedule.at(t_mid);
    driver.set_pumps(s.first, s.second);
    try {
      driver.self_consistent_step(p.dt);
    } catch (const std::runtime_error&) {
      record.aborted = true;
      record.extras["abort_time"] = driver.state().time;
      break;
    }
    if ((step + 1) % p.sample_stride == 0 || step + 1 == n_steps) {
      driver.refresh_fields();
      sample_now();
    }
  }
  record.final_state = driver.state();
  return record;
}

bool is_ordered(double eta_value, double floor_eta) {
  return eta_value > kOrderFactor * floor_eta;
}

ScanPoint converge_and_measure(CoupledDriver& driver, double s_left,
                               double s_right, double order_exit_eta) {
  const SimulationParams& params = driver.params();
  driver.set_pumps(s_left, s_right);
  GroundStateOptions opts;
  opts.order_exit_eta = order_exit_eta;
  const GroundStateResult gs = driver.ground_state(opts);
  const double k_eff = effective_wavenumber(params.zeta, params.trap_length);
  ScanPoint point;
  point.eta = eta(driver.state().wavefunction.psi, driver.grid(), k_eff);
  point.r_abs2 = std::norm(driver.state().left_field.r);
  point.transmitted = transmitted_fraction(driver.state());
  point.delta_phi = phase_lock_offset(
      driver.state().left_field.envelope, driver.state().right_field.envelope,
      driver.grid(), k_eff, 0.5 * params.trap_length);
  point.converged = gs.converged || gs.ordered_exit;
  return point;
}

ScanPoint evaluate_ground_state_point(const SimulationParams& params,
                                      double s_left, double s_right,
                                      double order_exit_eta) {
  CoupledDriver driver(params);
  return converge_and_measure(driver, s_left, s_right, order_exit_eta);
}

struct Classifier {
  double floor_eta = 0.0;
  double floor_r = 0.0;
};

Classifier measure_floor(const SimulationParams& params, double s_left_floor,
                         double s_right_floor) {
  ScanPoint p = evaluate_ground_state_point(params, s_left_floor, s_right_floor,
                                            -1.0);
  Classifier c;
  // Guard against an exactly-zero floor on noiseless profiles.
  c.floor_eta = std::max(p.eta, 1e-14);
  c.floor_r = std::max(p.r_abs2, 1e-14);
  return c;
}

double bisect_threshold(const SimulationParams& params, double asymmetry,
                        bool per_beam, double lo, double hi,
                        double floor_eta, double resolution,
                        double* bracket_lo, double* bracket_hi) {
  // `per_beam` scans symmetric per-beam intensity; otherwise `s` is the
  // total power split according to the asymmetry.
  auto pumps = [&](double s) -> std::pair<double, double> {
    if (per_beam) return {s, s};
    return {0.5 * s * (1.0 + asymmetry), 0.5 * s * (1.0 - asymmetry)};
  };
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    const auto [sl, sr] = pumps(mid);
    const ScanPoint p = evaluate_ground_state_point(params, sl, sr,
                                                    kOrderFactor * floor_eta);
    if (is_ordered(p.eta, floor_eta))
      hi = mid;
    else
      lo = mid;
  }
  if (bracket_lo) *bracket_lo = lo;
  if (bracket_hi) *bracket_hi = hi;
  return 0.5 * (lo + hi);
}

}  // namespace

RunRecord run_real_time(const SimulationParams& params,
                        const RampSchedule& schedule, double t_final) {
  RampSchedule effective = schedule;
  if (effective.empty())
    effective.breakpoints.push_back({0.0, params.s_left, params.s_right});
  effective.check();
  CoupledDriver driver(params);
  prepare_seeded_start(driver);
  return evolve(driver, effective, t_final);
}

RunRecord quench_run(const SimulationParams& params) {
  RampSchedule constant;
  constant.breakpoints.push_back({0.0, params.s_left, params.s_right});
  return run_real_time(params, constant, params.t_final);
}

RunRecord ramp_run(const SimulationParams& params, double t_ramp,
                   double t_hold, bool down) {
  if (t_ramp < 0.0) throw std::invalid_argument("ramp_run: t_ramp must be >= 0");
  const RampSchedule schedule =
      RampSchedule::trapezoid(params.s_left, params.s_right, t_ramp, t_hold, down);
  const double tail = down ? 20.0 : 0.0;
  const double t_final =
      std::max(params.t_final, schedule.breakpoints.back().t + tail);

  CoupledDriver driver(params);
  prepare_seeded_start(driver);
  // Keep the pre-seed homogeneous reference for the reversibility overlap.
  CoupledDriver reference(params);
  reference.set_pumps(0.0, 0.0);
  GroundStateOptions opts;
  opts.apply_seed = false;
  reference.ground_state(opts);

  RunRecord record = evolve(driver, schedule, t_final);
  double peak_e_kin = 0.0;
  for (const auto& s : record.samples) peak_e_kin = std::max(peak_e_kin, s.e_kin);
  record.extras["peak_e_kin"] = peak_e_kin;
  record.extras["final_e_kin"] = record.samples.back().e_kin;
  if (down) {
    const ArrayXcd& a = record.final_state.wavefunction.psi;
    const ArrayXcd& b = reference.state().wavefunction.psi;
    Complex overlap(0.0, 0.0);
    for (int j = 0; j < driver.grid().n; ++j)
      overlap += std::conj(a[j]) * b[j];
    overlap *= driver.grid().dx;
    const double denom =
        record.final_state.wavefunction.norm * reference.state().wavefunction.norm;
    record.extras["fidelity_homogeneous"] = std::norm(overlap) / denom;
  }
  return record;
}

ThresholdScanResult threshold_scan(const SimulationParams& params,
                                   const std::vector<double>& s_values,
                                   double resolution, int workers,
                                   const ScanPointSink& sink) {
  if (s_values.size() < 2)
    throw std::invalid_argument("threshold_scan: need at least two scan points");
  if (!std::is_sorted(s_values.begin(), s_values.end()))
    throw std::invalid_argument("threshold_scan: s_values must be ascending");
  if (!(resolution > 0.0))
    throw std::invalid_argument("threshold_scan: resolution must be > 0");

  const double s_c = critical_intensity_per_beam(params.zeta);
  const double s_floor = kOrderFloorFraction * s_c;
  const Classifier floor = measure_floor(params, s_floor, s_floor);

  ThresholdScanResult result;
  result.resolution = resolution;
  result.floor_eta = floor.floor_eta;
  result.floor_r = floor.floor_r;
  result.table.resize(s_values.size());
  parallel_for(s_values.size(), workers, [&](std::size_t i) {
    CoupledDriver driver(params);
    ScanPoint p = converge_and_measure(driver, s_values[i], s_values[i], -1.0);
    p.s = s_values[i];
    p.ordered = is_ordered(p.eta, floor.floor_eta);
    result.table[i] = p;
    if (sink) sink(i, driver.state(), driver.grid());
  });

  std::size_t first_ordered = result.table.size();
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    if (result.table[i].ordered) {
      first_ordered = i;
      break;
    }
  }
  if (first_ordered == result.table.size() || first_ordered == 0)
    throw std::runtime_error("threshold_scan: no ordering knee inside the scanned range");

  result.scan_knee_eta = result.table[first_ordered].s;
  result.scan_knee_r = result.scan_knee_eta;
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    if (result.table[i].r_abs2 > kOrderFactor * floor.floor_r) {
      result.scan_knee_r = result.table[i].s;
      break;
    }
  }

  result.threshold = bisect_threshold(
      params, 0.0, true, result.table[first_ordered - 1].s,
      result.table[first_ordered].s, floor.floor_eta, resolution,
      &result.bracket_low, &result.bracket_high);
  return result;
}

std::vector<PhaseDiagramRow> asymmetry_phase_diagram(
    const SimulationParams& params, const std::vector<double>& asymmetries,
    const std::vector<double>& total_power_values, double resolution,
    int workers) {
  if (total_power_values.size() < 2)
    throw std::invalid_argument("asymmetry_phase_diagram: need a power grid");
  for (double a : asymmetries)
    if (a < 0.0 || a > 1.0)
      throw std::invalid_argument("asymmetry_phase_diagram: asymmetry outside [0,1]");

  const double total_c = 1.0 / (params.zeta * params.zeta);
  const double p_floor = kOrderFloorFraction * total_c;

  std::vector<PhaseDiagramRow> rows(asymmetries.size());
  parallel_for(asymmetries.size(), workers, [&](std::size_t i) {
    const double asym = asymmetries[i];
    const Classifier floor = measure_floor(
        params, 0.5 * p_floor * (1.0 + asym), 0.5 * p_floor * (1.0 - asym));
    // Coarse scan over total power, then bisection inside the bracket.
    double lo = 0.0, hi = 0.0;
    bool found = false;
    double previous = total_power_values.front();
    for (double power : total_power_values) {
      const ScanPoint p = evaluate_ground_state_point(
          params, 0.5 * power * (1.0 + asym), 0.5 * power * (1.0 - asym),
          kOrderFactor * floor.floor_eta);
      if (is_ordered(p.eta, floor.floor_eta)) {
        lo = previous;
        hi = power;
        found = true;
        break;
      }
      previous = power;
    }
    if (!found)
      throw std::runtime_error("asymmetry_phase_diagram: no instability inside power range");
    rows[i].asymmetry = asym;
    rows[i].total_power_threshold = bisect_threshold(
        params, asym, false, lo, hi, floor.floor_eta, resolution, nullptr, nullptr);
  });
  return rows;
}

RunRecord superradiance_run(const SimulationParams& params) {
  SimulationParams p = params;
  p.s_right = 0.0;
  RampSchedule constant;
  constant.breakpoints.push_back({0.0, p.s_left, 0.0});

  CoupledDriver driver(p);
  prepare_seeded_start(driver);
  std::vector<double> directionality;
  RealTimeExtras hooks;
  hooks.directionality = &directionality;
  RunRecord record = evolve(driver, constant, p.t_final, hooks);

  // Flash analytics: peak of |r|^2, onset at half maximum, late-time mean.
  std::size_t peak_index = 0;
  for (std::size_t i = 1; i < record.samples.size(); ++i)
    if (record.samples[i].r_abs2_left > record.samples[peak_index].r_abs2_left)
      peak_index = i;
  const double peak = record.samples[peak_index].r_abs2_left;
  double onset = record.samples[peak_index].t;
  for (std::size_t i = 0; i <= peak_index; ++i) {
    if (record.samples[i].r_abs2_left >= 0.5 * peak) {
      onset = record.samples[i].t;
      break;
    }
  }
  const std::size_t tail_start = record.samples.size() * 3 / 4;
  double late_mean = 0.0;
  for (std::size_t i = tail_start; i < record.samples.size(); ++i)
    late_mean += record.samples[i].r_abs2_left;
  late_mean /= std::max<std::size_t>(1, record.samples.size() - tail_start);

  record.extras["flash_peak"] = peak;
  record.extras["flash_time"] = record.samples[peak_index].t;
  record.extras["flash_onset"] = onset;
  record.extras["late_mean_r"] = late_mean;
  record.extras["directionality_at_flash"] = directionality[peak_index];
  return record;
}

std::vector<RunRecord> loss_run(const SimulationParams& params,
                                const std::vector<double>& gamma_values) {
  for (double g : gamma_values)
    if (g < 0.0) throw std::invalid_argument("loss_run: gamma must be >= 0");
  std::vector<RunRecord> records;
  records.reserve(gamma_values.size());
  for (double g : gamma_values) {
    SimulationParams p = params;
    p.gamma = g;
    records.push_back(quench_run(p));
  }
  return records;
}

ScalingResult scaling_run(const SimulationParams& params,
                          const std::vector<double>& scale_factors,
                          const std::vector<double>& s_over_sc,
                          double reference_ratio, int workers) {
  for (double f : scale_factors)
    if (!(f > 0.0)) throw std::invalid_argument("scaling_run: factors must be > 0");
  if (s_over_sc.empty())
    throw std::invalid_argument("scaling_run: need intensity ratios");

  ScalingResult result;
  result.reference_ratio = reference_ratio;
  result.curves.resize(scale_factors.size());

  struct Job {
    std::size_t curve;
    std::size_t point;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < scale_factors.size(); ++c) {
    result.curves[c].factor = scale_factors[c];
    result.curves[c].s_over_sc = s_over_sc;
    result.curves[c].r_abs2.assign(s_over_sc.size(), 0.0);
    for (std::size_t m = 0; m < s_over_sc.size(); ++m) jobs.push_back({c, m});
  }
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const Job job = jobs[i];
    SimulationParams p = params;
    p.zeta *= scale_factors[job.curve];
    p.gcN *= scale_factors[job.curve];
    const double s = s_over_sc[job.point] * critical_intensity_per_beam(p.zeta);
    const ScanPoint point = evaluate_ground_state_point(p, s, s, -1.0);
    result.curves[job.curve].r_abs2[job.point] = point.r_abs2;
  });

  // |r|^2 at the reference ratio versus particle-number factor.
  std::vector<double> xs, ys;
  for (auto& curve : result.curves) {
    double best = 0.0, best_dist = 1e300;
    for (std::size_t m = 0; m < curve.s_over_sc.size(); ++m) {
      const double d = std::abs(curve.s_over_sc[m] - reference_ratio);
      if (d < best_dist) {
        best_dist = d;
        best = curve.r_abs2[m];
      }
    }
    curve.r_at_reference = best;
    xs.push_back(curve.factor);
    ys.push_back(best);
  }
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (n >= 2 && std::abs(denom) > 1e-300) {
    result.fit_slope = (n * sxy - sx * sy) / denom;
    result.fit_intercept = (sy - result.fit_slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean_y = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
      const double fit = result.fit_intercept + result.fit_slope * xs[i];
      ss_res += (ys[i] - fit) * (ys[i] - fit);
      ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    result.fit_r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return result;
}

}  // namespace lightcrystal
