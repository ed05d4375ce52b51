#pragma once

#include <cstdint>

#include "lightcrystal/dynamics.hpp"
#include "lightcrystal/grid.hpp"
#include "lightcrystal/scattering.hpp"
#include "lightcrystal/units.hpp"

namespace lightcrystal {

// Snapshot of the coupled system: condensate, both field solutions and the
// potential they generate. `consistent` is set whenever the potential was
// rebuilt from the stored fields for the stored density.
struct SystemState {
  Wavefunction wavefunction;
  ScatteringSolution left_field;
  ScatteringSolution right_field;
  Potential potential;
  double time = 0.0;
  double s_left = 0.0;
  double s_right = 0.0;
  bool consistent = false;
};

// Dimensionless optical potential V/E_rec = -(zeta/2)(s_l |u_L|^2 +
// s_r |u_R|^2) + V_ext/E_rec built from unit-incidence envelopes.
Potential build_potential(const ScatteringSolution& left,
                          const ScatteringSolution& right, double s_left,
                          double s_right, const ArrayXd& v_ext, double zeta);

// Adds zero-mean complex white noise of RMS amplitude*max|psi| inside the
// trap region, then restores the previous norm. Deterministic in the seed.
void seed_fluctuations(Wavefunction& wf, double amplitude, std::uint64_t seed,
                       const Grid& grid, double trap_length);

struct GroundStateOptions {
  bool apply_seed = true;
  // Stop early once the 2k_eff spectral weight ratio exceeds this value
  // (used by threshold scans to classify clearly ordered points); disabled
  // when negative.
  double order_exit_eta = -1.0;
};

struct GroundStateResult {
  bool converged = false;
  bool ordered_exit = false;
  long iterations = 0;
  double final_energy = 0.0;
  double energy_residual = 0.0;
  double psi_residual = 0.0;
};

// Owns one coupled trajectory: density -> susceptibility -> two scattering
// solves -> optical potential -> condensate step, with the field refreshed
// once per step in both real and imaginary time. Instances are independent;
// run one per thread for sweeps.
class CoupledDriver {
 public:
  explicit CoupledDriver(const SimulationParams& params);

  const SimulationParams& params() const { return params_; }
  const Grid& grid() const { return grid_; }
  const SpectralTransform& transform() const { return transform_; }
  const ArrayXd& external_potential() const { return v_ext_; }
  SystemState& state() { return state_; }
  const SystemState& state() const { return state_; }

  // Pump intensities used by the next field refresh (I0 per beam).
  void set_pumps(double s_left, double s_right);

  // Resets time to zero and the wavefunction to the smooth homogeneous
  // in-trap profile.
  void reset_homogeneous();
  void set_wavefunction(ArrayXcd psi);

  // Recomputes chi from the current density, solves both beams and rebuilds
  // the potential.
  void refresh_fields();

  // One real-time step at the current pump values.
  void self_consistent_step(double dt);

  // Imaginary-time relaxation with per-step field refresh and a
  // symmetry-breaking noise kick at iteration 0. Converged when both the
  // relative energy change and the L2 wavefunction change per step drop
  // below the configured tolerances.
  GroundStateResult ground_state(const GroundStateOptions& options = {});

  EnergyBreakdown current_energy() const;

 private:
  SimulationParams params_;
  Grid grid_;
  SpectralTransform transform_;
  Stepper stepper_;
  ArrayXd v_ext_;
  SystemState state_;
};

}  // namespace lightcrystal
