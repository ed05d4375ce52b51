#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lightcrystal/types.hpp"

namespace lightcrystal {

// Conversion anchor between the internal recoil units and SI. Internally
// lambda0 = 1, E_rec = hbar^2 k0^2 / (2 m) = 1, omega_rec = E_rec/hbar = 1
// and I0 = c E_rec / (lambda0 A) = 1; this struct only matters when talking
// to the outside world.
struct UnitSystem {
  double mass_si = 1.44316060e-25;       // kg
  double lambda0_si = 780.241e-9;        // m
  double cross_section_si = 1.0e-12;     // m^2, transverse area A

  double wavenumber_si() const;          // k0 = 2 pi / lambda0, 1/m
  double recoil_energy_si() const;       // J
  double recoil_frequency_si() const;    // rad/s
  double intensity_unit_si() const;      // W/m^2

  double length_to_si(double x) const { return x * lambda0_si; }
  double length_from_si(double x_si) const { return x_si / lambda0_si; }
  double time_to_si(double t) const { return t / recoil_frequency_si(); }
  double time_from_si(double t_si) const { return t_si * recoil_frequency_si(); }
  double energy_to_si(double e) const { return e * recoil_energy_si(); }
  double energy_from_si(double e_si) const { return e_si / recoil_energy_si(); }
  double intensity_to_si(double s) const { return s * intensity_unit_si(); }
  double intensity_from_si(double i_si) const { return i_si / intensity_unit_si(); }
};

// Every knob of a run, all dimensionless (recoil units). The particle number
// is absorbed into zeta and gcN; intensities are per incoming beam in I0.
struct SimulationParams {
  double zeta = 0.2;             // light-matter coupling
  double gcN = 1.0;              // contact interaction strength, E_rec*lambda0
  double trap_length = 24.0;     // box-trap extent L, lambda0
  double box_length = 30.0;      // computational domain, lambda0
  int n_grid = 1024;             // grid points, power of two
  double dt = 1.0e-3;            // real-time step, 1/omega_rec
  double s_left = 0.0;           // left pump intensity, I0
  double s_right = 0.0;          // right pump intensity, I0
  double gamma = 0.0;            // loss rate per unit (I/I0), omega_rec
  double v_ext_height = 1.0e3;   // trap wall height, E_rec
  double noise_amplitude = 1.0e-4;
  std::uint64_t rng_seed = 1;

  // Ground-state search controls.
  double dtau = 1.0e-3;          // imaginary-time step
  long max_iters = 200000;
  double tol_energy = 1.0e-10;   // relative energy change per step
  double tol_psi = 1.0e-9;       // L2 wavefunction change per step

  // Real-time run controls.
  double t_final = 20.0;
  int sample_stride = 10;

  double dx() const { return box_length / n_grid; }
};

struct ValidationIssue {
  std::string key;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;

  void fail(std::string key, std::string message);
};

// Checks every invariant; never throws. Params that pass are accepted
// unchanged by all other modules.
ValidationReport validate(const SimulationParams& params);

// Per-beam crystallization threshold under symmetric pumping, in I0.
// Calibrated so the total threshold is 1/zeta^2.
double critical_intensity_per_beam(double zeta);

// Emergent lattice wavenumber sqrt(1 + zeta/L) in units of k0, for a
// homogeneous condensate of length L (lambda0 units).
double effective_wavenumber(double zeta, double trap_length);

}  // namespace lightcrystal
