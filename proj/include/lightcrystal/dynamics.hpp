#pragma once

#include "lightcrystal/grid.hpp"
#include "lightcrystal/types.hpp"

namespace lightcrystal {

struct Wavefunction {
  ArrayXcd psi;
  double norm = 0.0;  // cached integral of |psi|^2 dx

  void refresh_norm(double dx);
};

// Optical plus external potential on the grid (E_rec), together with the
// total dimensionless intensity that drives the loss term.
struct Potential {
  ArrayXd v;
  ArrayXd i_total;
};

struct EnergyBreakdown {
  double total = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double interaction = 0.0;
};

// Smooth box trap: walls of the given height outside +-trap_length/2 with
// tanh edges about lambda0/4 wide, keeping the condensate away from the
// periodic seam.
ArrayXd box_trap(const Grid& grid, double trap_length, double height);

double l2_norm_sq(const ArrayXcd& psi, double dx);

// Strang-split integrator for the condensate equation with a frozen
// potential: half kinetic step in momentum space, full pointwise
// potential/nonlinear/loss step, half kinetic step. One instance owns its
// scratch buffers and serves one state at a time; independent instances may
// run in parallel.
//
// Accuracy is second order in dt as long as dt * max|V + gcN |psi|^2| stays
// well below one in recoil units.
class Stepper {
 public:
  Stepper(const Grid& grid, const SpectralTransform& transform);

  // One real-time step of the condensate equation including the
  // -i gamma i_total(x) psi loss term. Throws on non-finite output.
  void real_step(Wavefunction& wf, const Potential& potential, double gcN,
                 double gamma, double dt);

  // One Wick-rotated step; renormalizes to unit norm afterwards.
  void imaginary_step(Wavefunction& wf, const Potential& potential, double gcN,
                      double dtau);

  const Grid& grid() const { return *grid_; }

 private:
  void kinetic_half_real(ArrayXcd& psi, double dt);
  void kinetic_half_imag(ArrayXcd& psi, double dtau);

  const Grid* grid_;
  const SpectralTransform* transform_;
  ArrayXcd half_phase_;   // cached e^{-i k^2 dt/2}
  ArrayXd half_decay_;    // cached e^{-k^2 dtau/2}
  double cached_dt_ = 0.0;
  double cached_dtau_ = 0.0;
};

// Grid GP energy functional; kinetic part evaluated spectrally. All terms
// in E_rec for the state as passed (normalize first if that is intended).
EnergyBreakdown energy(const Wavefunction& wf, const Potential& potential,
                       double gcN, const Grid& grid,
                       const SpectralTransform& transform);

}  // namespace lightcrystal
