#pragma once

#include <vector>

#include "lightcrystal/driver.hpp"
#include "lightcrystal/grid.hpp"
#include "lightcrystal/scattering.hpp"
#include "lightcrystal/types.hpp"

namespace lightcrystal {

// Everything the runs record, one row per sample time.
struct ObservableSample {
  double t = 0.0;
  double r_abs2_left = 0.0;
  double r_abs2_right = 0.0;
  double r_phase = 0.0;
  double t_phase = 0.0;
  double eta = 0.0;
  double delta_phi = 0.0;
  double e_kin = 0.0;
  double norm = 0.0;
  double density_order = 0.0;
  double mean_x = 0.0;
};

// Spectral weight ratio |psi(2 k_eff)|^2 / |psi(k=0)|^2 with the 2 k_eff
// component evaluated by direct projection at exactly that wavenumber
// (it is generally incommensurate with the DFT grid).
double eta(const ArrayXcd& psi, const Grid& grid, double k_eff);

// |density component at wavenumber q| (q in k0 units), direct projection.
double density_order_parameter(const ArrayXcd& psi, const Grid& grid, double q);
Complex density_projection(const ArrayXd& values, const Grid& grid, double q);

// Relative spatial offset of the two standing-wave intensity patterns,
// folded to [0, pi]; measured from the 2 k_eff components over a central
// window (width window_length) to exclude the wall transition regions.
// Returns NaN when either pattern has no standing-wave component.
double phase_lock_offset(const ArrayXcd& left_envelope,
                         const ArrayXcd& right_envelope, const Grid& grid,
                         double k_eff, double window_length);

struct ReflectionObservables {
  double r_abs2 = 0.0;
  double r_phase = 0.0;  // NaN when |r| is numerically zero
  double t_phase = 0.0;
};

ReflectionObservables reflection_observables(const ScatteringSolution& solution);

// |t|^2 of the left-injected beam.
double transmitted_fraction(const SystemState& state);

// Population variance over the trailing `window` recorded samples.
double reflectivity_variance(const std::vector<double>& series, int window = 50);

double kinetic_energy(const ArrayXcd& psi, const Grid& grid,
                      const SpectralTransform& transform);

double mean_position(const ArrayXcd& psi, const Grid& grid);

// |psi(k)|^2 over the DFT momenta, normalized to unit total weight.
ArrayXd momentum_distribution(const ArrayXcd& psi, const Grid& grid,
                              const SpectralTransform& transform);

// Sum over k>0 minus sum over k<0 of the normalized momentum distribution.
double momentum_directionality(const ArrayXcd& psi, const Grid& grid,
                               const SpectralTransform& transform);

ObservableSample sample_observables(const SystemState& state,
                                    const SimulationParams& params,
                                    const Grid& grid,
                                    const SpectralTransform& transform);

}  // namespace lightcrystal
