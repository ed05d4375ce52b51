#include "lightcrystal/driver.hpp"

#include <cmath>
#include <stdexcept>

#include "lightcrystal/observables.hpp"
#include "lightcrystal/rng.hpp"

namespace lightcrystal {

Potential build_potential(const ScatteringSolution& left,
                          const ScatteringSolution& right, double s_left,
                          double s_right, const ArrayXd& v_ext, double zeta) {
  const auto n = v_ext.size();
  if (left.envelope.size() != n || right.envelope.size() != n)
    throw std::invalid_argument("build_potential: grid mismatch");
  Potential p;
  p.i_total = s_left * left.envelope.abs2() + s_right * right.envelope.abs2();
  p.v = v_ext - 0.5 * zeta * p.i_total;
  return p;
}

void seed_fluctuations(Wavefunction& wf, double amplitude, std::uint64_t seed,
                       const Grid& grid, double trap_length) {
  if (amplitude < 0.0) throw std::invalid_argument("seed_fluctuations: amplitude < 0");
  if (amplitude == 0.0) return;
  const double previous_norm = l2_norm_sq(wf.psi, grid.dx);
  const double sigma =
      amplitude * std::sqrt(wf.psi.abs2().maxCoeff()) / std::sqrt(2.0);
  Rng rng(seed);
  for (int j = 0; j < grid.n; ++j) {
    if (std::abs(grid.x[j]) >= 0.5 * trap_length) continue;
    wf.psi[j] += sigma * Complex(rng.next_gaussian(), rng.next_gaussian());
  }
  wf.psi *= std::sqrt(previous_norm / l2_norm_sq(wf.psi, grid.dx));
  wf.norm = previous_norm;
}

CoupledDriver::CoupledDriver(const SimulationParams& params)
    : params_(params),
      grid_(Grid::make(params.box_length, params.n_grid)),
      transform_(grid_),
      stepper_(grid_, transform_),
      v_ext_(box_trap(grid_, params.trap_length, params.v_ext_height)) {
  state_.s_left = params.s_left;
  state_.s_right = params.s_right;
  reset_homogeneous();
}

void CoupledDriver::set_pumps(double s_left, double s_right) {
  if (s_left < 0.0 || s_right < 0.0)
    throw std::invalid_argument("set_pumps: intensity < 0");
  state_.s_left = s_left;
  state_.s_right = s_right;
  state_.consistent = false;
}

void CoupledDriver::reset_homogeneous() {
  ArrayXcd psi(grid_.n);
  for (int j = 0; j < grid_.n; ++j) {
    const double window = 1.0 - v_ext_[j] / params_.v_ext_height;
    psi[j] = std::sqrt(std::max(window, 0.0));
  }
  psi /= std::sqrt(l2_norm_sq(psi, grid_.dx));
  state_.wavefunction.psi = std::move(psi);
  state_.wavefunction.norm = 1.0;
  state_.time = 0.0;
  refresh_fields();
}

void CoupledDriver::set_wavefunction(ArrayXcd psi) {
  if (psi.size() != grid_.n) throw std::invalid_argument("set_wavefunction: grid mismatch");
  state_.wavefunction.psi = std::move(psi);
  state_.wavefunction.refresh_norm(grid_.dx);
  refresh_fields();
}

void CoupledDriver::refresh_fields() {
  const SusceptibilityProfile profile = susceptibility_from_density(
      state_.wavefunction.psi, params_.zeta, grid_.dx);
  state_.left_field = solve_scattering(profile, Injection::Left);
  state_.right_field = solve_scattering(profile, Injection::Right);
  state_.potential = build_potential(state_.left_field, state_.right_field,
                                     state_.s_left, state_.s_right, v_ext_,
                                     params_.zeta);
  state_.consistent = true;
}

void CoupledDriver::self_consistent_step(double dt) {
  refresh_fields();
  stepper_.real_step(state_.wavefunction, state_.potential, params_.gcN,
                     params_.gamma, dt);
  state_.time += dt;
  state_.consistent = false;  // density moved under the stored fields
}

GroundStateResult CoupledDriver::ground_state(const GroundStateOptions& options) {
  reset_homogeneous();
  if (options.apply_seed)
    seed_fluctuations(state_.wavefunction, params_.noise_amplitude,
                      params_.rng_seed, grid_, params_.trap_length);

  const double k_eff = effective_wavenumber(params_.zeta, params_.trap_length);
  GroundStateResult result;
  double previous_energy = 0.0;
  bool have_energy = false;
  ArrayXcd previous_psi = state_.wavefunction.psi;

  for (long iter = 1; iter <= params_.max_iters; ++iter) {
    refresh_fields();
    stepper_.imaginary_step(state_.wavefunction, state_.potential, params_.gcN,
                            params_.dtau);
    const EnergyBreakdown e = energy(state_.wavefunction, state_.potential,
                                     params_.gcN, grid_, transform_);
    result.iterations = iter;
    result.final_energy = e.total;
    result.psi_residual =
        std::sqrt(l2_norm_sq(state_.wavefunction.psi - previous_psi, grid_.dx));
    if (have_energy) {
      result.energy_residual = std::abs(e.total - previous_energy) /
                               std::max(std::abs(e.total), 1e-6);
      if (result.energy_residual < params_.tol_energy &&
          result.psi_residual < params_.tol_psi) {
        result.converged = true;
        break;
      }
    }
    previous_energy = e.total;
    have_energy = true;
    previous_psi = state_.wavefunction.psi;

    if (options.order_exit_eta > 0.0 && (iter % 50 == 0) &&
        eta(state_.wavefunction.psi, grid_, k_eff) > options.order_exit_eta) {
      result.ordered_exit = true;
      break;
    }
  }
  refresh_fields();
  return result;
}

EnergyBreakdown CoupledDriver::current_energy() const {
  return energy(state_.wavefunction, state_.potential, params_.gcN, grid_,
                transform_);
}

}  // namespace lightcrystal
