#include "lightcrystal/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace lightcrystal {

void Wavefunction::refresh_norm(double dx) { norm = l2_norm_sq(psi, dx); }

ArrayXd box_trap(const Grid& grid, double trap_length, double height) {
  const double edge = 0.125;  // tanh scale; 10-90% rise over ~lambda0/4
  ArrayXd v(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x[j];
    const double inside = 0.5 * (std::tanh((x + 0.5 * trap_length) / edge) -
                                 std::tanh((x - 0.5 * trap_length) / edge));
    v[j] = height * (1.0 - inside);
  }
  return v;
}

double l2_norm_sq(const ArrayXcd& psi, double dx) {
  long double acc = 0.0L;
  for (Eigen::Index j = 0; j < psi.size(); ++j) acc += std::norm(psi[j]);
  return static_cast<double>(acc) * dx;
}

Stepper::Stepper(const Grid& grid, const SpectralTransform& transform)
    : grid_(&grid), transform_(&transform) {
  half_phase_.resize(grid.n);
  half_decay_.resize(grid.n);
}

void Stepper::kinetic_half_real(ArrayXcd& psi, double dt) {
  if (dt != cached_dt_) {
    for (int m = 0; m < grid_->n; ++m) {
      const double e = grid_->k[m] * grid_->k[m];  // E_rec for mode k
      const double a = -0.5 * e * dt;
      half_phase_[m] = Complex(std::cos(a), std::sin(a));
    }
    cached_dt_ = dt;
  }
  transform_->dft(psi);
  psi *= half_phase_;
  transform_->idft(psi);
}

void Stepper::kinetic_half_imag(ArrayXcd& psi, double dtau) {
  if (dtau != cached_dtau_) {
    for (int m = 0; m < grid_->n; ++m) {
      const double e = grid_->k[m] * grid_->k[m];
      half_decay_[m] = std::exp(-0.5 * e * dtau);
    }
    cached_dtau_ = dtau;
  }
  transform_->dft(psi);
  psi *= half_decay_;
  transform_->idft(psi);
}

void Stepper::real_step(Wavefunction& wf, const Potential& potential,
                        double gcN, double gamma, double dt) {
  ArrayXcd& psi = wf.psi;
  if (psi.size() != grid_->n || potential.v.size() != grid_->n)
    throw std::invalid_argument("real_step: grid mismatch");

  kinetic_half_real(psi, dt);
  for (int j = 0; j < grid_->n; ++j) {
    const double density = std::norm(psi[j]);
    double amp = 1.0;
    double interaction = gcN * density * dt;
    if (gamma > 0.0) {
      const double rate = gamma * potential.i_total[j];
      amp = std::exp(-rate * dt);
      // Nonlinear phase integrated over the decaying density: the pointwise
      // substep is exact even with loss.
      const double ex = 2.0 * rate * dt;
      if (ex > 1e-12) interaction = gcN * density * (-std::expm1(-ex)) / (2.0 * rate);
    }
    const double theta = -(potential.v[j] * dt + interaction);
    psi[j] *= amp * Complex(std::cos(theta), std::sin(theta));
  }
  kinetic_half_real(psi, dt);

  wf.refresh_norm(grid_->dx);
  if (!std::isfinite(wf.norm) || !psi.allFinite())
    throw std::runtime_error("real_step: non-finite wavefunction (blow-up)");
}

void Stepper::imaginary_step(Wavefunction& wf, const Potential& potential,
                             double gcN, double dtau) {
  ArrayXcd& psi = wf.psi;
  if (psi.size() != grid_->n || potential.v.size() != grid_->n)
    throw std::invalid_argument("imaginary_step: grid mismatch");

  kinetic_half_imag(psi, dtau);
  for (int j = 0; j < grid_->n; ++j) {
    const double density = std::norm(psi[j]);
    psi[j] *= std::exp(-(potential.v[j] + gcN * density) * dtau);
  }
  kinetic_half_imag(psi, dtau);

  const double nrm = l2_norm_sq(psi, grid_->dx);
  if (!std::isfinite(nrm) || nrm <= 0.0)
    throw std::runtime_error("imaginary_step: non-finite wavefunction");
  psi /= std::sqrt(nrm);
  wf.norm = 1.0;
}

EnergyBreakdown energy(const Wavefunction& wf, const Potential& potential,
                       double gcN, const Grid& grid,
                       const SpectralTransform& transform) {
  ArrayXcd spectrum = wf.psi;
  transform.dft(spectrum);
  // Unnormalized DFT: sum_m |c_m|^2 = n sum_j |psi_j|^2.
  long double kin = 0.0L;
  for (int m = 0; m < grid.n; ++m)
    kin += static_cast<long double>(grid.k[m] * grid.k[m]) * std::norm(spectrum[m]);
  kin *= grid.dx / grid.n;

  long double pot = 0.0L, inter = 0.0L;
  for (int j = 0; j < grid.n; ++j) {
    const double density = std::norm(wf.psi[j]);
    pot += potential.v[j] * density;
    inter += density * density;
  }
  pot *= grid.dx;
  inter *= 0.5 * gcN * grid.dx;

  EnergyBreakdown e;
  e.kinetic = static_cast<double>(kin);
  e.potential = static_cast<double>(pot);
  e.interaction = static_cast<double>(inter);
  e.total = static_cast<double>(kin + pot + inter);
  return e;
}

}  // namespace lightcrystal
