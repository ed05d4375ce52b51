#include "lightcrystal/observables.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lightcrystal/units.hpp"

namespace lightcrystal {

namespace {

// (1/box) sum_j f_j e^{-i 2 pi q x_j} dx at an arbitrary wavenumber q.
template <typename Array>
Complex projection(const Array& values, const Grid& grid, double q) {
  const double angular = 2.0 * kPi * q;
  Complex acc(0.0, 0.0);
  for (int j = 0; j < grid.n; ++j) {
    const double a = -angular * grid.x[j];
    acc += Complex(values[j]) * Complex(std::cos(a), std::sin(a));
  }
  return acc * (grid.dx / grid.box_length);
}

}  // namespace

double eta(const ArrayXcd& psi, const Grid& grid, double k_eff) {
  const Complex c0 = projection(psi, grid, 0.0);
  const Complex c2 = projection(psi, grid, 2.0 * k_eff);
  // A trapped normalized state always carries k = 0 weight.
  assert(std::abs(c0) > 1e-14);
  return std::norm(c2) / std::norm(c0);
}

Complex density_projection(const ArrayXd& values, const Grid& grid, double q) {
  return projection(values, grid, q);
}

double density_order_parameter(const ArrayXcd& psi, const Grid& grid, double q) {
  const ArrayXd density = psi.abs2();
  return std::abs(projection(density, grid, q));
}

double phase_lock_offset(const ArrayXcd& left_envelope,
                         const ArrayXcd& right_envelope, const Grid& grid,
                         double k_eff, double window_length) {
  if (left_envelope.size() != grid.n || right_envelope.size() != grid.n)
    throw std::invalid_argument("phase_lock_offset: grid mismatch");
  const double angular = 2.0 * kPi * (2.0 * k_eff);
  Complex c_left(0.0, 0.0), c_right(0.0, 0.0);
  for (int j = 0; j < grid.n; ++j) {
    if (std::abs(grid.x[j]) > 0.5 * window_length) continue;
    const double a = -angular * grid.x[j];
    const Complex w(std::cos(a), std::sin(a));
    c_left += std::norm(left_envelope[j]) * w;
    c_right += std::norm(right_envelope[j]) * w;
  }
  const double floor = 1e-12 * grid.n;
  if (std::abs(c_left) < floor || std::abs(c_right) < floor)
    return std::numeric_limits<double>::quiet_NaN();
  return std::abs(std::arg(c_left * std::conj(c_right)));
}

ReflectionObservables reflection_observables(const ScatteringSolution& solution) {
  ReflectionObservables out;
  out.r_abs2 = std::norm(solution.r);
  out.r_phase = std::abs(solution.r) < 1e-12
                    ? std::numeric_limits<double>::quiet_NaN()
                    : std::arg(solution.r);
  out.t_phase = std::arg(solution.t);
  return out;
}

double transmitted_fraction(const SystemState& state) {
  return std::norm(state.left_field.t);
}

double reflectivity_variance(const std::vector<double>& series, int window) {
  if (window < 1) throw std::invalid_argument("reflectivity_variance: window < 1");
  if (static_cast<int>(series.size()) < window)
    throw std::invalid_argument("reflectivity_variance: series shorter than window");
  const std::size_t start = series.size() - window;
  long double mean = 0.0L;
  for (std::size_t i = start; i < series.size(); ++i) mean += series[i];
  mean /= window;
  long double var = 0.0L;
  for (std::size_t i = start; i < series.size(); ++i) {
    const long double d = series[i] - mean;
    var += d * d;
  }
  return static_cast<double>(var / window);
}

double kinetic_energy(const ArrayXcd& psi, const Grid& grid,
                      const SpectralTransform& transform) {
  ArrayXcd spectrum = psi;
  transform.dft(spectrum);
  long double acc = 0.0L;
  for (int m = 0; m < grid.n; ++m)
    acc += static_cast<long double>(grid.k[m] * grid.k[m]) * std::norm(spectrum[m]);
  return static_cast<double>(acc) * grid.dx / grid.n;
}

double mean_position(const ArrayXcd& psi, const Grid& grid) {
  long double weighted = 0.0L, total = 0.0L;
  for (int j = 0; j < grid.n; ++j) {
    const double density = std::norm(psi[j]);
    weighted += grid.x[j] * density;
    total += density;
  }
  if (total <= 0.0) return 0.0;
  return static_cast<double>(weighted / total);
}

ArrayXd momentum_distribution(const ArrayXcd& psi, const Grid& grid,
                              const SpectralTransform& transform) {
  const ArrayXcd spectrum = transform.to_momentum(psi);
  ArrayXd p = spectrum.abs2();
  const double total = p.sum();
  if (total > 0.0) p /= total;
  return p;
}

double momentum_directionality(const ArrayXcd& psi, const Grid& grid,
                               const SpectralTransform& transform) {
  const ArrayXd p = momentum_distribution(psi, grid, transform);
  double signed_sum = 0.0;
  for (int m = 0; m < grid.n; ++m) {
    if (grid.k[m] > 0.0)
      signed_sum += p[m];
    else if (grid.k[m] < 0.0)
      signed_sum -= p[m];
  }
  return signed_sum;
}

ObservableSample sample_observables(const SystemState& state,
                                    const SimulationParams& params,
                                    const Grid& grid,
                                    const SpectralTransform& transform) {
  const double k_eff = effective_wavenumber(params.zeta, params.trap_length);
  ObservableSample s;
  s.t = state.time;
  s.r_abs2_left = std::norm(state.left_field.r);
  s.r_abs2_right = std::norm(state.right_field.r);
  const ReflectionObservables refl = reflection_observables(state.left_field);
  s.r_phase = refl.r_phase;
  s.t_phase = refl.t_phase;
  s.eta = eta(state.wavefunction.psi, grid, k_eff);
  s.delta_phi = phase_lock_offset(state.left_field.envelope,
                                  state.right_field.envelope, grid, k_eff,
                                  0.5 * params.trap_length);
  s.e_kin = kinetic_energy(state.wavefunction.psi, grid, transform);
  s.norm = state.wavefunction.norm;
  s.density_order =
      density_order_parameter(state.wavefunction.psi, grid, 2.0 * k_eff);
  s.mean_x = mean_position(state.wavefunction.psi, grid);
  return s;
}

}  // namespace lightcrystal
