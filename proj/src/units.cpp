#include "lightcrystal/units.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lightcrystal {

namespace {
constexpr double kHbarSi = 1.054571817e-34;   // J s
constexpr double kSpeedOfLightSi = 2.99792458e8;  // m/s

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

double UnitSystem::wavenumber_si() const { return 2.0 * kPi / lambda0_si; }

double UnitSystem::recoil_energy_si() const {
  const double k0 = wavenumber_si();
  return kHbarSi * kHbarSi * k0 * k0 / (2.0 * mass_si);
}

double UnitSystem::recoil_frequency_si() const {
  return recoil_energy_si() / kHbarSi;
}

double UnitSystem::intensity_unit_si() const {
  return kSpeedOfLightSi * recoil_energy_si() / (lambda0_si * cross_section_si);
}

void ValidationReport::fail(std::string key, std::string message) {
  ok = false;
  issues.push_back({std::move(key), std::move(message)});
}

ValidationReport validate(const SimulationParams& p) {
  ValidationReport report;
  if (!(p.zeta > 0.0)) report.fail("zeta", "must be > 0");
  if (!(p.trap_length > 0.0)) report.fail("trap_length", "must be > 0");
  if (!(p.box_length >= p.trap_length))
    report.fail("box_length", "must be >= trap_length");
  if (p.n_grid < 16) report.fail("n_grid", "must be >= 16");
  if (!is_power_of_two(p.n_grid)) report.fail("n_grid", "must be a power of two");
  if (!(p.dt > 0.0)) report.fail("dt", "must be > 0");
  if (p.s_left < 0.0) report.fail("s_left", "must be >= 0");
  if (p.s_right < 0.0) report.fail("s_right", "must be >= 0");
  if (p.gamma < 0.0) report.fail("gamma", "must be >= 0");
  if (p.noise_amplitude < 0.0) report.fail("noise_amplitude", "must be >= 0");
  if (!(p.v_ext_height > 0.0)) report.fail("v_ext_height", "must be > 0");
  if (!(p.dtau > 0.0)) report.fail("dtau", "must be > 0");
  if (p.max_iters < 1) report.fail("max_iters", "must be >= 1");
  if (!(p.tol_energy > 0.0)) report.fail("tol_energy", "must be > 0");
  if (!(p.tol_psi > 0.0)) report.fail("tol_psi", "must be > 0");
  if (!(p.t_final >= 0.0)) report.fail("t_final", "must be >= 0");
  if (p.sample_stride < 1) report.fail("sample_stride", "must be >= 1");
  // Grid must resolve the emergent lattice (period lambda0/2).
  if (p.n_grid > 0 && !(p.dx() <= 1.0 / 16.0 + 1e-15))
    report.fail("n_grid", "grid spacing dx must be <= lambda0/16");
  return report;
}

double critical_intensity_per_beam(double zeta) {
  if (!(zeta > 0.0)) throw std::domain_error("critical_intensity_per_beam: zeta must be > 0");
  return 1.0 / (2.0 * zeta * zeta);
}

double effective_wavenumber(double zeta, double trap_length) {
  if (!(trap_length > 0.0))
    throw std::domain_error("effective_wavenumber: trap_length must be > 0");
  if (zeta < 0.0) throw std::domain_error("effective_wavenumber: zeta must be >= 0");
  return std::sqrt(1.0 + zeta / trap_length);
}

}  // namespace lightcrystal
