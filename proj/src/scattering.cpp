#include "lightcrystal/scattering.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace lightcrystal {

namespace {

// Interface matrix between media of wavenumbers ka -> kb (E, E' continuous).
Matrix2cd interface_matrix(double ka, double kb) {
  Matrix2cd m;
  const double p = (kb + ka) / (2.0 * kb);
  const double q = (kb - ka) / (2.0 * kb);
  m << p, q, q, p;
  return m;
}

Matrix2cd propagation_matrix(double k, double dist) {
  Matrix2cd m;
  const Complex phase(std::cos(k * dist), std::sin(k * dist));
  m << phase, 0.0, 0.0, std::conj(phase);
  return m;
}

double local_wavenumber(double chi, double k0) {
  if (!(chi > -1.0)) throw std::domain_error("scattering: chi must be > -1");
  return k0 * std::sqrt(1.0 + chi);
}

}  // namespace

Matrix2cd cell_matrix(double chi, double dx, double k0) {
  const double kc = local_wavenumber(chi, k0);
  return interface_matrix(kc, k0) * propagation_matrix(kc, dx) *
         interface_matrix(k0, kc);
}

ScatteringSolution solve_scattering(const SusceptibilityProfile& profile,
                                    Injection direction, double k0) {
  const auto n = profile.chi.size();
  if (n < 1) throw std::invalid_argument("solve_scattering: empty profile");
  if (!(profile.dx > 0.0)) throw std::invalid_argument("solve_scattering: dx must be > 0");

  Matrix2cd total = Matrix2cd::Identity();
  for (Eigen::Index j = 0; j < n; ++j)
    total = cell_matrix(profile.chi[j], profile.dx, k0) * total;

  const Complex m11 = total(0, 0), m12 = total(0, 1);
  const Complex m21 = total(1, 0), m22 = total(1, 1);
  // |M22| >= 1 for any lossless profile; vanishing would be non-physical.
  assert(std::abs(m22) > 1e-12);

  ScatteringSolution sol;
  sol.direction = direction;
  Vector2cd amps;  // vacuum amplitudes at the left box edge
  if (direction == Injection::Left) {
    sol.r = -m21 / m22;
    sol.t = (m11 * m22 - m12 * m21) / m22;
    amps << Complex(1.0, 0.0), sol.r;
  } else {
    sol.r = m12 / m22;
    sol.t = 1.0 / m22;
    amps << Complex(0.0, 0.0), sol.t;
  }

  // Sweep left to right, sampling the field at each cell center.
  sol.envelope.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double kc = local_wavenumber(profile.chi[j], k0);
    const Matrix2cd half = propagation_matrix(kc, 0.5 * profile.dx);
    Vector2cd inside = half * (interface_matrix(k0, kc) * amps);
    sol.envelope[j] = inside(0) + inside(1);
    amps = interface_matrix(kc, k0) * (half * inside);
  }
  return sol;
}

SlabCoefficients analytic_slab(double chi, double width, double k0) {
  if (!(width > 0.0)) throw std::domain_error("analytic_slab: width must be > 0");
  const double k1 = local_wavenumber(chi, k0);
  const double rho = (k0 - k1) / (k0 + k1);
  const Complex phase(std::cos(k1 * width), std::sin(k1 * width));
  const Complex phase2 = phase * phase;
  const Complex denom = 1.0 - rho * rho * phase2;
  SlabCoefficients out;
  out.r = rho * (1.0 - phase2) / denom;
  out.t = (1.0 - rho * rho) * phase / denom;
  return out;
}

SusceptibilityProfile susceptibility_from_density(const ArrayXcd& psi,
                                                  double zeta, double dx) {
  SusceptibilityProfile profile;
  profile.dx = dx;
  profile.chi = zeta * psi.abs2();
  return profile;
}

}  // namespace lightcrystal
