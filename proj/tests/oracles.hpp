#pragma once

// Independent reference solutions used by the test suites. Everything here
// deliberately avoids the library's solver paths: scattering is integrated
// as an ODE, wave packets come from closed forms, ground states from a dense
// eigensolve.

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "lightcrystal/grid.hpp"
#include "lightcrystal/rng.hpp"
#include "lightcrystal/types.hpp"

namespace oracles {

using lightcrystal::ArrayXcd;
using lightcrystal::ArrayXd;
using lightcrystal::Complex;
using lightcrystal::Grid;
using lightcrystal::kPi;

// Fine-step RK4 integration of E'' + k0^2 (1 + chi(x)) E = 0 across
// [0, width], integrating backwards from the transmitted plane wave
// E(x >= width) = e^{i k0 (x - width)}. Returns edge-referenced (r, t):
// the same convention as the transfer-matrix solver.
struct RT {
  Complex r;
  Complex t;
};

template <typename ChiFn>
RT scattering_reference(const ChiFn& chi, double width, double k0,
                        int steps_per_unit = 4000) {
  const long steps = std::lround(width * steps_per_unit);
  const double h = width / steps;
  // State y = (E, E'), y' = (E', -k0^2 (1 + chi) E).
  Complex e(1.0, 0.0);            // E(width) for unit transmitted amplitude
  Complex d = Complex(0.0, k0);   // E'(width)
  auto rhs = [&](double x, Complex e_val, Complex d_val, Complex& de,
                 Complex& dd) {
    de = d_val;
    dd = -k0 * k0 * (1.0 + chi(x)) * e_val;
  };
  double x = width;
  for (long i = 0; i < steps; ++i) {
    Complex k1e, k1d, k2e, k2d, k3e, k3d, k4e, k4d;
    const double hh = -h;  // integrate towards x = 0
    rhs(x, e, d, k1e, k1d);
    rhs(x + 0.5 * hh, e + 0.5 * hh * k1e, d + 0.5 * hh * k1d, k2e, k2d);
    rhs(x + 0.5 * hh, e + 0.5 * hh * k2e, d + 0.5 * hh * k2d, k3e, k3d);
    rhs(x + hh, e + hh * k3e, d + hh * k3d, k4e, k4d);
    e += (hh / 6.0) * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
    d += (hh / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    x += hh;
  }
  // Decompose the field at x=0 into incoming/outgoing plane waves.
  const Complex ik0(0.0, k0);
  const Complex a = 0.5 * (e + d / ik0);  // rightward amplitude at x=0
  const Complex b = 0.5 * (e - d / ik0);  // leftward amplitude at x=0
  RT out;
  out.r = b / a;
  out.t = 1.0 / a;  // transmitted amplitude at x=width per unit incidence
  return out;
}

// Free-particle Gaussian: psi(x,0) = (2 pi s0^2)^{-1/4} exp(-x^2/(4 s0^2))
// evolved under i dpsi/dt = -(1/4 pi^2) dxx psi.
inline Complex free_gaussian(double x, double t, double sigma0) {
  const double a = 1.0 / (4.0 * kPi * kPi);
  const Complex s(sigma0 * sigma0, a * t);
  const Complex prefactor =
      std::pow(2.0 * kPi * sigma0 * sigma0, -0.25) *
      std::sqrt(Complex(sigma0 * sigma0, 0.0) / s);
  return prefactor * std::exp(-x * x / (4.0 * s));
}

// Coherent state of V(x) = v2 x^2 displaced by x0 at rest; exact solution
// including the global phase. In these units the oscillator has
// effective mass 1/(2a) with a = 1/4 pi^2 and frequency 2 sqrt(a v2).
inline Complex harmonic_coherent(double x, double t, double v2, double x0) {
  const double a = 1.0 / (4.0 * kPi * kPi);
  const double omega = 2.0 * std::sqrt(a * v2);
  const double m_omega = std::sqrt(v2 / a);  // (1/2a) * omega
  const double xc = x0 * std::cos(omega * t);
  const double phase = -(0.5 * omega * t +
                         m_omega * (x * x0 * std::sin(omega * t) -
                                    0.25 * x0 * x0 * std::sin(2.0 * omega * t)));
  const double amp = std::pow(m_omega / kPi, 0.25) *
                     std::exp(-0.5 * m_omega * (x - xc) * (x - xc));
  return amp * Complex(std::cos(phase), std::sin(phase));
}

// Dense ground state of H = spectral kinetic + diag(v), for cross-checking
// imaginary-time relaxation. Returns the lowest eigenpair.
struct DenseGround {
  double energy;
  ArrayXcd mode;  // unit L2 norm with dx weight
};

inline DenseGround dense_ground_state(const Grid& grid, const ArrayXd& v) {
  using Mat = Eigen::MatrixXcd;
  const int n = grid.n;
  Mat f(n, n);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j) {
      const double arg = -2.0 * kPi * m * j / n;
      f(m, j) = Complex(std::cos(arg), std::sin(arg));
    }
  Mat kinetic = Mat::Zero(n, n);
  for (int m = 0; m < n; ++m) kinetic(m, m) = grid.k[m] * grid.k[m];
  Mat h = f.adjoint() * kinetic * f / double(n);
  for (int j = 0; j < n; ++j) h(j, j) += v[j];
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  DenseGround out;
  out.energy = solver.eigenvalues()(0);
  out.mode = solver.eigenvectors().col(0).array();
  out.mode /= std::sqrt(out.mode.abs2().sum() * grid.dx);
  return out;
}

// Deterministic random complex field for property tests.
inline ArrayXcd random_field(int n, std::uint64_t seed) {
  lightcrystal::Rng rng(seed);
  ArrayXcd out(n);
  for (int j = 0; j < n; ++j)
    out[j] = Complex(rng.next_gaussian(), rng.next_gaussian());
  return out;
}

}  // namespace oracles
