#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lightcrystal/dynamics.hpp"
#include "oracles.hpp"

using namespace lightcrystal;

namespace {

struct Fixture {
  Grid grid;
  SpectralTransform transform;
  Stepper stepper;

  explicit Fixture(double box, int n)
      : grid(Grid::make(box, n)), transform(grid), stepper(grid, transform) {}

  Potential free_potential() const {
    Potential p;
    p.v = ArrayXd::Zero(grid.n);
    p.i_total = ArrayXd::Zero(grid.n);
    return p;
  }

  Wavefunction gaussian(double sigma0) const {
    Wavefunction wf;
    wf.psi.resize(grid.n);
    for (int j = 0; j < grid.n; ++j)
      wf.psi[j] = oracles::free_gaussian(grid.x[j], 0.0, sigma0);
    wf.refresh_norm(grid.dx);
    return wf;
  }
};

double l2_error(const ArrayXcd& a, const ArrayXcd& b, double dx) {
  return std::sqrt((a - b).abs2().sum() * dx);
}

}  // namespace

TEST_CASE("free Gaussian spreading matches the closed form") {
  Fixture f(30.0, 1024);
  Wavefunction wf = f.gaussian(1.0);
  const Potential v0 = f.free_potential();
  const double dt = 1e-3;
  for (int step = 0; step < 1000; ++step)
    f.stepper.real_step(wf, v0, 0.0, 0.0, dt);
  ArrayXcd expected(f.grid.n);
  for (int j = 0; j < f.grid.n; ++j)
    expected[j] = oracles::free_gaussian(f.grid.x[j], 1.0, 1.0);
  CHECK(l2_error(wf.psi, expected, f.grid.dx) < 1e-8);
}

TEST_CASE("plane wave picks up exactly e^{-i k^2 dt}") {
  Fixture f(30.0, 256);
  const double k = 30.0 / 30.0;  // one grid mode, k = 1 in k0 units
  Wavefunction wf;
  wf.psi.resize(f.grid.n);
  for (int j = 0; j < f.grid.n; ++j) {
    const double phase = 2.0 * kPi * k * f.grid.x[j];
    wf.psi[j] = Complex(std::cos(phase), std::sin(phase));
  }
  wf.refresh_norm(f.grid.dx);
  const ArrayXcd initial = wf.psi;
  const double dt = 7e-3;
  f.stepper.real_step(wf, f.free_potential(), 0.0, 0.0, dt);
  const Complex rotation(std::cos(k * k * dt), -std::sin(k * k * dt));
  for (int j = 0; j < f.grid.n; ++j)
    CHECK(std::abs(wf.psi[j] - initial[j] * rotation) < 1e-13);
}

TEST_CASE("uniform loss decays the norm as e^{-2 gamma t}") {
  Fixture f(20.0, 256);
  Wavefunction wf;
  wf.psi = ArrayXcd::Constant(f.grid.n, Complex(1.0 / std::sqrt(20.0), 0.0));
  wf.refresh_norm(f.grid.dx);
  Potential p = f.free_potential();
  p.i_total = ArrayXd::Constant(f.grid.n, 1.0);
  const double gamma = 0.01;
  const double dt = 1e-3;
  for (int step = 0; step < 2000; ++step)
    f.stepper.real_step(wf, p, 0.0, gamma, dt);
  const double expected = std::exp(-2.0 * gamma * 2.0);  // t = 2
  CHECK(wf.norm == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("norm is conserved without loss over 1e4 steps") {
  Fixture f(30.0, 512);
  Wavefunction wf = f.gaussian(2.0);
  Potential p = f.free_potential();
  for (int j = 0; j < f.grid.n; ++j)
    p.v[j] = 0.7 * f.grid.x[j] * f.grid.x[j] / 30.0;
  const double initial_norm = wf.norm;
  for (int step = 0; step < 10000; ++step)
    f.stepper.real_step(wf, p, 0.5, 0.0, 1e-3);
  CHECK(std::abs(wf.norm - initial_norm) < 1e-8);
}

TEST_CASE("second-order accuracy on a harmonic coherent state") {
  // Free evolution has no splitting error at all, so the order of accuracy
  // is measured against the exact oscillating Gaussian of V = v2 x^2.
  Fixture f(40.0, 512);
  const double v2 = 0.4;
  const double x0 = 1.5;
  Potential p = f.free_potential();
  for (int j = 0; j < f.grid.n; ++j) p.v[j] = v2 * f.grid.x[j] * f.grid.x[j];

  const double t_final = 1.0;
  auto run_error = [&](double dt) {
    Wavefunction wf;
    wf.psi.resize(f.grid.n);
    for (int j = 0; j < f.grid.n; ++j)
      wf.psi[j] = oracles::harmonic_coherent(f.grid.x[j], 0.0, v2, x0);
    wf.refresh_norm(f.grid.dx);
    const long steps = std::lround(t_final / dt);
    for (long s = 0; s < steps; ++s) f.stepper.real_step(wf, p, 0.0, 0.0, dt);
    ArrayXcd expected(f.grid.n);
    for (int j = 0; j < f.grid.n; ++j)
      expected[j] = oracles::harmonic_coherent(f.grid.x[j], t_final, v2, x0);
    return l2_error(wf.psi, expected, f.grid.dx);
  };
  const double err = run_error(1e-3);
  const double err_half = run_error(5e-4);
  CHECK(err / err_half > 3.2);
  CHECK(err / err_half < 4.8);
}

TEST_CASE("harmonic coherent oracle satisfies the equation of motion") {
  // Finite-difference residual of i dpsi/dt = -(1/4pi^2) dxx psi + v2 x^2 psi
  // at probe points keeps the closed form honest.
  const double v2 = 0.4, x0 = 1.5;
  const double a = 1.0 / (4.0 * kPi * kPi);
  const double hx = 1e-4, ht = 1e-6;
  for (double x : {-0.9, 0.0, 0.7, 1.9}) {
    for (double t : {0.1, 0.9, 2.3}) {
      const Complex dt_num =
          (oracles::harmonic_coherent(x, t + ht, v2, x0) -
           oracles::harmonic_coherent(x, t - ht, v2, x0)) /
          (2.0 * ht);
      const Complex dxx_num =
          (oracles::harmonic_coherent(x + hx, t, v2, x0) -
           2.0 * oracles::harmonic_coherent(x, t, v2, x0) +
           oracles::harmonic_coherent(x - hx, t, v2, x0)) /
          (hx * hx);
      const Complex residual = Complex(0.0, 1.0) * dt_num + a * dxx_num -
                               v2 * x * x * oracles::harmonic_coherent(x, t, v2, x0);
      CHECK(std::abs(residual) < 1e-5);
    }
  }
}

TEST_CASE("imaginary time finds the ground mode of a trap") {
  Fixture f(20.0, 256);
  Potential p = f.free_potential();
  for (int j = 0; j < f.grid.n; ++j)
    p.v[j] = 2.0 * f.grid.x[j] * f.grid.x[j];

  Wavefunction wf = f.gaussian(3.0);
  // Coarse-to-fine dtau schedule: the fixed point of the split flow
  // deviates from the true eigenstate by O(dtau^2), so each stage must
  // relax long enough for the next refinement to show.
  const double stage_tau = 60.0;
  for (double dtau : {1e-2, 1e-3, 1e-4}) {
    const long iters = std::lround(stage_tau / dtau);
    for (long it = 0; it < iters; ++it) f.stepper.imaginary_step(wf, p, 0.0, dtau);
  }
  const auto reference = oracles::dense_ground_state(f.grid, p.v);

  // Residual ||H psi - mu psi|| with mu the Rayleigh quotient.
  const EnergyBreakdown e = energy(wf, p, 0.0, f.grid, f.transform);
  ArrayXcd h_psi = f.transform.to_momentum(wf.psi);
  for (int m = 0; m < f.grid.n; ++m) h_psi[m] *= f.grid.k[m] * f.grid.k[m];
  ArrayXcd h_psi_x = f.transform.to_position(h_psi);
  for (int j = 0; j < f.grid.n; ++j) h_psi_x[j] += p.v[j] * wf.psi[j];
  const double residual =
      std::sqrt((h_psi_x - e.total * wf.psi).abs2().sum() * f.grid.dx);
  CHECK(residual < 1e-8);
  CHECK(e.total == doctest::Approx(reference.energy).epsilon(1e-10));
  // Same mode up to a global phase.
  Complex overlap(0.0, 0.0);
  for (int j = 0; j < f.grid.n; ++j)
    overlap += std::conj(wf.psi[j]) * reference.mode[j];
  CHECK(std::abs(overlap) * f.grid.dx == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("imaginary time in a flat periodic box gives a constant") {
  Fixture f(5.0, 128);
  Wavefunction wf = f.gaussian(0.6);
  const Potential p = f.free_potential();
  // Kinetic-only decay: large imaginary steps are unconditionally stable.
  for (int it = 0; it < 2000; ++it) f.stepper.imaginary_step(wf, p, 0.0, 0.5);
  const double mean_abs = wf.psi.abs().sum() / f.grid.n;
  for (int j = 0; j < f.grid.n; ++j)
    CHECK(std::abs(std::abs(wf.psi[j]) - mean_abs) < 1e-10);
  CHECK(wf.norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interacting box-trap ground state is flat away from the walls") {
  Fixture f(15.0, 256);
  Potential p = f.free_potential();
  p.v = box_trap(f.grid, 10.0, 1000.0);
  Wavefunction wf = f.gaussian(2.0);
  for (int it = 0; it < 60000; ++it) f.stepper.imaginary_step(wf, p, 1.0, 1e-3);
  // Central half of the trap: density ripple below 2%.
  double min_d = 1e300, max_d = 0.0;
  for (int j = 0; j < f.grid.n; ++j) {
    if (std::abs(f.grid.x[j]) > 2.5) continue;
    const double d = std::norm(wf.psi[j]);
    min_d = std::min(min_d, d);
    max_d = std::max(max_d, d);
  }
  CHECK((max_d - min_d) / max_d < 0.02);
}

TEST_CASE("energy of simple states") {
  Fixture f(30.0, 512);
  const Potential p = f.free_potential();

  Wavefunction constant;
  constant.psi = ArrayXcd::Constant(f.grid.n, Complex(1.0 / std::sqrt(30.0), 0.0));
  constant.refresh_norm(f.grid.dx);
  CHECK(energy(constant, p, 0.0, f.grid, f.transform).kinetic ==
        doctest::Approx(0.0).epsilon(1e-15));

  // e^{i k0 x} carries exactly one recoil energy.
  Wavefunction recoil;
  recoil.psi.resize(f.grid.n);
  for (int j = 0; j < f.grid.n; ++j) {
    const double phase = 2.0 * kPi * f.grid.x[j];
    recoil.psi[j] = Complex(std::cos(phase), std::sin(phase)) / std::sqrt(30.0);
  }
  recoil.refresh_norm(f.grid.dx);
  const EnergyBreakdown e = energy(recoil, p, 0.0, f.grid, f.transform);
  CHECK(e.kinetic == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("imaginary-time energy is non-increasing") {
  Fixture f(15.0, 256);
  Potential p = f.free_potential();
  p.v = box_trap(f.grid, 10.0, 1000.0);
  for (int j = 0; j < f.grid.n; ++j)
    p.v[j] += -3.0 * std::cos(2.0 * kPumpWavenumber * f.grid.x[j]);
  Wavefunction wf = f.gaussian(2.0);
  double previous = energy(wf, p, 1.0, f.grid, f.transform).total;
  for (int it = 0; it < 3000; ++it) {
    f.stepper.imaginary_step(wf, p, 1.0, 1e-3);
    const double current = energy(wf, p, 1.0, f.grid, f.transform).total;
    CHECK(current <= previous + 1e-12);
    previous = current;
  }
}

TEST_CASE("blow-up is detected") {
  Fixture f(10.0, 128);
  Wavefunction wf = f.gaussian(1.0);
  Potential p = f.free_potential();
  p.v = ArrayXd::Constant(f.grid.n, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(f.stepper.real_step(wf, p, 0.0, 0.0, 1e-3), std::runtime_error);
}
