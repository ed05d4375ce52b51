#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lightcrystal/observables.hpp"
#include "lightcrystal/scattering.hpp"
#include "oracles.hpp"

using namespace lightcrystal;

namespace {

ArrayXcd modulated_state(const Grid& grid, double k_eff, double eps,
                         double shift = 0.0) {
  ArrayXcd psi(grid.n);
  for (int j = 0; j < grid.n; ++j)
    psi[j] = 1.0 + eps * std::cos(2.0 * kPi * 2.0 * k_eff * (grid.x[j] - shift));
  const double nrm = std::sqrt(psi.abs2().sum() * grid.dx);
  return psi / nrm;
}

ArrayXcd intensity_pattern(const Grid& grid, double k_eff, double shift) {
  // Standing-wave intensity with unit contrast; only |.|^2 enters the
  // observables, so store the square root.
  ArrayXcd u(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double value =
        1.0 + std::cos(2.0 * kPi * 2.0 * k_eff * (grid.x[j] - shift));
    u[j] = std::sqrt(value);
  }
  return u;
}

}  // namespace

TEST_CASE("eta of a homogeneous state is at the leakage floor") {
  const Grid grid = Grid::make(30.0, 1024);
  ArrayXcd psi = ArrayXcd::Constant(grid.n, Complex(1.0, 0.0));
  psi /= std::sqrt(psi.abs2().sum() * grid.dx);
  CHECK(eta(psi, grid, 1.004) < 1e-6);
}

TEST_CASE("eta of a weakly modulated state is eps^2/4") {
  const Grid grid = Grid::make(30.0, 1024);
  const double eps = 1e-3;

  // On-grid modulation: the projection is exact.
  const double k_eff = 31.0 / 30.0;  // 2 k_eff on the DFT grid
  const ArrayXcd psi = modulated_state(grid, k_eff, eps);
  CHECK(eta(psi, grid, k_eff) == doctest::Approx(eps * eps / 4.0).epsilon(1e-6));

  // Off-grid wavenumber: the direct projection keeps the bias below the
  // box-window leakage.
  const double k_off = 1.0041;
  const ArrayXcd psi_off = modulated_state(grid, k_off, eps);
  CHECK(eta(psi_off, grid, k_off) == doctest::Approx(eps * eps / 4.0).epsilon(0.05));
}

TEST_CASE("eta and density order rise together across a synthetic scan") {
  const Grid grid = Grid::make(30.0, 512);
  const double k_eff = 1.004;
  double previous_eta = 0.0, previous_order = 0.0;
  for (double eps : {1e-4, 1e-3, 1e-2, 1e-1}) {
    const ArrayXcd psi = modulated_state(grid, k_eff, eps);
    const double e = eta(psi, grid, k_eff);
    const double order = density_order_parameter(psi, grid, 2.0 * k_eff);
    CHECK(e > previous_eta);
    CHECK(order > previous_order);
    previous_eta = e;
    previous_order = order;
  }
}

TEST_CASE("phase lock offset of identical envelopes is zero") {
  const Grid grid = Grid::make(30.0, 1024);
  const ArrayXcd u = intensity_pattern(grid, 1.004, 0.0);
  CHECK(phase_lock_offset(u, u, grid, 1.004, 12.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quarter-period shift reads as pi/2") {
  const Grid grid = Grid::make(30.0, 2048);
  const double k_eff = 1.004;
  const double intensity_period = 1.0 / (2.0 * k_eff);
  const ArrayXcd left = intensity_pattern(grid, k_eff, 0.0);
  const ArrayXcd right = intensity_pattern(grid, k_eff, 0.25 * intensity_period);
  CHECK(phase_lock_offset(left, right, grid, k_eff, 15.0) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-3));
}

TEST_CASE("phase lock offset is invariant under common translation") {
  const Grid grid = Grid::make(30.0, 2048);
  const double k_eff = 1.0037;
  const double delta = 0.11;
  const double relative = 0.04;
  const double a = phase_lock_offset(intensity_pattern(grid, k_eff, 0.0),
                                     intensity_pattern(grid, k_eff, relative),
                                     grid, k_eff, 15.0);
  const double b = phase_lock_offset(intensity_pattern(grid, k_eff, delta),
                                     intensity_pattern(grid, k_eff, relative + delta),
                                     grid, k_eff, 15.0);
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("phase lock offset degenerates to NaN without a standing wave") {
  const Grid grid = Grid::make(30.0, 512);
  const ArrayXcd flat = ArrayXcd::Constant(grid.n, Complex(1.0, 0.0));
  CHECK(std::isnan(phase_lock_offset(flat, flat, grid, 1.004, 12.0)));
}

TEST_CASE("reflection observables") {
  SusceptibilityProfile profile;
  profile.dx = 30.0 / 512;
  profile.chi = ArrayXd::Zero(512);

  SUBCASE("empty profile gives zero reflection and box-length phase") {
    const auto sol = solve_scattering(profile, Injection::Left);
    const auto obs = reflection_observables(sol);
    CHECK(obs.r_abs2 < 1e-25);
    CHECK(std::isnan(obs.r_phase));
    const double expected = std::remainder(kPumpWavenumber * 30.0, 2.0 * kPi);
    CHECK(std::remainder(obs.t_phase - expected, 2.0 * kPi) ==
          doctest::Approx(0.0).epsilon(1e-10));
  }

  SUBCASE("uniform slab phases match the analytic slab") {
    profile.chi = ArrayXd::Constant(512, 0.013);
    const auto sol = solve_scattering(profile, Injection::Left);
    const auto slab = analytic_slab(0.013, 30.0);
    const auto obs = reflection_observables(sol);
    CHECK(obs.r_abs2 == doctest::Approx(std::norm(slab.r)).epsilon(1e-10));
    CHECK(obs.r_phase == doctest::Approx(std::arg(slab.r)).epsilon(1e-8));
    CHECK(obs.t_phase == doctest::Approx(std::arg(slab.t)).epsilon(1e-8));
  }
}

TEST_CASE("reflectivity variance") {
  SUBCASE("constant series has zero variance") {
    const std::vector<double> series(80, 0.37);
    CHECK(reflectivity_variance(series, 50) == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("sinusoid over complete periods gives a^2/2 exactly") {
    // Period 10 samples, window 50: five complete periods.
    const double a = 0.12;
    std::vector<double> series;
    for (int i = 0; i < 130; ++i)
      series.push_back(0.4 + a * std::sin(2.0 * kPi * i / 10.0 + 0.3));
    CHECK(reflectivity_variance(series, 50) ==
          doctest::Approx(a * a / 2.0).epsilon(1e-12));
  }

  SUBCASE("short series is rejected") {
    const std::vector<double> series(10, 1.0);
    CHECK_THROWS_AS(reflectivity_variance(series, 50), std::invalid_argument);
  }
}

TEST_CASE("momentum directionality separates travelling waves") {
  const Grid grid = Grid::make(20.0, 512);
  const SpectralTransform transform(grid);
  ArrayXcd rightward(grid.n), leftward(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double phase = 2.0 * kPi * 2.0 * grid.x[j];  // k = +2 k0
    rightward[j] = Complex(std::cos(phase), std::sin(phase));
    leftward[j] = std::conj(rightward[j]);
  }
  CHECK(momentum_directionality(rightward, grid, transform) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(momentum_directionality(leftward, grid, transform) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(momentum_directionality(rightward + leftward, grid, transform) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mean position of a displaced packet") {
  const Grid grid = Grid::make(20.0, 512);
  ArrayXcd psi(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double u = grid.x[j] - 1.7;
    psi[j] = std::exp(-u * u);
  }
  CHECK(mean_position(psi, grid) == doctest::Approx(1.7).epsilon(1e-9));
}
