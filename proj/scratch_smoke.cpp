#include <chrono>
#include <cstdio>

#include "lightcrystal/driver.hpp"
#include "lightcrystal/observables.hpp"
#include "lightcrystal/protocols.hpp"
#include "lightcrystal/scattering.hpp"

using namespace lightcrystal;

int main() {
  // 1. slab sanity
  {
    SusceptibilityProfile prof;
    const double width = 24.0;
    const int n = 768;
    prof.dx = width / n;
    prof.chi = ArrayXd::Constant(n, 0.2 / 24.0);
    auto sol = solve_scattering(prof, Injection::Left);
    auto slab = analytic_slab(0.2 / 24.0, width);
    std::printf("slab: r=(%g,%g) vs (%g,%g)  |r|^2=%g flux=%g\n", sol.r.real(),
                sol.r.imag(), slab.r.real(), slab.r.imag(), std::norm(sol.r),
                std::norm(sol.r) + std::norm(sol.t));
  }

  // 2. ground state at zeta=0.2, s=200, Fig-2-like geometry
  SimulationParams p;
  p.zeta = 0.2;
  p.gcN = 1.0;
  p.trap_length = 24.0;
  p.box_length = 30.0;
  p.n_grid = 512;
  p.dtau = 1e-3;
  p.noise_amplitude = 1e-4;
  p.rng_seed = 7;

  auto t0 = std::chrono::steady_clock::now();
  {
    CoupledDriver driver(p);
    driver.set_pumps(200.0, 200.0);
    auto gs = driver.ground_state();
    const double k_eff = effective_wavenumber(p.zeta, p.trap_length);
    std::printf(
        "s=200: converged=%d iters=%ld E=%.6f |r|^2=%.4f |t|^2=%.4f eta=%.5f "
        "dphi=%.4f\n",
        gs.converged, gs.iterations, gs.final_energy,
        std::norm(driver.state().left_field.r),
        std::norm(driver.state().left_field.t),
        eta(driver.state().wavefunction.psi, driver.grid(), k_eff),
        phase_lock_offset(driver.state().left_field.envelope,
                          driver.state().right_field.envelope, driver.grid(),
                          k_eff, 12.0));
  }
  auto t1 = std::chrono::steady_clock::now();
  std::printf("ground state took %.1f s\n",
              std::chrono::duration<double>(t1 - t0).count());

  // 3. coarse scan around the calibrated threshold 12.5
  for (double s : {2.5, 6.0, 9.0, 11.0, 12.5, 14.0, 16.0, 20.0}) {
    CoupledDriver driver(p);
    driver.set_pumps(s, s);
    auto gs = driver.ground_state();
    const double k_eff = effective_wavenumber(p.zeta, p.trap_length);
    std::printf("s=%6.2f conv=%d iters=%6ld eta=%.3e |r|^2=%.3e\n", s,
                gs.converged, gs.iterations,
                eta(driver.state().wavefunction.psi, driver.grid(), k_eff),
                std::norm(driver.state().left_field.r));
  }
  auto t2 = std::chrono::steady_clock::now();
  std::printf("scan took %.1f s\n", std::chrono::duration<double>(t2 - t1).count());
  return 0;
}
