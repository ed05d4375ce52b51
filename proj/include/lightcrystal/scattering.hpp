#pragma once

#include "lightcrystal/types.hpp"

namespace lightcrystal {

/* One-dimensional scattering of a plane wave off a piecewise-constant
 * susceptibility profile, solved with 2x2 transfer matrices.
 *
 * Conventions:
 *  - Amplitude basis is (rightward, leftward): inside a medium of local
 *    wavenumber k the field is E(x) = f e^{ik(x-x_ref)} + b e^{-ik(x-x_ref)}.
 *  - cell_matrix(chi, dx) maps VACUUM-basis amplitudes at the left face of
 *    a cell to vacuum-basis amplitudes at its right face; it is the exact
 *    slab solution, so products of cell matrices are exact for any
 *    piecewise-constant profile. Composition order is fixed:
 *        M_total = M[n-1] * ... * M[1] * M[0]
 *    (rightmost factor acts first), covered by a regression test.
 *  - Left injection: amplitudes at the left box edge are (1, r); beyond the
 *    right edge only (t, 0) survives. So r is referenced at the entry edge
 *    and t is the field at the exit edge per unit incident field at the
 *    entry edge. chi == 0 over a box of length D gives r = 0, t = e^{i k0 D}.
 *  - Right injection mirrors this: unit incidence at the right edge,
 *    transmitted amplitude read at the left edge.
 */

enum class Injection { Left, Right };

// chi per grid cell, cells of width dx covering the computational box.
struct SusceptibilityProfile {
  ArrayXd chi;
  double dx = 0.0;
};

struct ScatteringSolution {
  ArrayXcd envelope;  // complex field at each cell center, unit incidence
  Complex r{0.0, 0.0};
  Complex t{1.0, 0.0};
  Injection direction = Injection::Left;
};

struct SlabCoefficients {
  Complex r;
  Complex t;
};

// Exact vacuum-to-vacuum transfer matrix of one constant-chi cell.
Matrix2cd cell_matrix(double chi, double dx, double k0 = kPumpWavenumber);

// Full solve: composed matrix, r and t, and the intracavity envelope.
ScatteringSolution solve_scattering(const SusceptibilityProfile& profile,
                                    Injection direction,
                                    double k0 = kPumpWavenumber);

// Textbook two-interface slab, kept as an independent oracle for the
// transfer-matrix path.
SlabCoefficients analytic_slab(double chi, double width,
                               double k0 = kPumpWavenumber);

// chi(x) = zeta |psi(x)|^2 for a unit-normalized wavefunction.
SusceptibilityProfile susceptibility_from_density(const ArrayXcd& psi,
                                                  double zeta, double dx);

}  // namespace lightcrystal
