#pragma once

#include <vector>

#include "lightcrystal/types.hpp"

namespace lightcrystal {

// Uniform periodic grid on [-box/2, box/2). Positions are in lambda0,
// wavenumbers in units of k0 (so the pump mode e^{i k0 x} sits at k = 1
// and a mode at k carries kinetic energy k^2 E_rec).
struct Grid {
  int n = 0;
  double dx = 0.0;
  double box_length = 0.0;
  ArrayXd x;  // x[j] = -box/2 + j dx
  ArrayXd k;  // DFT ordering, k[j] = j/box for j <= n/2, (j-n)/box after

  static Grid make(double box_length, int n);
};

// Radix-2 transforms with tables fixed at construction; all methods are
// const and safe to call concurrently, scratch lives in the caller's
// buffers. Grid sizes are powers of two by construction.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid& grid);

  int size() const { return n_; }

  // Plain DFT pair: dft computes X_m = sum_j x_j e^{-2 pi i j m / n},
  // idft is its inverse including the 1/n factor.
  void dft(ArrayXcd& data) const { fft_inplace(data, false); }
  void idft(ArrayXcd& data) const { fft_inplace(data, true); }

  // Physics normalization per grid momentum k_m (matching Grid::k):
  //   psi_hat(k_m) = (1/box) sum_j psi_j e^{-i 2 pi k_m x_j} dx,
  // so the plane wave e^{+i 2 pi q x} lands in the +q bin. to_position is
  // the exact inverse.
  ArrayXcd to_momentum(const ArrayXcd& field) const;
  ArrayXcd to_position(const ArrayXcd& spectrum) const;

 private:
  void fft_inplace(ArrayXcd& data, bool inverse) const;

  int n_;
  std::vector<int> bit_reversal_;
  std::vector<Complex> twiddles_;      // e^{-2 pi i j / n}, j < n/2
  std::vector<double> center_phase_;   // (-1)^m from the x-grid origin shift
};

}  // namespace lightcrystal
