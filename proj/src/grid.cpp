#include "lightcrystal/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace lightcrystal {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid Grid::make(double box_length, int n) {
  if (!(box_length > 0.0)) throw std::invalid_argument("Grid: box_length must be > 0");
  if (!is_power_of_two(n)) throw std::invalid_argument("Grid: n must be a power of two");
  Grid g;
  g.n = n;
  g.box_length = box_length;
  g.dx = box_length / n;
  g.x.resize(n);
  g.k.resize(n);
  for (int j = 0; j < n; ++j) {
    g.x[j] = -0.5 * box_length + j * g.dx;
    const int m = (j <= n / 2) ? j : j - n;
    g.k[j] = m / box_length;
  }
  return g;
}

SpectralTransform::SpectralTransform(const Grid& grid) : n_(grid.n) {
  bit_reversal_.resize(n_);
  int log2n = 0;
  while ((1 << log2n) < n_) ++log2n;
  for (int i = 0; i < n_; ++i) {
    int rev = 0;
    for (int b = 0; b < log2n; ++b)
      if (i & (1 << b)) rev |= 1 << (log2n - 1 - b);
    bit_reversal_[i] = rev;
  }
  twiddles_.resize(n_ / 2);
  for (int j = 0; j < n_ / 2; ++j) {
    const double a = -2.0 * kPi * j / n_;
    twiddles_[j] = Complex(std::cos(a), std::sin(a));
  }
  // x_0 = -box/2 shifts every mode by e^{i pi m} = (-1)^m.
  center_phase_.resize(n_);
  for (int m = 0; m < n_; ++m) center_phase_[m] = (m % 2 == 0) ? 1.0 : -1.0;
}

void SpectralTransform::fft_inplace(ArrayXcd& a, bool inverse) const {
  if (a.size() != n_) throw std::invalid_argument("SpectralTransform: length mismatch");
  Complex* d = a.data();
  for (int i = 0; i < n_; ++i) {
    const int j = bit_reversal_[i];
    if (i < j) std::swap(d[i], d[j]);
  }
  for (int len = 2; len <= n_; len <<= 1) {
    const int half = len >> 1;
    const int stride = n_ / len;
    for (int block = 0; block < n_; block += len) {
      for (int j = 0; j < half; ++j) {
        Complex w = twiddles_[j * stride];
        if (inverse) w = std::conj(w);
        const Complex u = d[block + j];
        const Complex v = d[block + j + half] * w;
        d[block + j] = u + v;
        d[block + j + half] = u - v;
      }
    }
  }
  if (inverse) a /= static_cast<double>(n_);
}

ArrayXcd SpectralTransform::to_momentum(const ArrayXcd& field) const {
  if (field.size() != n_) throw std::invalid_argument("to_momentum: length mismatch");
  ArrayXcd spectrum = field;
  dft(spectrum);
  for (int m = 0; m < n_; ++m)
    spectrum[m] *= center_phase_[m] / static_cast<double>(n_);
  return spectrum;
}

ArrayXcd SpectralTransform::to_position(const ArrayXcd& spectrum) const {
  if (spectrum.size() != n_) throw std::invalid_argument("to_position: length mismatch");
  ArrayXcd field = spectrum;
  for (int m = 0; m < n_; ++m)
    field[m] *= center_phase_[m] * static_cast<double>(n_);
  idft(field);
  return field;
}

}  // namespace lightcrystal
