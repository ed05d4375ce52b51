#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>

namespace lightcrystal {

using Complex = std::complex<double>;
using ArrayXd = Eigen::ArrayXd;
using ArrayXcd = Eigen::ArrayXcd;
using Matrix2cd = Eigen::Matrix2cd;
using Vector2cd = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;

// Internal unit system: lengths in lambda0, energies in E_rec, times in
// 1/omega_rec, intensities in I0. The pump wavenumber is then fixed.
inline constexpr double kPumpWavenumber = 2.0 * kPi;  // k0 * lambda0

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lightcrystal
