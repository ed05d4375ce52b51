#pragma once

#include <cmath>
#include <cstdint>

#include "lightcrystal/types.hpp"

namespace lightcrystal {

// splitmix64 with Box-Muller on top; small, seedable and bit-stable across
// platforms, which keeps run outputs reproducible from (config, seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = next_double();
    while (u <= 0.0) u = next_double();
    const double v = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u));
    spare_ = radius * std::sin(2.0 * kPi * v);
    have_spare_ = true;
    return radius * std::cos(2.0 * kPi * v);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable per-index stream derivation for parallel scans.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  Rng mix(base ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return mix.next_u64();
}

}  // namespace lightcrystal
