// rng.hpp
// Deterministic random number generation. All randomized operations in the
// library take explicit seeds and draw through this engine, so identical
// seeds give identical results on every run.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace icmkit {

// mt19937_64 with hand-rolled uniform/normal transforms. The standard
// distributions are implementation-defined, which would break byte-stable
// output; these transforms are fixed arithmetic on the raw 64-bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; generates pairs, caches the second value.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  // Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t value = 0;
    do {
      value = eng_();
    } while (value >= limit);
    return value % bound;
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Stable mix of a base seed and a stream index, so per-task seeds derived
// from one user seed do not collide with neighbouring user seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace icmkit
