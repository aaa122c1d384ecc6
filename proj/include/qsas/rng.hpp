#pragma once

#include <cmath>
#include <cstdint>

namespace qsas {

/// Counter-based 64-bit generator (splitmix64 output function). The i-th
/// draw from seed s is mix(s + (i+1)*GOLDEN), so streams are reproducible
/// across platforms and implementations from (seed, index) alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * kGolden);
  }

  std::uint64_t next() { return mix(state_ += kGolden); }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (uses two draws).
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Derive an independent stream, e.g. one per lattice point or trial.
  SplitMix64 fork(std::uint64_t salt) const {
    return SplitMix64(mix(state_ ^ mix(salt)));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  std::uint64_t state_;
};

}  // namespace qsas
