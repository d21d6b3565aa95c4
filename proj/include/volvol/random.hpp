#pragma once

#include <cstdint>
#include <random>

namespace volvol {

/// Seeded 64-bit stream: std::mt19937_64 (bit-exact across standard library
/// implementations) seeded through SplitMix64 so that `Rng(seed, stream)`
/// gives independent, reproducible per-ticker streams. Uniform and normal
/// variates are derived here rather than by std:: distributions, whose
/// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1), 53 bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by inversion of the normal CDF.
  double normal();
  /// Unit-rate exponential.
  double exponential();

  static std::uint64_t splitmix64(std::uint64_t& state);

 private:
  std::mt19937_64 engine_;
};

}  // namespace volvol
