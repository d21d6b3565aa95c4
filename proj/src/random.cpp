#include "volvol/random.hpp"

#include <cmath>

#include "volvol/stats.hpp"

namespace volvol {

std::uint64_t Rng::splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = stream;
  std::uint64_t state = seed ^ splitmix64(s);
  engine_.seed(splitmix64(state));
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return stats::normal_quantile(uniform()); }

double Rng::exponential() { return -std::log(uniform()); }

}  // namespace volvol
