#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fbmsde {

/// One splitmix64 scramble step. Used to derive per-path seeds from a base
/// seed and a path index so that parallel Monte Carlo draws are independent
/// of scheduling.
inline std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t path_seed(std::uint64_t base_seed, std::uint64_t path_index) {
  return splitmix64(base_seed + (path_index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Deterministic stream of standard normal draws. mt19937_64 is fully
/// specified by the standard and the Box-Muller transform is written out
/// explicitly, so the same seed reproduces the same doubles on any build
/// with the same libm.
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // uniforms in (0,1]; u1 > 0 keeps the log finite
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace fbmsde
