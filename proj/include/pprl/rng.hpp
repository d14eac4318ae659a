#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace pprl {

// Counter-free splitmix64 stream. Every stochastic component in the library
// owns its own Rng, keyed through mix_seed so that runs are reproducible and
// streams never alias across (run, role, episode, stage).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1], used where log(u) must stay finite.
  double next_double_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Box-Muller, no caching so the stream layout stays one-draw-per-call pair.
  double next_gaussian(double sigma = 1.0) {
    double u1 = next_double_pos();
    double u2 = next_double();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Lap(0, b) via inverse CDF.
  double next_laplace(double b) {
    double u = next_double() - 0.5;
    double s = (u < 0.0) ? -1.0 : 1.0;
    return -b * s * std::log1p(-2.0 * std::fabs(u));
  }

 private:
  std::uint64_t state_;
};

// Order-sensitive key hash for deriving sub-stream seeds.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::uint64_t p : parts) {
    h ^= p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    Rng scramble(h);
    h = scramble.next_u64();
  }
  return h;
}

// Stream roles; combined with run seed and indices via mix_seed.
namespace rng_role {
inline constexpr std::uint64_t kEnv = 1;         // trajectory sampling
inline constexpr std::uint64_t kTree = 2;        // server-side tree payloads
inline constexpr std::uint64_t kUser = 3;        // user-side (local) noise
inline constexpr std::uint64_t kPresample = 4;   // batch response noise
}  // namespace rng_role

}  // namespace pprl
