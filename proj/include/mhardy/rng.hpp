#pragma once

#include <cstdint>

namespace mhardy {

// Deterministic generator (xoshiro256** seeded through splitmix64).
// <random> distributions are implementation-defined, which would break the
// byte-identical-CSV guarantee, so everything derives from raw 64-bit draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix(x);
  }

  // Independent stream per trial: reseeding keeps trials order-insensitive.
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
    return Rng(seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double symmetric() { return uniform(-1.0, 1.0); }

  // [0, n)
  int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

 private:
  static std::uint64_t splitmix(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace mhardy
