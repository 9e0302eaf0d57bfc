#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace rwdiag {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// xoshiro256++ with splitmix64 seeding. Every sampler in the toolkit draws
/// from this generator so that results are reproducible across platforms and
/// independent of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
  }

  /// Counter-style derivation: the generator for ensemble member `index` is a
  /// pure function of (master_seed, index), so ensembles are order- and
  /// thread-count-independent.
  static Rng for_path(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(derive_path_seed(master_seed, index));
  }

  static std::uint64_t derive_path_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t sm = master_seed;
    const std::uint64_t base = splitmix64(sm);
    return base ^ (0xD1B54A32D192ED03ull * (index + 1));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t bound = n == 0 ? 0 : (0ull - n) % n;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x < bound);
    return x % n;
  }

  /// Standard normal via Box-Muller (deterministic, with cached spare).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  /// Index drawn according to a cumulative weight table (last entry ~ 1).
  std::size_t pick(const std::vector<double>& cumulative) {
    const double u = uniform01();
    std::size_t lo = 0, hi = cumulative.size();
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < cumulative[mid - 1]) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return lo;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rwdiag
