#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

// Self-contained random number generation. The standard <random>
// distributions are implementation-defined, which would make seeded runs
// differ between standard libraries; every draw here is pinned to an exact
// algorithm so that (seed, run index) fully determines a trajectory.

namespace sbdp {

//============================================================
// SplitMix64: seeding / stream derivation
//============================================================

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stateless 64-bit mix of two words; used to derive substream seeds.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  return splitmix64_next(s);
}

//============================================================
// Xoshiro256** main generator
//============================================================

class Rng {
 public:
  Rng() : Rng(0) {}

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
    // all-zero state is the one invalid seed of xoshiro
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
  }

  /// Independent stream for run `index` under a master `seed`.
  /// The derivation is a pure function of (seed, index), so results do not
  /// depend on which worker executes the run.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(seed, 0x6A09E667F3BCC909ULL + index));
  }

  /// Stream for a keyed side channel (e.g. per-particle death marks).
  static Rng keyed(std::uint64_t seed, std::uint64_t channel, std::uint64_t key) {
    return Rng(mix64(mix64(seed, channel), key));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform01_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Exponential waiting time with the given rate (rate > 0).
  double exponential(double rate) { return -std::log(uniform01_pos()) / rate; }

  /// Unbiased integer in [0, n), n >= 1 (Lemire rejection).
  std::uint64_t below(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(next()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<__uint128_t>(next()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Marsaglia polar; caches the spare deviate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Geometric on {1, 2, ...} with success probability p in (0, 1]:
  /// number of Bernoulli(p) trials up to and including the first success.
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 1;
    const double g = std::floor(std::log(uniform01_pos()) / std::log1p(-p));
    if (g >= 9.0e18) return static_cast<std::uint64_t>(9.0e18);
    return static_cast<std::uint64_t>(g) + 1;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sbdp
