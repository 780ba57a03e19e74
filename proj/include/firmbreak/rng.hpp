#pragma once

#include <cstdint>

namespace firmbreak {

/// SplitMix64 (Steele, Lea & Flood 2014). 64 bits of state; every output is
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Derived quantities are defined here too so that any port reproduces the
/// same streams bit for bit:
///   uniform01   = (next() >> 11) * 2^-53, in [0, 1)
///   below(n)    = rejection sampling on next(), rejecting values >= 2^64 - (2^64 mod n),
///                 then value mod n
///   normal      = Box-Muller on u1 = 1 - uniform01(), u2 = uniform01():
///                 sqrt(-2 ln u1) * cos(2π u2); the sine partner is cached and
///                 returned by the following call
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  double uniform01() noexcept;
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  double normal() noexcept;

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// Seed of an independent sub-stream: mix(seed ^ mix(index + 1)), where mix is
/// the SplitMix64 output finalizer. Used so per-sample streams do not depend
/// on evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace firmbreak
