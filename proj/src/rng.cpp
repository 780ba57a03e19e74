#include "firmbreak/rng.hpp"

#include <cmath>
#include <numbers>

namespace firmbreak {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SplitMix64::next() noexcept {
  state_ += kGolden;
  return mix(state_);
}

double SplitMix64::uniform01() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::below(std::uint64_t n) noexcept {
  // 2^64 mod n computed in 64-bit arithmetic as (-n) mod n.
  const std::uint64_t reject_from = 0 - ((0 - n) % n);
  for (;;) {
    std::uint64_t v = next();
    if (reject_from == 0 || v < reject_from) return v % n;
  }
}

double SplitMix64::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u1 = 1.0 - uniform01();  // (0, 1]
  double u2 = uniform01();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix(seed ^ mix(index + 1));
}

}  // namespace firmbreak
