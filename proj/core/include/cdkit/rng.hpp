#pragma once

#include <cstdint>
#include <random>

namespace cdkit {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `index` of a run seeded with `master`; independent of how
/// streams are scheduled across workers.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal sampler via Box-Muller on uniform01, so that a given
/// engine state yields the same values under every standard library.
class NormalSampler {
 public:
  double operator()(Rng& rng) noexcept;

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cdkit
