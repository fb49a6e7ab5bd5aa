#pragma once

#include <cstdint>
#include <limits>

namespace threatdyn {

// SplitMix64 (Steele, Lea & Flood). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept
      : state_(seed) {}

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0,1).
  constexpr double next_unit() noexcept { return to_unit(operator()()); }

  constexpr std::uint64_t state() const noexcept { return state_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  // Top 53 bits scaled by 2^-53: z / 2^64 rounded down to double precision.
  static constexpr double to_unit(std::uint64_t z) noexcept {
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace threatdyn
