#pragma once

#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chw {

// Scaling convention shared by every transform and dense construction.
// Orthonormal keeps the 1/sqrt(2) factor of each butterfly stage;
// Unnormalized drops all of them so integer inputs stay integer.
enum class ScalingMode { Orthonormal, Unnormalized };

// Sample payloads: exact 64-bit integers or IEEE doubles.  Integer signals
// are safe through level-20 cascades as long as |x_i| <= 2^40.
template <class T>
concept SampleValue = std::same_as<T, std::int64_t> || std::same_as<T, double>;

constexpr bool is_pow2(std::size_t n) { return std::has_single_bit(n); }

// log2 of a power-of-two length.
constexpr int level_of(std::size_t n) { return std::bit_width(n) - 1; }

namespace detail {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

inline void require_pow2(std::size_t n, const char* what) {
  if (n == 0 || !is_pow2(n)) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(n) +
                                " is not a power of two");
  }
}

template <SampleValue T>
void require_mode(ScalingMode mode, const char* what) {
  if constexpr (std::is_integral_v<T>) {
    if (mode == ScalingMode::Orthonormal) {
      throw std::invalid_argument(std::string(what) +
                                  ": orthonormal mode requires a floating-point signal");
    }
  }
}

}  // namespace detail

}  // namespace chw
