#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chw/common.hpp"
#include "chw/errors.hpp"
#include "chw/op_tally.hpp"
#include "chw/orderings.hpp"

namespace chw {

// Sub-interval of a signal where one cascade-stage Haar transform acts.
// Offsets are always a multiple of the size.
struct BlockSlice {
  std::size_t offset = 0;
  std::size_t size = 0;

  friend bool operator==(const BlockSlice&, const BlockSlice&) = default;
};

// Slices touched at cascade stage r of a size-2^m transform: the back half of
// every aligned block of size 2^{m-r+1}.  The front halves are identity
// portions and are never touched.
inline std::vector<BlockSlice> stage_blocks(int m, int r) {
  if (r < 1 || r > m - 1) {
    throw std::invalid_argument("stage_blocks: stage " + std::to_string(r) +
                                " out of range for m=" + std::to_string(m));
  }
  const std::size_t size = std::size_t{1} << (m - r);
  std::vector<BlockSlice> out;
  out.reserve(std::size_t{1} << (r - 1));
  for (std::size_t q = 0; q < (std::size_t{1} << (r - 1)); ++q) {
    out.push_back({q * 2 * size + size, size});
  }
  return out;
}

// In-place Haar wavelet transform.  Each level writes pairwise smooths into
// the front half and pairwise details into the back half, then recurses on
// the smooth half, so the output matches the recursive Haar matrix row order.
// Unnormalized mode costs exactly 2*(n - 1) additions and no multiplications.
// `scratch` needs n/2 values; a buffer is allocated when it is too small.
template <SampleValue T>
void haar_forward_inplace(std::span<T> x, ScalingMode mode, OpTally* tally = nullptr,
                          std::span<T> scratch = {}) {
  detail::require_pow2(x.size(), "haar_forward");
  detail::require_mode<T>(mode, "haar_forward");
  const std::size_t n = x.size();
  std::vector<T> local;
  if (scratch.size() < n / 2) {
    local.resize(n / 2);
    scratch = std::span<T>(local);
  }
  for (std::size_t len = n; len >= 2; len >>= 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
      T s = x[2 * i] + x[2 * i + 1];
      T d = x[2 * i] - x[2 * i + 1];
      if constexpr (std::is_floating_point_v<T>) {
        if (mode == ScalingMode::Orthonormal) {
          s *= detail::kInvSqrt2;
          d *= detail::kInvSqrt2;
        }
      }
      x[i] = s;  // write index trails the read pair
      scratch[i] = d;
    }
    std::copy_n(scratch.begin(), half, x.begin() + half);
    if (tally) {
      tally->additions += len;
      if (mode == ScalingMode::Orthonormal) tally->multiplications += len;
    }
  }
}

// Inverse of haar_forward.  Integer mode undoes one level at a time with an
// exact halving; the parity check only fires on inputs that are not integer
// forward outputs.
template <SampleValue T>
void haar_inverse_inplace(std::span<T> x, ScalingMode mode, std::span<T> scratch = {}) {
  detail::require_pow2(x.size(), "haar_inverse");
  detail::require_mode<T>(mode, "haar_inverse");
  const std::size_t n = x.size();
  std::vector<T> local;
  if (scratch.size() < n / 2) {
    local.resize(n / 2);
    scratch = std::span<T>(local);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    std::copy_n(x.begin(), half, scratch.begin());  // smooth half
    for (std::size_t i = 0; i < half; ++i) {
      const T s = scratch[i];
      const T d = x[half + i];
      if constexpr (std::is_floating_point_v<T>) {
        if (mode == ScalingMode::Orthonormal) {
          x[2 * i] = (s + d) * detail::kInvSqrt2;
          x[2 * i + 1] = (s - d) * detail::kInvSqrt2;
        } else {
          x[2 * i] = (s + d) / 2;
          x[2 * i + 1] = (s - d) / 2;
        }
      } else {
        const T sum = s + d;
        if (sum & 1) {
          throw StructureError(
              "haar_inverse: signal is not an integer forward-transform output");
        }
        x[2 * i] = sum / 2;
        x[2 * i + 1] = (s - d) / 2;
      }
    }
  }
}

// Walsh-Hadamard transform with dyadic coefficient order, computed as one
// full Haar transform followed by smaller Haar transforms on the stage
// slices, in stage order.  Unnormalized mode costs exactly m*2^m additions.
// A length-1 signal is returned unchanged at zero cost.
template <SampleValue T>
void chw_forward_inplace(std::span<T> x, ScalingMode mode, OpTally* tally = nullptr,
                         std::span<T> scratch = {}) {
  detail::require_pow2(x.size(), "chw_forward");
  detail::require_mode<T>(mode, "chw_forward");
  const int m = level_of(x.size());
  std::vector<T> local;
  if (scratch.size() < x.size() / 2) {
    local.resize(x.size() / 2);
    scratch = std::span<T>(local);
  }
  haar_forward_inplace(x, mode, tally, scratch);
  for (int r = 1; r <= m - 1; ++r) {
    for (const BlockSlice& s : stage_blocks(m, r)) {
      haar_forward_inplace(x.subspan(s.offset, s.size), mode, tally, scratch);
    }
  }
}

// Classical in-place butterfly WHT, natural (Sylvester) coefficient order.
// Unnormalized mode costs exactly m*2^m additions.
template <SampleValue T>
void fwht_natural_inplace(std::span<T> x, ScalingMode mode, OpTally* tally = nullptr) {
  detail::require_pow2(x.size(), "fwht_natural");
  detail::require_mode<T>(mode, "fwht_natural");
  const std::size_t n = x.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        T s = x[j] + x[j + h];
        T d = x[j] - x[j + h];
        if constexpr (std::is_floating_point_v<T>) {
          if (mode == ScalingMode::Orthonormal) {
            s *= detail::kInvSqrt2;
            d *= detail::kInvSqrt2;
          }
        }
        x[j] = s;
        x[j + h] = d;
      }
    }
    if (tally) {
      tally->additions += n;
      if (mode == ScalingMode::Orthonormal) tally->multiplications += n;
    }
  }
}

// Natural-order WHT followed by the natural->dyadic output permutation
// (bit reversal), applied as in-place swaps.  The permutation moves no data
// through the tally.
template <SampleValue T>
void fwht_dyadic_inplace(std::span<T> x, ScalingMode mode, OpTally* tally = nullptr) {
  fwht_natural_inplace(x, mode, tally);
  const int m = level_of(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t j = bit_reverse(i, m);
    if (i < j) std::swap(x[i], x[j]);
  }
}

// Maps Haar coefficients to dyadic WHT coefficients by applying a dyadic WHT
// to each scale's coefficient block: block j covers [2^j, 2^{j+1}) for
// j = 1..m-1; the two leading 1x1 blocks are identities.
template <SampleValue T>
void haar_walsh_forward_inplace(std::span<T> x, ScalingMode mode, OpTally* tally = nullptr) {
  detail::require_pow2(x.size(), "haar_walsh_forward");
  detail::require_mode<T>(mode, "haar_walsh_forward");
  const int m = level_of(x.size());
  for (int j = 1; j <= m - 1; ++j) {
    fwht_dyadic_inplace(x.subspan(std::size_t{1} << j, std::size_t{1} << j), mode, tally);
  }
}

// Rescales an Unnormalized transform output of size 2^m by 2^{-m/2}, giving
// the Orthonormal-mode output.  Exactly 2^m multiplications.
inline void normalize_inplace(std::span<double> x, int m, OpTally* tally = nullptr) {
  if (m < 0 || x.size() != (std::size_t{1} << m)) {
    throw std::invalid_argument("normalize: signal length " + std::to_string(x.size()) +
                                " does not match level " + std::to_string(m));
  }
  const double c = 1.0 / std::sqrt(std::ldexp(1.0, m));
  for (double& v : x) v *= c;
  if (tally) tally->multiplications += x.size();
}

// Pure out-of-place wrappers.

template <SampleValue T>
std::vector<T> haar_forward(std::vector<T> x, ScalingMode mode, OpTally* tally = nullptr) {
  haar_forward_inplace(std::span<T>(x), mode, tally);
  return x;
}

template <SampleValue T>
std::vector<T> haar_inverse(std::vector<T> y, ScalingMode mode) {
  haar_inverse_inplace(std::span<T>(y), mode);
  return y;
}

template <SampleValue T>
std::vector<T> chw_forward(std::vector<T> x, ScalingMode mode, OpTally* tally = nullptr) {
  chw_forward_inplace(std::span<T>(x), mode, tally);
  return x;
}

template <SampleValue T>
std::vector<T> fwht_natural(std::vector<T> x, ScalingMode mode, OpTally* tally = nullptr) {
  fwht_natural_inplace(std::span<T>(x), mode, tally);
  return x;
}

template <SampleValue T>
std::vector<T> fwht_dyadic(std::vector<T> x, ScalingMode mode, OpTally* tally = nullptr) {
  fwht_dyadic_inplace(std::span<T>(x), mode, tally);
  return x;
}

template <SampleValue T>
std::vector<T> haar_walsh_forward(std::vector<T> h, ScalingMode mode, OpTally* tally = nullptr) {
  haar_walsh_forward_inplace(std::span<T>(h), mode, tally);
  return h;
}

inline std::vector<double> normalized(std::vector<double> x, int m, OpTally* tally = nullptr) {
  normalize_inplace(std::span<double>(x), m, tally);
  return x;
}

inline std::vector<double> normalized(const std::vector<std::int64_t>& x, int m,
                                      OpTally* tally = nullptr) {
  std::vector<double> out(x.begin(), x.end());
  normalize_inplace(std::span<double>(out), m, tally);
  return out;
}

}  // namespace chw
