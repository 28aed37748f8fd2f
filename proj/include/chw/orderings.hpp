#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chw/common.hpp"
#include "chw/errors.hpp"

namespace chw {

// Index permutation applied as out[i] = in[map[i]].
struct Permutation {
  std::vector<std::uint32_t> map;

  std::size_t size() const { return map.size(); }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

inline Permutation identity_permutation(std::size_t n) {
  Permutation p;
  p.map.resize(n);
  std::iota(p.map.begin(), p.map.end(), 0u);
  return p;
}

// Fails loudly if p is not a bijection on [0, n).
inline Permutation inverse(const Permutation& p) {
  const std::size_t n = p.size();
  Permutation inv;
  inv.map.assign(n, static_cast<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t j = p.map[i];
    if (j >= n) throw StructureError("permutation entry out of range");
    if (inv.map[j] != n) throw StructureError("permutation is not a bijection");
    inv.map[j] = static_cast<std::uint32_t>(i);
  }
  return inv;
}

constexpr std::size_t bit_reverse(std::size_t v, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (v & 1u);
    v >>= 1;
  }
  return r;
}

constexpr std::uint64_t gray_encode(std::uint64_t v) { return v ^ (v >> 1); }

namespace detail {

inline void require_perm_level(int m, const char* what) {
  if (m < 0 || m > 31) {
    throw std::invalid_argument(std::string(what) + ": level " + std::to_string(m) +
                                " out of range");
  }
}

}  // namespace detail

// Takes natural (Sylvester) WHT coefficient order to dyadic (Paley) order:
// bit reversal of the m-bit index.  Locked in closed form here; the test
// suite re-derives the map from the dense matrices by row matching.
inline Permutation natural_to_dyadic(int m) {
  detail::require_perm_level(m, "natural_to_dyadic");
  Permutation p;
  p.map.resize(std::size_t{1} << m);
  for (std::size_t i = 0; i < p.map.size(); ++i) {
    p.map[i] = static_cast<std::uint32_t>(bit_reverse(i, m));
  }
  return p;
}

// Takes dyadic order to sequency order (rows sorted by sign-change count):
// the binary reflected Gray code.  Oracle-validated in the test suite.
inline Permutation dyadic_to_sequency(int m) {
  detail::require_perm_level(m, "dyadic_to_sequency");
  Permutation p;
  p.map.resize(std::size_t{1} << m);
  for (std::size_t i = 0; i < p.map.size(); ++i) {
    p.map[i] = static_cast<std::uint32_t>(gray_encode(i));
  }
  return p;
}

template <SampleValue T>
std::vector<T> apply_permutation(const Permutation& p, const std::vector<T>& x) {
  if (p.size() != x.size()) {
    throw std::invalid_argument("apply_permutation: permutation size " +
                                std::to_string(p.size()) + " does not match signal length " +
                                std::to_string(x.size()));
  }
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[p.map[i]];
  return out;
}

// Adjacent sign changes along a matrix row.  Entries must be nonzero, which
// holds for every Hadamard row.
template <SampleValue T>
std::size_t count_sign_changes(std::span<const T> row) {
  std::size_t changes = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if ((row[i - 1] < T{0}) != (row[i] < T{0})) ++changes;
  }
  return changes;
}

}  // namespace chw
