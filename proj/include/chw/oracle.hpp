#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chw/common.hpp"
#include "chw/dense_matrix.hpp"
#include "chw/errors.hpp"
#include "chw/orderings.hpp"

// Brute-force dense constructions built by literal expansion of the defining
// recursions.  These are the ground truth the fast paths are tested against,
// so they stay deliberately naive: no Kronecker shortcuts at multiply time,
// no sharing of code with the in-place transforms.

namespace chw {

// Levels above this would need more than 2^24 matrix entries (~134 MB).
inline constexpr int kMaxDenseLevel = 12;

namespace detail {

inline void require_dense_level(int m, const char* what) {
  if (m < 0) {
    throw std::invalid_argument(std::string(what) + ": negative level " + std::to_string(m));
  }
  if (m > kMaxDenseLevel) {
    throw CapacityError(std::string(what) + ": level " + std::to_string(m) +
                        " exceeds the dense capacity cap of " + std::to_string(kMaxDenseLevel));
  }
}

template <SampleValue T>
T maybe_scale(T v, ScalingMode mode) {
  if constexpr (std::is_floating_point_v<T>) {
    if (mode == ScalingMode::Orthonormal) return v * kInvSqrt2;
  }
  return v;
}

}  // namespace detail

// Hadamard matrix with rows in dyadic (Paley) order, grown one level at a
// time via H_{k+1} = s * [ H_k (x) (1 1) ; H_k (x) (1 -1) ] with s = 1/sqrt(2)
// in Orthonormal mode and 1 otherwise.
template <SampleValue T>
DenseMatrix<T> hadamard_dyadic_dense(int m, ScalingMode mode) {
  detail::require_dense_level(m, "hadamard_dyadic_dense");
  detail::require_mode<T>(mode, "hadamard_dyadic_dense");
  DenseMatrix<T> h(1, 1);
  h.at(0, 0) = T{1};
  for (int k = 0; k < m; ++k) {
    const std::size_t n = std::size_t{1} << k;
    DenseMatrix<T> next(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < 2 * n; ++j) {
        const T v = detail::maybe_scale(h.at(i, j / 2), mode);
        next.at(i, j) = v;
        next.at(n + i, j) = (j % 2 == 0) ? v : -v;
      }
    }
    h = std::move(next);
  }
  return h;
}

// Haar matrix grown via Psi_{k+1} = s * [ Psi_k (x) (1 1) ; I_k (x) (1 -1) ].
template <SampleValue T>
DenseMatrix<T> haar_dense(int m, ScalingMode mode) {
  detail::require_dense_level(m, "haar_dense");
  detail::require_mode<T>(mode, "haar_dense");
  DenseMatrix<T> psi(1, 1);
  psi.at(0, 0) = T{1};
  for (int k = 0; k < m; ++k) {
    const std::size_t n = std::size_t{1} << k;
    DenseMatrix<T> next(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < 2 * n; ++j) {
        next.at(i, j) = detail::maybe_scale(psi.at(i, j / 2), mode);
      }
      const T one = detail::maybe_scale(T{1}, mode);
      next.at(n + i, 2 * i) = one;
      next.at(n + i, 2 * i + 1) = -one;
    }
    psi = std::move(next);
  }
  return psi;
}

// Hadamard matrix in natural (Sylvester) order: the m-fold Kronecker power of
// the 2x2 block, grown by doubling.  Same row set as the dyadic matrix, in a
// different order.
template <SampleValue T>
DenseMatrix<T> hadamard_natural_dense(int m, ScalingMode mode = ScalingMode::Unnormalized) {
  detail::require_dense_level(m, "hadamard_natural_dense");
  detail::require_mode<T>(mode, "hadamard_natural_dense");
  DenseMatrix<T> h(1, 1);
  h.at(0, 0) = T{1};
  for (int k = 0; k < m; ++k) {
    const std::size_t n = std::size_t{1} << k;
    DenseMatrix<T> next(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const T v = detail::maybe_scale(h.at(i, j), mode);
        next.at(i, j) = v;
        next.at(i, n + j) = v;
        next.at(n + i, j) = v;
        next.at(n + i, n + j) = -v;
      }
    }
    h = std::move(next);
  }
  return h;
}

// Stage-r factor of the cascade decomposition:
// I_{r-1} (x) blockdiag(I_{m-r}, Psi_{m-r}).  The identity portions are
// unscaled in both modes; only the Haar blocks carry the mode's scaling.
template <SampleValue T>
DenseMatrix<T> cascade_factor_dense(int m, int r, ScalingMode mode) {
  detail::require_dense_level(m, "cascade_factor_dense");
  if (r < 1 || r > m - 1) {
    throw std::invalid_argument("cascade_factor_dense: stage " + std::to_string(r) +
                                " out of range for m=" + std::to_string(m));
  }
  const std::size_t n = std::size_t{1} << m;
  const std::size_t block = std::size_t{1} << (m - r + 1);
  const std::size_t half = block / 2;
  const DenseMatrix<T> psi = haar_dense<T>(m - r, mode);
  DenseMatrix<T> factor(n, n);
  for (std::size_t q = 0; q < (std::size_t{1} << (r - 1)); ++q) {
    const std::size_t base = q * block;
    for (std::size_t i = 0; i < half; ++i) {
      factor.at(base + i, base + i) = T{1};
      for (std::size_t j = 0; j < half; ++j) {
        factor.at(base + half + i, base + half + j) = psi.at(i, j);
      }
    }
  }
  return factor;
}

template <SampleValue T>
std::vector<T> mat_vec(const DenseMatrix<T>& m, const std::vector<T>& x) {
  if (m.cols() != x.size()) {
    throw std::invalid_argument("mat_vec: matrix has " + std::to_string(m.cols()) +
                                " columns but the signal has " + std::to_string(x.size()) +
                                " samples");
  }
  std::vector<T> out(m.rows(), T{0});
  for (std::size_t i = 0; i < m.rows(); ++i) {
    T acc{0};
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m.at(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

template <SampleValue T>
DenseMatrix<T> mat_mul(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("mat_mul: inner dimensions " + std::to_string(a.cols()) +
                                " and " + std::to_string(b.rows()) + " do not match");
  }
  DenseMatrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T v = a.at(i, k);
      if (v == T{0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, j) += v * b.at(k, j);
    }
  }
  return out;
}

template <SampleValue T>
DenseMatrix<T> transpose(const DenseMatrix<T>& m) {
  DenseMatrix<T> out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
  }
  return out;
}

// The map from Haar coefficients to dyadic WHT coefficients: block-diagonal
// (1, H_0, H_1, ..., H_{m-1}).  In floating arithmetic this is the product of
// the orthonormal Hadamard matrix with the transposed orthonormal Haar matrix.
// The integer build forms the same operator exactly: it computes the
// unnormalized product H * Psi^T and divides each column by the squared norm
// of the matching Haar row (Psi * Psi^T is diagonal), which is H * Psi^{-1}.
template <SampleValue T>
DenseMatrix<T> haar_walsh_dense(int m) {
  detail::require_dense_level(m, "haar_walsh_dense");
  if constexpr (std::is_floating_point_v<T>) {
    const auto h = hadamard_dyadic_dense<T>(m, ScalingMode::Orthonormal);
    const auto psi = haar_dense<T>(m, ScalingMode::Orthonormal);
    return mat_mul(h, transpose(psi));
  } else {
    const auto h = hadamard_dyadic_dense<T>(m, ScalingMode::Unnormalized);
    const auto psi = haar_dense<T>(m, ScalingMode::Unnormalized);
    DenseMatrix<T> out = mat_mul(h, transpose(psi));
    for (std::size_t j = 0; j < out.cols(); ++j) {
      T norm{0};
      for (std::size_t k = 0; k < psi.cols(); ++k) norm += psi.at(j, k) * psi.at(j, k);
      for (std::size_t i = 0; i < out.rows(); ++i) {
        if (out.at(i, j) % norm != 0) {
          throw StructureError("haar_walsh_dense: inexact column normalization");
        }
        out.at(i, j) /= norm;
      }
    }
    return out;
  }
}

// P with A = P * B: row i of A equals row map[i] of B.  Comparison is exact;
// a missing or ambiguous match raises StructureError.
template <SampleValue T>
Permutation row_permutation_between(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("row_permutation_between: size mismatch");
  }
  const std::size_t n = a.rows();
  Permutation p;
  p.map.resize(n);
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t match = n;
    for (std::size_t j = 0; j < n; ++j) {
      const auto ra = a.row(i);
      const auto rb = b.row(j);
      if (std::equal(ra.begin(), ra.end(), rb.begin())) {
        if (match != n) {
          throw StructureError("row_permutation_between: row " + std::to_string(i) +
                               " of A matches rows " + std::to_string(match) + " and " +
                               std::to_string(j) + " of B");
        }
        match = j;
      }
    }
    if (match == n) {
      throw StructureError("row_permutation_between: row " + std::to_string(i) +
                           " of A matches no row of B");
    }
    if (used[match]) {
      throw StructureError("row_permutation_between: row " + std::to_string(match) +
                           " of B matched twice");
    }
    used[match] = true;
    p.map[i] = static_cast<std::uint32_t>(match);
  }
  return p;
}

}  // namespace chw
