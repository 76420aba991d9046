// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_BIGMUL_HPP
#define LANEMOD_BIGMUL_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "lanemod/bignat.hpp"
#include "lanemod/ntt.hpp"

namespace lanemod {

inline constexpr std::array<std::uint32_t, 3> default_ntt_primes = {998244353u, 985661441u, 943718401u};

/// Kronecker segmentation parameters for operands of at most N bits: d chunks
/// of h bits each, product coefficients below 2^H < p1 p2 p3.
struct ThreePrimePlan {
  std::array<std::uint32_t, 3> primes{};
  unsigned h = 0;
  std::size_t d = 0;
  /// 2h + ceil(log2((d + 1) * inner_dim))
  unsigned H = 0;
  std::size_t inner_dim = 1;
  /// Number of evaluation points, 2d - 1.
  std::size_t points = 0;
  std::vector<TftPlan<std::uint32_t>> plans;
  /// p1^-1 mod p2 and (p1 p2)^-1 mod p3 for Garner's recombination.
  std::uint64_t inv_p1_mod_p2 = 0;
  std::uint64_t inv_p1p2_mod_p3 = 0;
};

/// Largest chunk size accepted by the planner.
inline constexpr unsigned max_chunk_bits = 40;

/// h is the largest multiple of 8 (up to 40) meeting 2^H < p1 p2 p3 with the
/// 2d - 1 point transform supported by all three primes. `inner_dim` > 1
/// accounts for the sums of a matrix product.
ThreePrimePlan make_three_prime_plan(std::size_t N, std::size_t inner_dim = 1,
                                     std::array<std::uint32_t, 3> primes = default_ntt_primes);

/// floor(log2(p1 p2 p3)), computed exactly.
unsigned three_prime_log2(const std::array<std::uint32_t, 3>& primes);

/// The x < p1 p2 p3 with x = r_i mod p_i.
u128 crt3(std::uint32_t r1, std::uint32_t r2, std::uint32_t r3, const ThreePrimePlan& plan);

inline constexpr std::size_t default_schoolbook_cutoff = 64;

/// Exact product; schoolbook when the shorter operand has fewer than `cutoff`
/// limbs, three-prime transform product otherwise.
BigNat int_mul(const BigNat& a, const BigNat& b, std::size_t cutoff = default_schoolbook_cutoff);

/// Three-prime transform product regardless of size.
BigNat int_mul_fft(const BigNat& a, const BigNat& b);

struct BigMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<BigNat> entries;

  BigMatrix() = default;
  BigMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
  BigNat& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const BigNat& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  friend bool operator==(const BigMatrix&, const BigMatrix&) = default;
};

/// Every entry is segmented and transformed once per prime; the matrix
/// products happen on the evaluations.
BigMatrix int_mat_mul(const BigMatrix& A, const BigMatrix& B);

}  // namespace lanemod

#endif  // LANEMOD_BIGMUL_HPP
