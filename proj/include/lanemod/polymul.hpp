// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_POLYMUL_HPP
#define LANEMOD_POLYMUL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lanemod/ntt.hpp"

namespace lanemod {

/// Polynomial over Z/pZ stored by coefficient vector (low degree first). The
/// storage length, not the mathematical degree, is what sizes products.
template <Word U>
struct ModPoly {
  U p{};
  std::vector<U> coeffs;

  ModPoly() = default;
  ModPoly(U modulus, std::vector<U> c) : p(modulus), coeffs(std::move(c)) {
    for (U v : coeffs)
      if (v >= p) throw Error(ErrorCode::range_error, "coefficient " + std::to_string(v) + " is not a residue");
  }

  std::size_t size() const noexcept { return coeffs.size(); }
  friend bool operator==(const ModPoly&, const ModPoly&) = default;
};

template <Word U>
struct PolyMatrix {
  std::size_t rows = 0, cols = 0;
  U p{};
  /// Row-major entries.
  std::vector<std::vector<U>> entries;

  PolyMatrix() = default;
  PolyMatrix(std::size_t r, std::size_t c, U modulus) : rows(r), cols(c), p(modulus), entries(r * c) {}

  std::vector<U>& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const std::vector<U>& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  /// Largest entry storage length.
  std::size_t degree_bound() const noexcept {
    std::size_t d = 0;
    for (const auto& e : entries) d = std::max(d, e.size());
    return d;
  }
  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;
};

namespace poly_detail {

template <Word U>
void check_same_modulus(U a, U b) {
  if (a != b)
    throw Error(ErrorCode::modulus_mismatch, "moduli " + std::to_string(a) + " and " + std::to_string(b) + " differ");
}

}  // namespace poly_detail

/// Schoolbook product, length len(a) + len(b) - 1.
template <Word U>
ModPoly<U> poly_mul_naive(const ModPoly<U>& a, const ModPoly<U>& b) {
  poly_detail::check_same_modulus(a.p, b.p);
  ModPoly<U> c;
  c.p = a.p;
  if (a.coeffs.empty() || b.coeffs.empty()) return c;
  const std::size_t la = a.size(), lb = b.size();
  c.coeffs.assign(la + lb - 1, U{0});
  for (std::size_t i = 0; i < la + lb - 1; ++i) {
    u128 acc = 0;
    const std::size_t j0 = i >= lb ? i - lb + 1 : 0;
    const std::size_t j1 = std::min(i, la - 1);
    for (std::size_t j = j0; j <= j1; ++j) {
      acc += static_cast<u128>(a.coeffs[j]) * b.coeffs[i - j];
      if (acc >> 127) acc %= a.p;
    }
    c.coeffs[i] = static_cast<U>(acc % a.p);
  }
  return c;
}

/// Two forward transforms of length len(a) + len(b) - 1, a lane-wise product
/// and one inverse transform.
template <Word U>
ModPoly<U> poly_mul_tft(const ModPoly<U>& a, const ModPoly<U>& b, const TftPlan<U>& plan) {
  poly_detail::check_same_modulus(a.p, b.p);
  poly_detail::check_same_modulus(a.p, plan.p());
  ModPoly<U> c;
  c.p = a.p;
  if (a.coeffs.empty() || b.coeffs.empty()) return c;
  const std::size_t l = a.size() + b.size() - 1;
  if (l > plan.size())
    throw Error(ErrorCode::unsupported_transform_size,
                "product length " + std::to_string(l) + " exceeds plan size " + std::to_string(plan.size()));
  const std::size_t size = ntt_detail::transform_size(l);
  simd::AlignedVector<U> fa(size, U{0}), fb(size, U{0});
  std::copy(a.coeffs.begin(), a.coeffs.end(), fa.begin());
  std::copy(b.coeffs.begin(), b.coeffs.end(), fb.begin());
  tft_inplace<U>(fa, a.size(), l, plan);
  tft_inplace<U>(fb, b.size(), l, plan);
  simd::mul_mod_batch<U>(std::span<U>(fa.data(), l), std::span<const U>(fa.data(), l),
                         std::span<const U>(fb.data(), l), plan.barrett());
  itft_inplace<U>(fa, l, plan);
  c.coeffs.assign(fa.begin(), fa.begin() + static_cast<std::ptrdiff_t>(l));
  return c;
}

/// Bit-size of the Kronecker evaluation point 2^H for operands of the given
/// lengths: the smallest multiple of 8 above the largest product coefficient.
unsigned kronecker_chunk_bits(std::uint64_t p, std::size_t la, std::size_t lb);

/// Evaluates both operands at 2^H, multiplies the integers and splits the
/// product back into H-bit coefficients.
template <Word U>
ModPoly<U> poly_mul_kronecker(const ModPoly<U>& a, const ModPoly<U>& b);

/// Evaluate, multiply pointwise, interpolate: every entry is transformed to
/// 2d - 1 points (d the largest entry length), the 2d - 1 matrices over Z/pZ
/// are multiplied and the product entries are transformed back. Result
/// entries have storage length 2d - 1.
template <Word U>
PolyMatrix<U> poly_mat_mul(const PolyMatrix<U>& A, const PolyMatrix<U>& B, const TftPlan<U>& plan) {
  poly_detail::check_same_modulus(A.p, B.p);
  poly_detail::check_same_modulus(A.p, plan.p());
  if (A.cols != B.rows || A.entries.size() != A.rows * A.cols || B.entries.size() != B.rows * B.cols)
    throw Error(ErrorCode::dimension_mismatch, std::to_string(A.rows) + "x" + std::to_string(A.cols) + " times " +
                                                   std::to_string(B.rows) + "x" + std::to_string(B.cols));
  PolyMatrix<U> C(A.rows, B.cols, A.p);
  const std::size_t d = std::max(A.degree_bound(), B.degree_bound());
  if (d == 0) return C;
  const std::size_t L = 2 * d - 1;
  if (L > plan.size())
    throw Error(ErrorCode::unsupported_transform_size,
                std::to_string(L) + " evaluation points exceed plan size " + std::to_string(plan.size()));
  const std::size_t size = ntt_detail::transform_size(L);

  auto transform = [&](const PolyMatrix<U>& M) {
    std::vector<simd::AlignedVector<U>> out(M.entries.size());
    for (std::size_t e = 0; e < M.entries.size(); ++e) {
      out[e].assign(size, U{0});
      std::copy(M.entries[e].begin(), M.entries[e].end(), out[e].begin());
      tft_inplace<U>(out[e], M.entries[e].size(), L, plan);
    }
    return out;
  };
  const auto ea = transform(A);
  const auto eb = transform(B);

  // Pointwise matrix products, vectorized across the evaluation points.
  simd::AlignedVector<U> tmp(L);
  const U p = A.p;
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < B.cols; ++j) {
      simd::AlignedVector<U> acc(size, U{0});
      std::span<U> acc_l(acc.data(), L);
      for (std::size_t k = 0; k < A.cols; ++k) {
        simd::mul_mod_batch<U>(tmp, std::span<const U>(ea[i * A.cols + k].data(), L),
                               std::span<const U>(eb[k * B.cols + j].data(), L), plan.barrett());
        simd::add_mod_batch<U>(acc_l, acc_l, tmp, p);
      }
      itft_inplace<U>(acc, L, plan);
      C.at(i, j).assign(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(L));
    }
  }
  return C;
}

extern template ModPoly<std::uint32_t> poly_mul_kronecker(const ModPoly<std::uint32_t>&, const ModPoly<std::uint32_t>&);
extern template ModPoly<std::uint64_t> poly_mul_kronecker(const ModPoly<std::uint64_t>&, const ModPoly<std::uint64_t>&);

}  // namespace lanemod

#endif  // LANEMOD_POLYMUL_HPP
