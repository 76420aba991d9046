// SPDX-License-Identifier: Apache-2.0

#include "lanemod/bigmul.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lanemod/polymul.hpp"

namespace lanemod {

unsigned three_prime_log2(const std::array<std::uint32_t, 3>& primes) {
  const u128 prod = static_cast<u128>(primes[0]) * primes[1] * primes[2];
  return bit_size(prod) - 1;
}

ThreePrimePlan make_three_prime_plan(std::size_t N, std::size_t inner_dim, std::array<std::uint32_t, 3> primes) {
  if (N == 0) throw Error(ErrorCode::usage_error, "operand bit-size must be at least 1");
  if (inner_dim == 0) throw Error(ErrorCode::usage_error, "inner dimension must be at least 1");
  unsigned kmax = 64;
  for (auto p : primes) {
    if (!is_prime_u64(p)) throw Error(ErrorCode::invalid_modulus, std::to_string(p) + " is not prime");
    kmax = std::min(kmax, two_adic_valuation(p - 1));
  }
  kmax = std::min(kmax, 30u);
  const unsigned log_bound = three_prime_log2(primes);

  ThreePrimePlan plan;
  plan.primes = primes;
  plan.inner_dim = inner_dim;
  for (unsigned h = max_chunk_bits; h >= 8; h -= 8) {
    const std::size_t d = (N + h - 1) / h;
    const std::size_t points = 2 * d - 1;
    if (ntt_detail::transform_size(points) > (std::size_t{1} << kmax)) break;
    const u128 growth = static_cast<u128>(d + 1) * inner_dim;
    const unsigned H = 2 * h + (growth <= 1 ? 0 : bit_size(growth - 1));
    if (H > log_bound) continue;
    plan.h = h;
    plan.d = d;
    plan.H = H;
    plan.points = points;
    break;
  }
  if (plan.h == 0)
    throw Error(ErrorCode::size_overflow,
                std::to_string(N) + "-bit operands exceed the three-prime transform capacity");

  const auto k = static_cast<unsigned>(std::countr_zero(ntt_detail::transform_size(plan.points)));
  for (auto p : primes) plan.plans.push_back(make_plan<std::uint32_t>(p, k));
  plan.inv_p1_mod_p2 = invmod_u64(primes[0] % primes[1], primes[1]);
  const std::uint64_t p1p2_mod_p3 = mulmod_u64(primes[0], primes[1], primes[2]);
  plan.inv_p1p2_mod_p3 = invmod_u64(p1p2_mod_p3, primes[2]);
  return plan;
}

u128 crt3(std::uint32_t r1, std::uint32_t r2, std::uint32_t r3, const ThreePrimePlan& plan) {
  const std::uint64_t p1 = plan.primes[0], p2 = plan.primes[1], p3 = plan.primes[2];
  const std::uint64_t t1 = mulmod_u64((r2 + p2 - r1 % p2) % p2, plan.inv_p1_mod_p2, p2);
  const std::uint64_t x12 = r1 + p1 * t1;  // < p1 p2
  const std::uint64_t t2 = mulmod_u64((r3 + p3 - x12 % p3) % p3, plan.inv_p1p2_mod_p3, p3);
  return static_cast<u128>(x12) + static_cast<u128>(p1 * p2) * t2;
}

namespace {

/// Residues of the h-bit chunks of a modulo p.
std::vector<std::uint32_t> chunk_residues(const BigNat& a, const ThreePrimePlan& plan, std::uint32_t p) {
  const std::size_t count = (a.bit_length() + plan.h - 1) / plan.h;
  std::vector<std::uint32_t> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = static_cast<std::uint32_t>(a.bits(j * plan.h, plan.h) % p);
  return out;
}

/// CRT of every coefficient and evaluation at 2^h with a streaming carry.
BigNat recombine(const std::array<const std::uint32_t*, 3>& residues, const ThreePrimePlan& plan,
                 std::size_t result_bits) {
  BitWriter out((result_bits + 63) / 64 + 1);
  const u128 mask = (u128{1} << plan.h) - 1;
  u128 carry = 0;
  std::size_t j = 0;
  for (; j < plan.points; ++j) {
    const u128 x = crt3(residues[0][j], residues[1][j], residues[2][j], plan);
    if ((x >> plan.H) != 0)
      throw std::logic_error("recovered coefficient " + std::to_string(j) + " exceeds 2^H");
    const u128 t = x + carry;
    out.put(j * plan.h, static_cast<std::uint64_t>(t & mask));
    carry = t >> plan.h;
  }
  for (; carry != 0; ++j) {
    out.put(j * plan.h, static_cast<std::uint64_t>(carry & mask));
    carry >>= plan.h;
  }
  return std::move(out).finish();
}

}  // namespace

BigNat int_mul_fft(const BigNat& a, const BigNat& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const std::size_t N = std::max(a.bit_length(), b.bit_length());
  const ThreePrimePlan plan = make_three_prime_plan(N);
  const std::size_t size = ntt_detail::transform_size(plan.points);

  std::array<simd::AlignedVector<std::uint32_t>, 3> res;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::uint32_t p = plan.primes[i];
    const auto& tp = plan.plans[i];
    const auto ca = chunk_residues(a, plan, p);
    const auto cb = chunk_residues(b, plan, p);
    simd::AlignedVector<std::uint32_t> fa(size, 0), fb(size, 0);
    std::copy(ca.begin(), ca.end(), fa.begin());
    std::copy(cb.begin(), cb.end(), fb.begin());
    tft_inplace<std::uint32_t>(fa, ca.size(), plan.points, tp);
    tft_inplace<std::uint32_t>(fb, cb.size(), plan.points, tp);
    std::span<std::uint32_t> prod(fa.data(), plan.points);
    simd::mul_mod_batch<std::uint32_t>(prod, prod, std::span<const std::uint32_t>(fb.data(), plan.points),
                                       tp.barrett());
    itft_inplace<std::uint32_t>(fa, plan.points, tp);
    res[i] = std::move(fa);
  }
  return recombine({res[0].data(), res[1].data(), res[2].data()}, plan, a.bit_length() + b.bit_length());
}

BigNat int_mul(const BigNat& a, const BigNat& b, std::size_t cutoff) {
  if (a.is_zero() || b.is_zero()) return {};
  if (std::min(a.limb_count(), b.limb_count()) < cutoff) return mul_schoolbook(a, b);
  return int_mul_fft(a, b);
}

BigMatrix int_mat_mul(const BigMatrix& A, const BigMatrix& B) {
  if (A.cols != B.rows || A.entries.size() != A.rows * A.cols || B.entries.size() != B.rows * B.cols)
    throw Error(ErrorCode::dimension_mismatch, std::to_string(A.rows) + "x" + std::to_string(A.cols) + " times " +
                                                   std::to_string(B.rows) + "x" + std::to_string(B.cols));
  BigMatrix C(A.rows, B.cols);
  std::size_t N = 0;
  for (const auto& e : A.entries) N = std::max(N, e.bit_length());
  for (const auto& e : B.entries) N = std::max(N, e.bit_length());
  if (N == 0 || A.cols == 0) return C;

  const ThreePrimePlan plan = make_three_prime_plan(N, A.cols);
  std::array<PolyMatrix<std::uint32_t>, 3> prods;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::uint32_t p = plan.primes[i];
    PolyMatrix<std::uint32_t> pa(A.rows, A.cols, p), pb(B.rows, B.cols, p);
    for (std::size_t e = 0; e < A.entries.size(); ++e) pa.entries[e] = chunk_residues(A.entries[e], plan, p);
    for (std::size_t e = 0; e < B.entries.size(); ++e) pb.entries[e] = chunk_residues(B.entries[e], plan, p);
    prods[i] = poly_mat_mul(pa, pb, plan.plans[i]);
  }
  const unsigned growth = plan.inner_dim <= 1 ? 0 : ceil_log2(plan.inner_dim);
  const std::size_t result_bits = 2 * N + growth;
  for (std::size_t e = 0; e < C.entries.size(); ++e) {
    C.entries[e] = recombine({prods[0].entries[e].data(), prods[1].entries[e].data(), prods[2].entries[e].data()},
                             plan, result_bits);
  }
  return C;
}

}  // namespace lanemod
