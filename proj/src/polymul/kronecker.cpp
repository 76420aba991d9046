// SPDX-License-Identifier: Apache-2.0

#include "lanemod/bigmul.hpp"
#include "lanemod/polymul.hpp"

namespace lanemod {

unsigned kronecker_chunk_bits(std::uint64_t p, std::size_t la, std::size_t lb) {
  if (p < 2) throw Error(ErrorCode::invalid_modulus, "modulus must be at least 2");
  const auto coeff_bits = static_cast<unsigned>(std::bit_width(p - 1));
  const auto count_bits = static_cast<unsigned>(std::bit_width(std::min(la, lb)));
  const unsigned bound = 2 * coeff_bits + count_bits;
  return (bound + 7) / 8 * 8;
}

template <Word U>
ModPoly<U> poly_mul_kronecker(const ModPoly<U>& a, const ModPoly<U>& b) {
  poly_detail::check_same_modulus(a.p, b.p);
  ModPoly<U> c;
  c.p = a.p;
  if (a.coeffs.empty() || b.coeffs.empty()) return c;
  const unsigned H = kronecker_chunk_bits(a.p, a.size(), b.size());

  auto pack = [H](const std::vector<U>& coeffs) {
    BitWriter w((coeffs.size() * H + 63) / 64 + 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) w.put(i * H, coeffs[i]);
    return std::move(w).finish();
  };
  const BigNat prod = int_mul(pack(a.coeffs), pack(b.coeffs));

  const std::size_t l = a.size() + b.size() - 1;
  c.coeffs.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    // Horner over 64-bit pieces, most significant first: H may exceed 128.
    u128 r = 0;
    for (std::size_t top = H; top > 0;) {
      const unsigned width = top % 64 == 0 ? 64 : static_cast<unsigned>(top % 64);
      top -= width;
      r = ((r << width) | prod.bits(i * H + top, width)) % a.p;
    }
    c.coeffs[i] = static_cast<U>(r);
  }
  return c;
}

template ModPoly<std::uint32_t> poly_mul_kronecker(const ModPoly<std::uint32_t>&, const ModPoly<std::uint32_t>&);
template ModPoly<std::uint64_t> poly_mul_kronecker(const ModPoly<std::uint64_t>&, const ModPoly<std::uint64_t>&);

}  // namespace lanemod
