// SPDX-License-Identifier: Apache-2.0

#include "lanemod/numtheory.hpp"

#include <bit>

#include "lanemod/error.hpp"
#include "lanemod/montgomery.hpp"
#include "lanemod/word.hpp"

namespace lanemod {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t p) noexcept {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp != 0) {
    if (exp & 1) result = mulmod_u64(result, base, p);
    base = mulmod_u64(base, base, p);
    exp >>= 1;
  }
  return result;
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) { return detail::inverse_mod(a, p); }

bool is_prime_u64(std::uint64_t v) noexcept {
  if (v < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (v % small == 0) return v == small;
  }
  std::uint64_t d = v - 1;
  const unsigned s = static_cast<unsigned>(std::countr_zero(d));
  d >>= s;
  // These bases are deterministic for all v < 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod_u64(a, d, v);
    if (x == 1 || x == v - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, v);
      if (x == v - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f <= v / f; f += (f == 2 ? 1 : 2)) {
    if (v % f != 0) continue;
    out.push_back(f);
    while (v % f == 0) v /= f;
  }
  if (v > 1) out.push_back(v);
  return out;
}

std::uint64_t find_generator(std::uint64_t p) {
  if (!is_prime_u64(p)) throw Error(ErrorCode::invalid_modulus, std::to_string(p) + " is not prime");
  if (p == 2) return 1;
  const auto factors = prime_factors(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool generates = true;
    for (std::uint64_t f : factors) {
      if (powmod_u64(g, (p - 1) / f, p) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) return g;
  }
  throw Error(ErrorCode::invalid_modulus, "no generator found");
}

unsigned two_adic_valuation(std::uint64_t v) noexcept { return static_cast<unsigned>(std::countr_zero(v)); }

}  // namespace lanemod
