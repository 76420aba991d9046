// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_NUMTHEORY_HPP
#define LANEMOD_NUMTHEORY_HPP

#include <cstdint>
#include <vector>

namespace lanemod {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept;
std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t p) noexcept;
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p);

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime_u64(std::uint64_t v) noexcept;

/// Distinct prime factors by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t v);

/// Smallest generator of (Z/pZ)* for prime p.
std::uint64_t find_generator(std::uint64_t p);

/// Exponent of 2 in v, v > 0.
unsigned two_adic_valuation(std::uint64_t v) noexcept;

}  // namespace lanemod

#endif  // LANEMOD_NUMTHEORY_HPP
