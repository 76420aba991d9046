// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_MODSUM_HPP
#define LANEMOD_MODSUM_HPP

#include <algorithm>

#include "lanemod/error.hpp"
#include "lanemod/word.hpp"

namespace lanemod {

/// Implementation of the scalar modular sum.
///
/// `branching` is the general form with the overflow test. The two
/// branch-free forms are only valid when p has at most n-1 bits, so the sum of
/// two residues cannot wrap: `min_select` returns min(a, a - p) and
/// `sign_shift` adds p back through the arithmetic shift of a - p.
enum class SumVariant { automatic, branching, min_select, sign_shift };

template <Word U>
constexpr bool fits_below_top_bit(U p) noexcept {
  return std::bit_width(static_cast<std::uint64_t>(p)) <= word_bits<U> - 1;
}

template <Word U>
constexpr U add_mod(U x, U y, U p, SumVariant variant = SumVariant::automatic) {
  LANEMOD_EXPECT(x < p && y < p);
  if (variant == SumVariant::automatic)
    variant = fits_below_top_bit(p) ? SumVariant::min_select : SumVariant::branching;
  switch (variant) {
    case SumVariant::min_select: {
      LANEMOD_EXPECT(fits_below_top_bit(p));
      const U a = static_cast<U>(x + y);
      return std::min(a, static_cast<U>(a - p));
    }
    case SumVariant::sign_shift: {
      LANEMOD_EXPECT(fits_below_top_bit(p));
      using I = SignedOf<U>;
      const I a = static_cast<I>(static_cast<U>(x + y - p));
      const I mask = static_cast<I>(a >> (word_bits<U> - 1));
      return static_cast<U>(static_cast<U>(a) + (static_cast<U>(mask) & p));
    }
    default: {
      const U a = static_cast<U>(x + y);
      if (a < x) return static_cast<U>(a - p);
      return a >= p ? static_cast<U>(a - p) : a;
    }
  }
}

template <Word U>
constexpr U sub_mod(U x, U y, U p, SumVariant variant = SumVariant::automatic) {
  LANEMOD_EXPECT(x < p && y < p);
  if (variant == SumVariant::automatic)
    variant = fits_below_top_bit(p) ? SumVariant::min_select : SumVariant::branching;
  const U a = static_cast<U>(x - y);
  switch (variant) {
    case SumVariant::min_select:
      // a + p wraps back below a exactly when x >= y.
      LANEMOD_EXPECT(fits_below_top_bit(p));
      return std::min(a, static_cast<U>(a + p));
    case SumVariant::sign_shift: {
      LANEMOD_EXPECT(fits_below_top_bit(p));
      using I = SignedOf<U>;
      const I mask = static_cast<I>(static_cast<I>(a) >> (word_bits<U> - 1));
      return static_cast<U>(a + (static_cast<U>(mask) & p));
    }
    default:
      return x < y ? static_cast<U>(a + p) : a;
  }
}

template <Word U>
constexpr U neg_mod(U x, U p) {
  LANEMOD_EXPECT(x < p);
  return x == 0 ? U{0} : static_cast<U>(p - x);
}

}  // namespace lanemod

#endif  // LANEMOD_MODSUM_HPP
