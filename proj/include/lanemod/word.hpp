// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_WORD_HPP
#define LANEMOD_WORD_HPP

#include <bit>
#include <cstdint>
#include <type_traits>

namespace lanemod {

using u128 = unsigned __int128;
using i128 = __int128;

/// Machine word of n bits together with the double-width type used for
/// intermediate products and the signed type of the same size.
template <class U>
struct word_traits;

template <>
struct word_traits<std::uint8_t> {
  using wide = std::uint16_t;
  using signed_type = std::int8_t;
  static constexpr unsigned bits = 8;
};

template <>
struct word_traits<std::uint16_t> {
  using wide = std::uint32_t;
  using signed_type = std::int16_t;
  static constexpr unsigned bits = 16;
};

template <>
struct word_traits<std::uint32_t> {
  using wide = std::uint64_t;
  using signed_type = std::int32_t;
  static constexpr unsigned bits = 32;
};

template <>
struct word_traits<std::uint64_t> {
  using wide = u128;
  using signed_type = std::int64_t;
  static constexpr unsigned bits = 64;
};

template <class U>
concept Word = requires { word_traits<U>::bits; };

template <Word U>
using Wide = typename word_traits<U>::wide;

template <Word U>
using SignedOf = typename word_traits<U>::signed_type;

template <Word U>
inline constexpr unsigned word_bits = word_traits<U>::bits;

/// Type in which products of two T's are computed without integer promotion
/// to signed int (uint8/uint16 arithmetic otherwise promotes to int).
template <class T>
using calc_t = std::conditional_t<(sizeof(T) < sizeof(unsigned)), unsigned, T>;

/// Number of significant bits of v (0 for v == 0).
constexpr unsigned bit_size(u128 v) noexcept {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 64 + static_cast<unsigned>(std::bit_width(hi));
  return static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(v)));
}

/// r such that 2^(r-1) < p <= 2^r, for p >= 2.
constexpr unsigned ceil_log2(std::uint64_t p) noexcept {
  return static_cast<unsigned>(std::bit_width(p - 1));
}

template <Word U>
constexpr U low_mask(unsigned m) noexcept {
  return m >= word_bits<U> ? static_cast<U>(~U{0}) : static_cast<U>((U{1} << m) - 1);
}

}  // namespace lanemod

#endif  // LANEMOD_WORD_HPP
