// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_SIMD_PACK_HPP
#define LANEMOD_SIMD_PACK_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <new>
#include <type_traits>
#include <vector>

#include "lanemod/word.hpp"

#if defined(__GNUC__)
#define LANEMOD_LANE_INLINE [[gnu::always_inline]] inline
#else
#define LANEMOD_LANE_INLINE inline
#endif

namespace lanemod::simd {

/// Register width targeted by default (AVX2).
inline constexpr std::size_t default_register_bits = 256;
/// Alignment of lane batches in memory.
inline constexpr std::size_t batch_alignment = 64;

template <class T>
inline constexpr std::size_t lane_bits_of = sizeof(T) * 8;

namespace detail {

// GCC and Clang provide generic vector types; lanes of up to 64 bits are held
// in one, wider lanes (and other compilers) fall back to a plain array.
#if defined(__GNUC__)
template <class T, std::size_t N>
inline constexpr bool vectorizable =
    N >= 2 && (std::is_floating_point_v<T> || (std::is_integral_v<T> && sizeof(T) <= 8));

template <class T, std::size_t N>
struct vec_of {
  typedef T type __attribute__((vector_size(sizeof(T) * N)));
};
template <class T, std::size_t N>
struct lane_storage {
  using type = std::conditional_t<vectorizable<T, N>, typename vec_of<T, N>::type, std::array<T, N>>;
};
#else
template <class T, std::size_t N>
inline constexpr bool vectorizable = false;

template <class T, std::size_t N>
struct lane_storage {
  using type = std::array<T, N>;
};
#endif

}  // namespace detail

/// Fixed-length group of lanes processed as one register. The operations
/// below are straight-line lane-wise code which the compiler maps onto the
/// native vector unit; nothing here branches on lane data.
template <class T, std::size_t N>
struct alignas(std::min<std::size_t>(N * sizeof(T), batch_alignment)) Pack {
  static_assert(N >= 1 && (N & (N - 1)) == 0, "lane count must be a power of two");
  using value_type = T;
  using storage_type = typename detail::lane_storage<T, N>::type;
  static constexpr std::size_t size = N;

  storage_type lanes{};

  T& operator[](std::size_t i) noexcept { return reinterpret_cast<T*>(&lanes)[i]; }
  T operator[](std::size_t i) const noexcept { return lanes[i]; }

  static Pack broadcast(T v) noexcept {
    Pack r;
    if constexpr (detail::vectorizable<T, N>) {
      r.lanes = r.lanes + v;
    } else {
      r.lanes.fill(v);
    }
    return r;
  }
  static Pack load(const T* src) noexcept {
    Pack r;
    std::memcpy(&r.lanes, src, sizeof(T) * N);
    return r;
  }
  void store(T* dst) const noexcept { std::memcpy(dst, &lanes, sizeof(T) * N); }

  friend bool operator==(const Pack& a, const Pack& b) noexcept {
    for (std::size_t i = 0; i < N; ++i)
      if (!(a.lanes[i] == b.lanes[i])) return false;
    return true;
  }
};

/// Lane vector of n-bit words filling one register of `RegisterBits` bits.
template <Word U, std::size_t RegisterBits = default_register_bits>
using LaneVector = Pack<U, RegisterBits / word_bits<U>>;

template <std::floating_point F, std::size_t RegisterBits = default_register_bits>
using FloatLanes = Pack<F, RegisterBits / (8 * sizeof(F))>;

// ---------------------------------------------------------------------------
// Aligned storage for lane batches.

template <class T, std::size_t Align = batch_alignment>
struct AlignedAllocator {
  using value_type = T;
  template <class V>
  struct rebind {
    using other = AlignedAllocator<V, Align>;
  };

  AlignedAllocator() noexcept = default;
  template <class V>
  AlignedAllocator(const AlignedAllocator<V, Align>&) noexcept {}

  T* allocate(std::size_t count) {
    const std::size_t bytes = (count * sizeof(T) + Align - 1) / Align * Align;
    void* ptr = std::aligned_alloc(Align, bytes == 0 ? Align : bytes);
    if (!ptr) throw std::bad_alloc();
    return static_cast<T*>(ptr);
  }
  void deallocate(T* ptr, std::size_t) noexcept { std::free(ptr); }

  template <class V>
  friend bool operator==(const AlignedAllocator&, const AlignedAllocator<V, Align>&) noexcept {
    return true;
  }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

// ---------------------------------------------------------------------------
// Lane operations.

namespace detail {

/// Wraps a lane-wise vector expression, reinterpreting same-size results
/// (comparisons yield signed lanes).
template <class T, std::size_t N, class V>
LANEMOD_LANE_INLINE Pack<T, N> wrap(const V& v) noexcept {
  static_assert(sizeof(V) == sizeof(T) * N);
  Pack<T, N> r;
  r.lanes = (typename Pack<T, N>::storage_type)v;
  return r;
}

template <class T, std::size_t N, class Fn>
LANEMOD_LANE_INLINE Pack<T, N> map2(const Pack<T, N>& a, const Pack<T, N>& b, Fn fn) noexcept {
  Pack<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r.lanes[i] = static_cast<T>(fn(a.lanes[i], b.lanes[i]));
  return r;
}

template <class T, std::size_t N, class Fn>
LANEMOD_LANE_INLINE Pack<T, N> map1(const Pack<T, N>& a, Fn fn) noexcept {
  Pack<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r.lanes[i] = static_cast<T>(fn(a.lanes[i]));
  return r;
}

template <class T>
constexpr T all_ones(bool b) noexcept {
  return b ? static_cast<T>(~T{0}) : T{0};
}

}  // namespace detail

// Lane-wise binary operation: `VEXPR` over the storages va, vb, `SEXPR` over
// scalars x, y.
#define LANEMOD_LANE_OP2(VEXPR, SEXPR)                     \
  if constexpr (detail::vectorizable<T, N>) {              \
    const auto& va = a.lanes;                              \
    const auto& vb = b.lanes;                              \
    return detail::wrap<T, N>(VEXPR);                      \
  } else {                                                 \
    return detail::map2(a, b, [](T x, T y) { return SEXPR; }); \
  }

// Wrapping arithmetic.
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> add(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va + vb, static_cast<T>(static_cast<calc_t<T>>(x) + y))
}
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> sub(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va - vb, static_cast<T>(static_cast<calc_t<T>>(x) - y))
}
/// Low half of the lane-wise product.
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> mullo(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va * vb, static_cast<T>(static_cast<calc_t<T>>(x) * y))
}

// Bitwise.
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> bit_and(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va & vb, x & y)
}
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> bit_or(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va | vb, x | y)
}
/// ~a & b
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> bit_andnot(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(~va & vb, static_cast<T>(~x) & y)
}

// Unsigned ordering (8/16/32-bit lanes have native min/max).
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> min_u(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va < vb ? va : vb, x < y ? x : y)
}
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> max_u(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va < vb ? vb : va, x < y ? y : x)
}

// Comparisons return all-ones / all-zero lanes.
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> cmpeq(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va == vb, detail::all_ones<T>(x == y))
}
/// Native unsigned a > b for any lane type (also 128-bit lanes).
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> cmpgt_u(const Pack<T, N>& a, const Pack<T, N>& b) noexcept {
  LANEMOD_LANE_OP2(va > vb, detail::all_ones<T>(x > y))
}

#undef LANEMOD_LANE_OP2

template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> shift_right(const Pack<T, N>& a, unsigned k) noexcept {
  if constexpr (detail::vectorizable<T, N>) {
    return detail::wrap<T, N>(a.lanes >> k);
  } else {
    return detail::map1(a, [k](T x) { return x >> k; });
  }
}
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> shift_left(const Pack<T, N>& a, unsigned k) noexcept {
  if constexpr (detail::vectorizable<T, N>) {
    return detail::wrap<T, N>(a.lanes << k);
  } else {
    return detail::map1(a, [k](T x) { return static_cast<calc_t<T>>(x) << k; });
  }
}

/// Signed a > b on lanes reinterpreted as two's complement.
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> cmpgt_signed(const Pack<U, N>& a, const Pack<U, N>& b) noexcept {
  using I = SignedOf<U>;
  if constexpr (detail::vectorizable<U, N>) {
    using S = typename Pack<I, N>::storage_type;
    return detail::wrap<U, N>((S)a.lanes > (S)b.lanes);
  } else {
    return detail::map2(a, b, [](U x, U y) { return detail::all_ones<U>(static_cast<I>(x) > static_cast<I>(y)); });
  }
}
/// Unsigned a > b emulated with the signed comparison after biasing both
/// operands by 2^(n-1), as needed where the unit only compares signed lanes.
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> cmpgt_unsigned(const Pack<U, N>& a, const Pack<U, N>& b) noexcept {
  const auto bias = Pack<U, N>::broadcast(static_cast<U>(U{1} << (word_bits<U> - 1)));
  return cmpgt_signed(sub(a, bias), sub(b, bias));
}

/// Lanes of `b` where `mask` is set, of `a` elsewhere.
template <class T, std::size_t N>
LANEMOD_LANE_INLINE Pack<T, N> blend(const Pack<T, N>& a, const Pack<T, N>& b, const Pack<T, N>& mask) noexcept {
  return bit_or(bit_andnot(mask, a), bit_and(mask, b));
}

// Width changes. U lanes widen into the double-width type of the same word.

namespace detail {

template <Word U, std::size_t N>
inline constexpr bool widen_vectorizable = vectorizable<U, N> && vectorizable<Wide<U>, N / 2>;

#if defined(__GNUC__)
/// Lanes [first, first + N/2) converted to the double-width type.
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<Wide<U>, N / 2> widen_half(const Pack<U, N>& a, std::size_t first) noexcept {
  typename vec_of<U, N / 2>::type h;
  std::memcpy(&h, reinterpret_cast<const U*>(&a.lanes) + first, sizeof h);
  Pack<Wide<U>, N / 2> r;
  r.lanes = __builtin_convertvector(h, typename Pack<Wide<U>, N / 2>::storage_type);
  return r;
}
#endif

}  // namespace detail

/// Low half of the lanes, zero-extended (unpacklo with zero).
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<Wide<U>, N / 2> widen_lo(const Pack<U, N>& a) noexcept {
#if defined(__GNUC__)
  if constexpr (detail::widen_vectorizable<U, N>) return detail::widen_half(a, 0);
#endif
  Pack<Wide<U>, N / 2> r;
  for (std::size_t i = 0; i < N / 2; ++i) r.lanes[i] = a.lanes[i];
  return r;
}
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<Wide<U>, N / 2> widen_hi(const Pack<U, N>& a) noexcept {
#if defined(__GNUC__)
  if constexpr (detail::widen_vectorizable<U, N>) return detail::widen_half(a, N / 2);
#endif
  Pack<Wide<U>, N / 2> r;
  for (std::size_t i = 0; i < N / 2; ++i) r.lanes[i] = a.lanes[N / 2 + i];
  return r;
}
/// Inverse of widen_lo/widen_hi keeping the low n bits of every lane.
template <Word U, std::size_t K>
LANEMOD_LANE_INLINE Pack<U, 2 * K> narrow(const Pack<Wide<U>, K>& lo, const Pack<Wide<U>, K>& hi) noexcept {
  Pack<U, 2 * K> r;
#if defined(__GNUC__)
  if constexpr (detail::widen_vectorizable<U, 2 * K>) {
    using H = typename detail::vec_of<U, K>::type;
    const H l = __builtin_convertvector(lo.lanes, H);
    const H h = __builtin_convertvector(hi.lanes, H);
    std::memcpy(&r.lanes, &l, sizeof l);
    std::memcpy(reinterpret_cast<U*>(&r.lanes) + K, &h, sizeof h);
    return r;
  }
#endif
  for (std::size_t i = 0; i < K; ++i) {
    r.lanes[i] = static_cast<U>(lo.lanes[i]);
    r.lanes[K + i] = static_cast<U>(hi.lanes[i]);
  }
  return r;
}
/// Even lanes zero-extended to double width; with vector storage this is the
/// low half of every lane pair.
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<Wide<U>, N / 2> take_even(const Pack<U, N>& a) noexcept {
  using W = Wide<U>;
  if constexpr (detail::widen_vectorizable<U, N>) {
    using S = typename Pack<W, N / 2>::storage_type;
    return detail::wrap<W, N / 2>((S)a.lanes & static_cast<W>(static_cast<U>(~U{0})));
  } else {
    Pack<W, N / 2> r;
    for (std::size_t i = 0; i < N / 2; ++i) r.lanes[i] = a.lanes[2 * i];
    return r;
  }
}
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<Wide<U>, N / 2> take_odd(const Pack<U, N>& a) noexcept {
  using W = Wide<U>;
  if constexpr (detail::widen_vectorizable<U, N>) {
    using S = typename Pack<W, N / 2>::storage_type;
    return detail::wrap<W, N / 2>((S)a.lanes >> word_bits<U>);
  } else {
    Pack<W, N / 2> r;
    for (std::size_t i = 0; i < N / 2; ++i) r.lanes[i] = a.lanes[2 * i + 1];
    return r;
  }
}
/// Products of the even lanes as double-width lanes (pmuludq).
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<Wide<U>, N / 2> mul_even_wide(const Pack<U, N>& a, const Pack<U, N>& b) noexcept {
  return mullo(take_even(a), take_even(b));
}
/// Products of the odd lanes (shift by one lane, then pmuludq).
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<Wide<U>, N / 2> mul_odd_wide(const Pack<U, N>& a, const Pack<U, N>& b) noexcept {
  return mullo(take_odd(a), take_odd(b));
}
/// Re-interleaves even/odd double-width lanes, keeping the low n bits.
template <Word U, std::size_t K>
LANEMOD_LANE_INLINE Pack<U, 2 * K> interleave_low(const Pack<Wide<U>, K>& even, const Pack<Wide<U>, K>& odd) noexcept {
  using W = Wide<U>;
  if constexpr (detail::widen_vectorizable<U, 2 * K>) {
    return detail::wrap<U, 2 * K>((even.lanes & static_cast<W>(static_cast<U>(~U{0}))) | (odd.lanes << word_bits<U>));
  } else {
    Pack<U, 2 * K> r;
    for (std::size_t i = 0; i < K; ++i) {
      r.lanes[2 * i] = static_cast<U>(even.lanes[i]);
      r.lanes[2 * i + 1] = static_cast<U>(odd.lanes[i]);
    }
    return r;
  }
}

// ---------------------------------------------------------------------------
// Floating-point lanes.

template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> fadd(const Pack<F, N>& a, const Pack<F, N>& b) noexcept {
  if constexpr (detail::vectorizable<F, N>) return detail::wrap<F, N>(a.lanes + b.lanes);
  else return detail::map2(a, b, [](F x, F y) { return x + y; });
}
template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> fsub(const Pack<F, N>& a, const Pack<F, N>& b) noexcept {
  if constexpr (detail::vectorizable<F, N>) return detail::wrap<F, N>(a.lanes - b.lanes);
  else return detail::map2(a, b, [](F x, F y) { return x - y; });
}
template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> fmul(const Pack<F, N>& a, const Pack<F, N>& b) noexcept {
  if constexpr (detail::vectorizable<F, N>) return detail::wrap<F, N>(a.lanes * b.lanes);
  else return detail::map2(a, b, [](F x, F y) { return x * y; });
}
/// a * b + c with a single rounding.
template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> fmadd(const Pack<F, N>& a, const Pack<F, N>& b, const Pack<F, N>& c) noexcept {
  Pack<F, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = std::fma(a[i], b[i], c[i]);
  return r;
}
/// -(a * b) + c with a single rounding.
template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> fnmadd(const Pack<F, N>& a, const Pack<F, N>& b, const Pack<F, N>& c) noexcept {
  Pack<F, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = std::fma(-a[i], b[i], c[i]);
  return r;
}
template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> ffloor(const Pack<F, N>& a) noexcept {
  Pack<F, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = std::floor(a[i]);
  return r;
}
/// Lanes of `b` where the sign bit of `mask` is set, of `a` elsewhere (blendv).
template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> blend_sign(const Pack<F, N>& a, const Pack<F, N>& b, const Pack<F, N>& mask) noexcept {
  if constexpr (detail::vectorizable<F, N>) {
    using I = std::conditional_t<sizeof(F) == 8, std::int64_t, std::int32_t>;
    using S = typename Pack<I, N>::storage_type;
    return detail::wrap<F, N>((S)mask.lanes < 0 ? b.lanes : a.lanes);
  } else {
    Pack<F, N> r;
    for (std::size_t i = 0; i < N; ++i) r.lanes[i] = std::signbit(mask.lanes[i]) ? b.lanes[i] : a.lanes[i];
    return r;
  }
}

}  // namespace lanemod::simd

#endif  // LANEMOD_SIMD_PACK_HPP
