// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_SIMD_KERNELS_HPP
#define LANEMOD_SIMD_KERNELS_HPP

#include <span>
#include <string>
#include <vector>

#include "lanemod/barrett.hpp"
#include "lanemod/error.hpp"
#include "lanemod/float_mod.hpp"
#include "lanemod/montgomery.hpp"
#include "lanemod/simd/pack.hpp"

// Lane-parallel modular kernels. Every kernel computes, lane by lane, exactly
// what its scalar counterpart in modcore computes. Strategy choices depend on
// the context (a per-call decision), never on lane values.

namespace lanemod::simd {

namespace detail {

/// d >= p on word lanes. 8/16/32-bit units have unsigned max; 64-bit lanes go
/// through the biased signed comparison.
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> cmpge(const Pack<U, N>& d, const Pack<U, N>& p) noexcept {
  if constexpr (word_bits<U> < 64) {
    return cmpeq(max_u(d, p), d);
  } else {
    return cmpgt_unsigned(d, sub(p, Pack<U, N>::broadcast(1)));
  }
}

/// Barrett quotient estimate ((a >> s) * q) >> t on double-width lanes.
template <class L, std::size_t K>
LANEMOD_LANE_INLINE Pack<L, K> barrett_quotient(const Pack<L, K>& a, const Pack<L, K>& q, unsigned s, unsigned t) noexcept {
  return shift_right(mullo(shift_right(a, s), q), t);
}

/// rounds x (d = min(d, d - p)), the branch-free form of the correction loop.
template <class T, std::size_t K>
LANEMOD_LANE_INLINE Pack<T, K> correct(Pack<T, K> d, const Pack<T, K>& p, unsigned rounds) noexcept {
  for (unsigned i = 0; i < rounds; ++i) d = min_u(d, sub(d, p));
  return d;
}

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vmul_barrett_impl(const Pack<U, N>& x, const Pack<U, N>& y, const Pack<U, N>& p,
                                       const Pack<U, N>& q, unsigned s, unsigned t, unsigned h,
                                       bool narrow_difference) noexcept {
  if constexpr (word_bits<U> == 32) {
    // No 32x32->64 unpack exists: even and odd lanes go through separate
    // widening products and are re-interleaved afterwards.
    const auto a_even = mul_even_wide(x, y);
    const auto a_odd = mul_odd_wide(x, y);
    const auto q_even = take_even(q);
    const auto q_odd = take_odd(q);
    const auto c_even = barrett_quotient(a_even, q_even, s, t);
    const auto c_odd = barrett_quotient(a_odd, q_odd, s, t);
    if (narrow_difference) {
      const auto c = interleave_low<U>(c_even, c_odd);
      const auto d = sub(mullo(x, y), mullo(c, p));
      return min_u(d, sub(d, p));
    }
    const auto p_even = take_even(p);
    const auto p_odd = take_odd(p);
    const auto d_even = correct(sub(a_even, mullo(c_even, p_even)), p_even, h);
    const auto d_odd = correct(sub(a_odd, mullo(c_odd, p_odd)), p_odd, h);
    return interleave_low<U>(d_even, d_odd);
  } else {
    // 8-bit lanes compute through 16-bit lanes, 16-bit through 32-bit and
    // 64-bit through 128-bit, by unpacking both halves.
    const auto a_lo = mullo(take_even(x), take_even(y));
    const auto a_hi = mullo(take_odd(x), take_odd(y));
    const auto c_lo = barrett_quotient(a_lo, take_even(q), s, t);
    const auto c_hi = barrett_quotient(a_hi, take_odd(q), s, t);
    if (narrow_difference) {
      const auto c = interleave_low<U>(c_lo, c_hi);
      const auto d = sub(mullo(x, y), mullo(c, p));
      return min_u(d, sub(d, p));
    }
    const auto p_lo = take_even(p);
    const auto p_hi = take_odd(p);
    const auto d_lo = correct(sub(a_lo, mullo(c_lo, p_lo)), p_lo, h);
    const auto d_hi = correct(sub(a_hi, mullo(c_hi, p_hi)), p_hi, h);
    return interleave_low<U>(d_lo, d_hi);
  }
}

/// High n bits of the lane-wise product x * k.
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> mulhi(const Pack<U, N>& x, const Pack<U, N>& k) noexcept {
  constexpr unsigned n = word_bits<U>;
  if constexpr (n == 32) {
    return interleave_low<U>(shift_right(mul_even_wide(x, k), n), shift_right(mul_odd_wide(x, k), n));
  } else {
    return interleave_low<U>(shift_right(mullo(take_even(x), take_even(k)), n),
                     shift_right(mullo(take_odd(x), take_odd(k)), n));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Modular sum, difference and negation.

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vadd_mod(const Pack<U, N>& x, const Pack<U, N>& y, U modulus) noexcept {
  using P = Pack<U, N>;
  const auto p = P::broadcast(modulus);
  if (fits_below_top_bit(modulus)) {
    if constexpr (word_bits<U> < 64) {
      const auto a = add(x, y);
      return min_u(a, sub(a, p));
    } else {
      // No unsigned min on 64-bit lanes: use the sign of x + y - p.
      const auto a = sub(add(x, y), p);
      const auto b = cmpgt_signed(P::broadcast(0), a);
      return add(a, bit_and(b, p));
    }
  }
  if constexpr (word_bits<U> < 64) {
    // max(x, p - y) == x exactly when x + y >= p.
    const auto a = sub(p, y);
    const auto b = cmpeq(max_u(x, a), x);
    return add(sub(x, a), bit_andnot(b, p));
  } else {
    const auto a = add(x, y);
    const auto b = bit_or(cmpgt_unsigned(x, a), cmpgt_unsigned(a, sub(p, P::broadcast(1))));
    return sub(a, bit_and(b, p));
  }
}

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vsub_mod(const Pack<U, N>& x, const Pack<U, N>& y, U modulus) noexcept {
  using P = Pack<U, N>;
  const auto p = P::broadcast(modulus);
  const auto a = sub(x, y);
  if (fits_below_top_bit(modulus)) {
    if constexpr (word_bits<U> < 64) {
      return min_u(a, add(a, p));
    } else {
      const auto b = cmpgt_signed(P::broadcast(0), a);
      return add(a, bit_and(b, p));
    }
  }
  if constexpr (word_bits<U> < 64) {
    const auto no_borrow = cmpeq(max_u(x, y), x);
    return add(a, bit_andnot(no_borrow, p));
  } else {
    return add(a, bit_and(cmpgt_unsigned(y, x), p));
  }
}

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vneg_mod(const Pack<U, N>& x, U modulus) noexcept {
  using P = Pack<U, N>;
  const auto zero = cmpeq(x, P::broadcast(0));
  return bit_andnot(zero, sub(P::broadcast(modulus), x));
}

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vadd_mod(const Pack<U, N>& x, const Pack<U, N>& y, const BarrettContext<U>& ctx) noexcept {
  return vadd_mod(x, y, ctx.p());
}
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vsub_mod(const Pack<U, N>& x, const Pack<U, N>& y, const BarrettContext<U>& ctx) noexcept {
  return vsub_mod(x, y, ctx.p());
}
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vneg_mod(const Pack<U, N>& x, const BarrettContext<U>& ctx) noexcept {
  return vneg_mod(x, ctx.p());
}

/// Floating-point lanes, p of at most ell - 1 bits: the sign of a - p selects.
template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> vadd_mod(const Pack<F, N>& x, const Pack<F, N>& y, const FloatContext<F>& ctx) noexcept {
  const auto p = Pack<F, N>::broadcast(ctx.p());
  const auto a = fadd(x, y);
  const auto b = fsub(a, p);
  return blend_sign(b, a, b);
}
template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> vsub_mod(const Pack<F, N>& x, const Pack<F, N>& y, const FloatContext<F>& ctx) noexcept {
  const auto p = Pack<F, N>::broadcast(ctx.p());
  const auto a = fsub(x, y);
  return blend_sign(a, fadd(a, p), a);
}

// ---------------------------------------------------------------------------
// Barrett products.

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vmul_mod_barrett(const Pack<U, N>& x, const Pack<U, N>& y,
                                      const BarrettContext<U>& ctx) noexcept {
  using P = Pack<U, N>;
  return detail::vmul_barrett_impl(x, y, P::broadcast(ctx.p()), P::broadcast(ctx.q()), ctx.s(), ctx.t(),
                                   ctx.h(), ctx.profile() == BarrettProfile::minus2);
}

/// One modulus per lane sharing (r, s, t). Lane i is reduced modulo p[i].
template <Word U, std::size_t N>
class MultiBarrettContext {
 public:
  using pack_type = Pack<U, N>;

  const pack_type& p() const noexcept { return p_; }
  const pack_type& q() const noexcept { return q_; }
  const BarrettContext<U>& lane(std::size_t i) const noexcept { return lanes_[i]; }
  unsigned s() const noexcept { return lanes_[0].s(); }
  unsigned t() const noexcept { return lanes_[0].t(); }
  unsigned h() const noexcept { return lanes_[0].h(); }
  BarrettProfile profile() const noexcept { return lanes_[0].profile(); }

  /// `moduli` is cycled over the lanes (p1, p2, p1, p2, ... for two moduli).
  static MultiBarrettContext make(std::span<const U> moduli, BarrettProfile profile) {
    if (moduli.empty() || N % moduli.size() != 0)
      throw Error(ErrorCode::usage_error, "modulus count must divide the lane count");
    MultiBarrettContext c;
    for (std::size_t i = 0; i < N; ++i) {
      c.lanes_.push_back(make_barrett<U>(moduli[i % moduli.size()], profile));
      if (c.lanes_[i].r() != c.lanes_[0].r())
        throw Error(ErrorCode::profile_violation, "moduli must share the same bit-size r");
      c.p_[i] = c.lanes_[i].p();
      c.q_[i] = c.lanes_[i].q();
    }
    return c;
  }

 private:
  pack_type p_, q_;
  std::vector<BarrettContext<U>> lanes_;
};

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vmul_mod_barrett(const Pack<U, N>& x, const Pack<U, N>& y,
                                      const MultiBarrettContext<U, N>& ctx) noexcept {
  return detail::vmul_barrett_impl(x, y, ctx.p(), ctx.q(), ctx.s(), ctx.t(), ctx.h(),
                                   ctx.profile() == BarrettProfile::minus2);
}

/// Products by a fixed multiplicand.
template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vmul_mod_fixed(const Pack<U, N>& x, const FixedMultiplicand<U>& fm) noexcept {
  using P = Pack<U, N>;
  const auto p = P::broadcast(fm.p);
  const auto y = P::broadcast(fm.y);
  if (fm.half) {
    const auto c = detail::mulhi(x, P::broadcast(fm.psibar));
    return sub(mullo(x, y), mullo(c, p));
  }
  const auto c = detail::mulhi(x, P::broadcast(fm.psi));
  if (fits_below_top_bit(fm.p)) {
    const auto d = sub(mullo(x, y), mullo(c, p));
    return min_u(d, sub(d, p));
  }
  // m = n: x*y - c*p may reach 2p > 2^n, so the difference is formed on
  // double-width lanes.
  const auto p_lo = take_even(p);
  const auto p_hi = take_odd(p);
  const auto d_lo = sub(mullo(take_even(x), take_even(y)), mullo(take_even(c), p_lo));
  const auto d_hi = sub(mullo(take_odd(x), take_odd(y)), mullo(take_odd(c), p_hi));
  return interleave_low<U>(detail::correct(d_lo, p_lo, 1), detail::correct(d_hi, p_hi, 1));
}

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vmul_mod_fixed(const Pack<U, N>& x, const FixedMultiplicand<U>& fm,
                                    const BarrettContext<U>&) noexcept {
  return vmul_mod_fixed(x, fm);
}

// ---------------------------------------------------------------------------
// Montgomery products on encoded lanes.

template <Word U, std::size_t N>
LANEMOD_LANE_INLINE Pack<U, N> vmont_mul(const Pack<U, N>& x, const Pack<U, N>& y, const MontgomeryContext<U>& ctx) noexcept {
  using P = Pack<U, N>;
  const auto p = P::broadcast(ctx.p());
  // a mod 2^n is the low product, so b never needs wide lanes.
  const auto b = bit_and(mullo(mullo(x, y), P::broadcast(ctx.chi())), P::broadcast(ctx.mu()));
  const auto a_lo = mullo(take_even(x), take_even(y));
  const auto a_hi = mullo(take_odd(x), take_odd(y));
  const auto c_lo = add(a_lo, mullo(take_even(b), take_even(p)));
  const auto c_hi = add(a_hi, mullo(take_odd(b), take_odd(p)));
  const auto d = interleave_low<U>(shift_right(c_lo, ctx.m()), shift_right(c_hi, ctx.m()));
  if (ctx.m() < word_bits<U>) return min_u(d, sub(d, p));
  // m = n: a wrapped sum (c < a) means the true quotient exceeds 2^n.
  const auto wrapped = interleave_low<U>(cmpgt_u(a_lo, c_lo), cmpgt_u(a_hi, c_hi));
  const auto sel = bit_or(wrapped, detail::cmpge(d, p));
  return sub(d, bit_and(sel, p));
}

// ---------------------------------------------------------------------------
// Floating-point products with FMA.

template <std::floating_point F, std::size_t N>
LANEMOD_LANE_INLINE Pack<F, N> vmul_mod_fma(const Pack<F, N>& x, const Pack<F, N>& y, const FloatContext<F>& ctx) noexcept {
  using P = Pack<F, N>;
  const auto p = P::broadcast(ctx.p());
  const auto h = fmul(x, y);
  const auto err = fmadd(x, y, fsub(P::broadcast(F(0)), h));
  const auto b = fmul(h, P::broadcast(ctx.u()));
  const auto c = ffloor(b);
  const auto d = fnmadd(c, p, h);
  auto e = fadd(d, err);
  auto t = fsub(e, p);
  e = blend_sign(t, e, t);
  t = fadd(e, p);
  return blend_sign(e, t, e);
}

// ---------------------------------------------------------------------------
// Batches: spans processed one register at a time, remainder by the scalar
// kernel. `dst` may alias the first operand. Contexts are copied to locals so
// that stores through `dst` cannot force their fields to be reloaded.

template <class T, std::size_t N, class VecFn, class ScalarFn>
inline void for_each_pack(std::span<T> dst, std::span<const T> x, std::span<const T> y, VecFn vec,
                          ScalarFn scalar) {
  if (x.size() != dst.size() || y.size() != dst.size())
    throw Error(ErrorCode::dimension_mismatch, "batch operands differ in length");
  const std::size_t len = dst.size();
  std::size_t i = 0;
  for (; i + N <= len; i += N) {
    const auto px = Pack<T, N>::load(x.data() + i);
    const auto py = Pack<T, N>::load(y.data() + i);
    vec(px, py).store(dst.data() + i);
  }
  for (; i < len; ++i) dst[i] = scalar(x[i], y[i]);
}

template <Word U, std::size_t RegisterBits = default_register_bits>
void add_mod_batch(std::span<U> dst, std::span<const U> x, std::span<const U> y, U p) {
  constexpr std::size_t N = RegisterBits / word_bits<U>;
  for_each_pack<U, N>(dst, x, y, [p](const auto& a, const auto& b) { return vadd_mod(a, b, p); },
                      [p](U a, U b) { return add_mod<U>(a, b, p); });
}

template <Word U, std::size_t RegisterBits = default_register_bits>
void sub_mod_batch(std::span<U> dst, std::span<const U> x, std::span<const U> y, U p) {
  constexpr std::size_t N = RegisterBits / word_bits<U>;
  for_each_pack<U, N>(dst, x, y, [p](const auto& a, const auto& b) { return vsub_mod(a, b, p); },
                      [p](U a, U b) { return sub_mod<U>(a, b, p); });
}

template <Word U, std::size_t RegisterBits = default_register_bits>
void mul_mod_batch(std::span<U> dst, std::span<const U> x, std::span<const U> y, const BarrettContext<U>& context) {
  constexpr std::size_t N = RegisterBits / word_bits<U>;
  const BarrettContext<U> ctx = context;
  for_each_pack<U, N>(dst, x, y, [&ctx](const auto& a, const auto& b) { return vmul_mod_barrett(a, b, ctx); },
                      [&ctx](U a, U b) { return mul_mod<U>(a, b, ctx); });
}

template <Word U, std::size_t RegisterBits = default_register_bits>
void mul_mod_fixed_batch(std::span<U> dst, std::span<const U> x, const FixedMultiplicand<U>& multiplicand) {
  constexpr std::size_t N = RegisterBits / word_bits<U>;
  const FixedMultiplicand<U> fm = multiplicand;
  if (x.size() != dst.size()) throw Error(ErrorCode::dimension_mismatch, "batch operands differ in length");
  std::size_t i = 0;
  for (; i + N <= dst.size(); i += N) vmul_mod_fixed(Pack<U, N>::load(x.data() + i), fm).store(dst.data() + i);
  for (; i < dst.size(); ++i) dst[i] = mul_mod_fixed<U>(x[i], fm);
}

template <Word U, std::size_t RegisterBits = default_register_bits>
void mont_mul_batch(std::span<U> dst, std::span<const U> x, std::span<const U> y, const MontgomeryContext<U>& context) {
  constexpr std::size_t N = RegisterBits / word_bits<U>;
  const MontgomeryContext<U> ctx = context;
  for_each_pack<U, N>(dst, x, y, [&ctx](const auto& a, const auto& b) { return vmont_mul(a, b, ctx); },
                      [&ctx](U a, U b) { return mont_mul<U>(a, b, ctx); });
}

template <std::floating_point F, std::size_t RegisterBits = default_register_bits>
void mul_mod_fma_batch(std::span<F> dst, std::span<const F> x, std::span<const F> y, const FloatContext<F>& context) {
  constexpr std::size_t N = RegisterBits / (8 * sizeof(F));
  const FloatContext<F> ctx = context;
  for_each_pack<F, N>(dst, x, y, [&ctx](const auto& a, const auto& b) { return vmul_mod_fma(a, b, ctx); },
                      [&ctx](F a, F b) { return mul_mod_fma<F, FmaMode::hardware>(a, b, ctx); });
}

template <std::floating_point F, std::size_t RegisterBits = default_register_bits>
void add_mod_fma_batch(std::span<F> dst, std::span<const F> x, std::span<const F> y, const FloatContext<F>& ctx) {
  constexpr std::size_t N = RegisterBits / (8 * sizeof(F));
  const F p = ctx.p();
  for_each_pack<F, N>(dst, x, y, [&ctx](const auto& a, const auto& b) { return vadd_mod(a, b, ctx); },
                      [p](F a, F b) {
                        const F s = a + b;
                        return s >= p ? s - p : s;
                      });
}

}  // namespace lanemod::simd

#endif  // LANEMOD_SIMD_KERNELS_HPP
