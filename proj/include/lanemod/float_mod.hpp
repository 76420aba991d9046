// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_FLOAT_MOD_HPP
#define LANEMOD_FLOAT_MOD_HPP

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>

#include "lanemod/error.hpp"
#include "lanemod/word.hpp"

namespace lanemod {

/// Modulus held in an IEEE-754 binary32/binary64 value.
///
/// `u` is 1/p rounded to nearest and `ubar` the smallest representable value
/// >= 1/p. The global rounding mode is never touched: ubar is derived from u
/// by at most one upward ulp step, decided by the exact sign of u*p - 1.
template <std::floating_point F>
class FloatContext {
 public:
  /// Trailing significand bits: 23 for float, 52 for double.
  static constexpr unsigned ell = std::numeric_limits<F>::digits - 1;
  static constexpr unsigned max_modulus_bits = ell - 2;
  /// Modulus bound of the any-rounding half-size reduction.
  static constexpr unsigned half_bits = ell / 2;
  /// Modulus bound of the branch-reduced half-size reduction.
  static constexpr unsigned half_upward_bits = (ell - 1) / 2;

  F p() const noexcept { return p_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  F u() const noexcept { return u_; }
  F ubar() const noexcept { return ubar_; }
  /// e with u = (2^ell + v) / 2^e, v the trailing significand field of u.
  int u_exponent() const noexcept {
    int exp = 0;
    std::frexp(u_, &exp);
    return static_cast<int>(ell) + 1 - exp;
  }

  template <std::floating_point G>
  friend FloatContext<G> make_float_ctx(std::uint64_t p);

 private:
  F p_{};
  std::uint64_t modulus_ = 0;
  F u_{}, ubar_{};
};

template <std::floating_point F>
FloatContext<F> make_float_ctx(std::uint64_t p) {
  if (p < 2) throw Error(ErrorCode::invalid_modulus, "modulus must be at least 2");
  const auto bits = static_cast<unsigned>(std::bit_width(p));
  if (bits > FloatContext<F>::max_modulus_bits)
    throw Error(ErrorCode::profile_violation,
                std::to_string(bits) + "-bit modulus exceeds the " +
                    std::to_string(FloatContext<F>::max_modulus_bits) + "-bit floating-point bound");
  FloatContext<F> c;
  c.modulus_ = p;
  c.p_ = static_cast<F>(p);
  c.u_ = F(1) / c.p_;
  // fma rounds u*p - 1 once, so its sign is the sign of the exact value.
  c.ubar_ = std::fma(c.u_, c.p_, F(-1)) >= 0 ? c.u_
                                              : std::nextafter(c.u_, std::numeric_limits<F>::infinity());
  return c;
}

enum class HalfReduction {
  /// Both correction branches; correct under any rounding of the products.
  any_rounding,
  /// Uses ubar and drops the upper correction. Only valid for prime p when
  /// a = 0 or p does not divide a (e.g. a is a product of two residues).
  upward_no_high_branch,
};

/// a rem p for an integer value a, with p of at most ell/2 bits.
template <std::floating_point F>
F float_reduce_half(F a, const FloatContext<F>& ctx,
                    HalfReduction variant = HalfReduction::any_rounding) {
  if (variant == HalfReduction::any_rounding) {
    LANEMOD_EXPECT(std::bit_width(ctx.modulus()) <= FloatContext<F>::half_bits);
    LANEMOD_EXPECT(a >= 0 && a < std::ldexp(ctx.p(), FloatContext<F>::half_bits));
    const F b = a * ctx.u();
    const F c = std::floor(b);
    const F d = a - c * ctx.p();
    if (d >= ctx.p()) return d - ctx.p();
    if (d < 0) return d + ctx.p();
    return d;
  }
  LANEMOD_EXPECT(std::bit_width(ctx.modulus()) <= FloatContext<F>::half_upward_bits);
  LANEMOD_EXPECT(a >= 0 && a < std::ldexp(ctx.p(), FloatContext<F>::half_upward_bits));
  const F b = a * ctx.ubar();
  const F c = std::floor(b);
  const F d = a - c * ctx.p();
  LANEMOD_EXPECT(d >= 0 && d < ctx.p());
  return d;
}

// ---------------------------------------------------------------------------
// Exact product error.

/// Veltkamp split of a into hi + lo with each half exactly multipliable.
template <std::floating_point F>
constexpr void veltkamp_split(F a, F& hi, F& lo) noexcept {
  constexpr int shift = (std::numeric_limits<F>::digits + 1) / 2;
  constexpr F factor = static_cast<F>((std::uint64_t{1} << shift) + 1);
  const F c = factor * a;
  hi = c - (c - a);
  lo = a - hi;
}

/// l such that h + l = a * b exactly, where h = fl(a * b), without FMA.
template <std::floating_point F>
constexpr F two_product_error_dekker(F a, F b, F h) noexcept {
  F ah, al, bh, bl;
  veltkamp_split(a, ah, al);
  veltkamp_split(b, bh, bl);
  return ((ah * bh - h) + ah * bl + al * bh) + al * bl;
}

enum class FmaMode { hardware, dekker };

#if defined(FP_FAST_FMA)
inline constexpr FmaMode default_fma_mode = FmaMode::hardware;
#else
inline constexpr FmaMode default_fma_mode = FmaMode::dekker;
#endif

/// (a1 * a2) rem p for residues with p of at most ell - 2 bits.
template <std::floating_point F, FmaMode Mode = default_fma_mode>
F mul_mod_fma(F a1, F a2, const FloatContext<F>& ctx) {
  LANEMOD_EXPECT(a1 >= 0 && a2 >= 0 && a1 < ctx.p() && a2 < ctx.p());
  const F p = ctx.p();
  const F h = a1 * a2;
  F l, d;
  if constexpr (Mode == FmaMode::hardware) {
    l = std::fma(a1, a2, -h);
    const F c = std::floor(h * ctx.u());
    d = std::fma(-c, p, h);
  } else {
    l = two_product_error_dekker(a1, a2, h);
    const F c = std::floor(h * ctx.u());
    const F cp = c * p;
    const F cp_err = two_product_error_dekker(c, p, cp);
    d = (h - cp) - cp_err;
  }
  const F e = d + l;
  if (e >= p) return e - p;
  if (e < 0) return e + p;
  return e;
}

}  // namespace lanemod

#endif  // LANEMOD_FLOAT_MOD_HPP
