// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_BARRETT_HPP
#define LANEMOD_BARRETT_HPP

#include <algorithm>
#include <string>

#include "lanemod/error.hpp"
#include "lanemod/modsum.hpp"
#include "lanemod/word.hpp"

namespace lanemod {

/// Barrett parameter profiles, indexed by the bound m on the bit-size of p.
///
///            m <= n-2        m <= n-1   m <= n
///   alpha    2^(n-2)         2^(n-1)    2^n
///   s        max(r-2, 0)     r-1        r-1
///   t        n+1             n          n
///   h        1               2          3
enum class BarrettProfile { full, minus1, minus2 };

inline const char* to_string(BarrettProfile profile) noexcept {
  switch (profile) {
    case BarrettProfile::full: return "full";
    case BarrettProfile::minus1: return "minus1";
    case BarrettProfile::minus2: return "minus2";
  }
  return "?";
}

template <Word U>
class BarrettContext {
 public:
  using wide_type = Wide<U>;
  static constexpr unsigned n = word_bits<U>;

  U p() const noexcept { return p_; }
  /// Declared bound on the bit-size of p.
  unsigned m() const noexcept { return m_; }
  unsigned r() const noexcept { return r_; }
  unsigned s() const noexcept { return s_; }
  unsigned t() const noexcept { return t_; }
  /// Pre-inverse floor(2^(s+t) / p).
  U q() const noexcept { return q_; }
  unsigned alpha_log2() const noexcept { return alpha_log2_; }
  /// Maximal number of final corrections in barrett_reduce.
  unsigned h() const noexcept { return h_; }
  BarrettProfile profile() const noexcept { return profile_; }
  /// alpha * p: exclusive bound on the inputs of barrett_reduce.
  wide_type input_bound() const noexcept { return static_cast<wide_type>(wide_type{p_} << alpha_log2_); }

  /// Copy with a different pre-inverse, for fault injection in self-tests.
  BarrettContext with_preinverse(U q) const noexcept {
    BarrettContext c = *this;
    c.q_ = q;
    return c;
  }

  template <Word V>
  friend BarrettContext<V> make_barrett(V p, BarrettProfile profile);

 private:
  BarrettContext() = default;

  U p_{};
  unsigned m_ = 0, r_ = 0, s_ = 0, t_ = 0;
  U q_{};
  unsigned alpha_log2_ = 0, h_ = 0;
  BarrettProfile profile_ = BarrettProfile::full;
};

inline unsigned profile_bound(BarrettProfile profile, unsigned n) noexcept {
  switch (profile) {
    case BarrettProfile::minus2: return n - 2;
    case BarrettProfile::minus1: return n - 1;
    default: return n;
  }
}

/// Tightest profile admitted by p's bit-size.
template <Word U>
BarrettProfile best_profile(U p) noexcept {
  const auto bits = static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(p)));
  if (bits <= word_bits<U> - 2) return BarrettProfile::minus2;
  if (bits <= word_bits<U> - 1) return BarrettProfile::minus1;
  return BarrettProfile::full;
}

template <Word U>
BarrettContext<U> make_barrett(U p, BarrettProfile profile) {
  using W = Wide<U>;
  constexpr unsigned n = word_bits<U>;
  if (p < 2) throw Error(ErrorCode::invalid_modulus, "Barrett modulus must be at least 2");
  const unsigned m = profile_bound(profile, n);
  const auto bits = static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(p)));
  if (bits > m)
    throw Error(ErrorCode::profile_violation,
                std::to_string(bits) + "-bit modulus exceeds the " + to_string(profile) +
                    " profile bound m=" + std::to_string(m) + " for n=" + std::to_string(n));

  BarrettContext<U> c;
  c.p_ = p;
  c.m_ = m;
  c.r_ = ceil_log2(p);
  c.profile_ = profile;
  switch (profile) {
    case BarrettProfile::minus2:
      c.alpha_log2_ = n - 2;
      c.s_ = c.r_ >= 2 ? c.r_ - 2 : 0;
      // For r = 1 the tabulated t = n+1 would give q = 2^n; t = n keeps q in
      // a word and still yields h = 1.
      c.t_ = c.r_ >= 2 ? n + 1 : n;
      c.h_ = 1;
      break;
    case BarrettProfile::minus1:
      c.alpha_log2_ = n - 1;
      c.s_ = c.r_ - 1;
      c.t_ = n;
      c.h_ = 2;
      break;
    case BarrettProfile::full:
      c.alpha_log2_ = n;
      c.s_ = c.r_ - 1;
      c.t_ = n;
      c.h_ = 3;
      break;
  }
  c.q_ = static_cast<U>((W{1} << (c.s_ + c.t_)) / p);
  return c;
}

/// a rem p for 0 <= a < alpha * p. The correction loop runs at most h times.
template <Word U>
constexpr U barrett_reduce(Wide<U> a, const BarrettContext<U>& ctx) {
  using W = Wide<U>;
  using C = calc_t<W>;
  LANEMOD_EXPECT(a < ctx.input_bound());
  const W b = static_cast<W>(a >> ctx.s());
  const W c = static_cast<W>((static_cast<C>(b) * ctx.q()) >> ctx.t());
  W d = static_cast<W>(a - static_cast<W>(static_cast<C>(c) * ctx.p()));
  while (d >= ctx.p()) d = static_cast<W>(d - ctx.p());
  return static_cast<U>(d);
}

template <Word U>
struct CountedReduction {
  U value;
  unsigned corrections;
};

/// barrett_reduce that also reports how many correction steps were taken.
template <Word U>
constexpr CountedReduction<U> barrett_reduce_counted(Wide<U> a, const BarrettContext<U>& ctx) {
  using W = Wide<U>;
  using C = calc_t<W>;
  LANEMOD_EXPECT(a < ctx.input_bound());
  const W b = static_cast<W>(a >> ctx.s());
  const W c = static_cast<W>((static_cast<C>(b) * ctx.q()) >> ctx.t());
  W d = static_cast<W>(a - static_cast<W>(static_cast<C>(c) * ctx.p()));
  unsigned count = 0;
  while (d >= ctx.p()) {
    d = static_cast<W>(d - ctx.p());
    ++count;
  }
  return {static_cast<U>(d), count};
}

template <Word U>
constexpr U mul_mod(U x, U y, const BarrettContext<U>& ctx) {
  using W = Wide<U>;
  LANEMOD_EXPECT(x < ctx.p() && y < ctx.p());
  return barrett_reduce<U>(static_cast<W>(static_cast<calc_t<W>>(x) * y), ctx);
}

template <Word U>
constexpr U add_mod(U x, U y, const BarrettContext<U>& ctx, SumVariant v = SumVariant::automatic) {
  return add_mod<U>(x, y, ctx.p(), v);
}

template <Word U>
constexpr U sub_mod(U x, U y, const BarrettContext<U>& ctx, SumVariant v = SumVariant::automatic) {
  return sub_mod<U>(x, y, ctx.p(), v);
}

template <Word U>
constexpr U neg_mod(U x, const BarrettContext<U>& ctx) {
  return neg_mod<U>(x, ctx.p());
}

// ---------------------------------------------------------------------------
// Correction-free reduction for moduli of at most floor((n-1)/2) bits.

template <Word U>
class BarrettHalfContext {
 public:
  static constexpr unsigned n = word_bits<U>;
  static constexpr unsigned max_modulus_bits = (n - 1) / 2;

  U p() const noexcept { return p_; }
  unsigned r() const noexcept { return r_; }
  unsigned t() const noexcept { return t_; }
  /// ceil(2^t / p)
  U qbar() const noexcept { return qbar_; }
  unsigned alpha_log2() const noexcept { return max_modulus_bits; }

  template <Word V>
  friend BarrettHalfContext<V> make_barrett_half(V p);

 private:
  U p_{};
  unsigned r_ = 0, t_ = 0;
  U qbar_{};
};

template <Word U>
BarrettHalfContext<U> make_barrett_half(U p) {
  using W = Wide<U>;
  if (p < 2) throw Error(ErrorCode::invalid_modulus, "modulus must be at least 2");
  const auto bits = static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(p)));
  if (bits > BarrettHalfContext<U>::max_modulus_bits)
    throw Error(ErrorCode::profile_violation,
                "half-size Barrett needs p of at most " +
                    std::to_string(BarrettHalfContext<U>::max_modulus_bits) + " bits");
  BarrettHalfContext<U> c;
  c.p_ = p;
  c.r_ = ceil_log2(p);
  c.t_ = word_bits<U> + c.r_ - 1;
  const W pow = W{1} << c.t_;
  c.qbar_ = static_cast<U>((pow + p - 1) / p);
  return c;
}

/// a rem p with no correction step. Valid whenever a * p <= 2^t, which holds
/// for every a < 2^floor((n-1)/2) * p.
template <Word U>
constexpr U barrett_reduce_half(U a, const BarrettHalfContext<U>& ctx) {
  using W = Wide<U>;
  using C = calc_t<W>;
  LANEMOD_EXPECT(static_cast<W>(static_cast<C>(a) * ctx.p()) <= (W{1} << ctx.t()));
  const U c = static_cast<U>((static_cast<C>(a) * ctx.qbar()) >> ctx.t());
  return static_cast<U>(a - static_cast<calc_t<U>>(c) * ctx.p());
}

// ---------------------------------------------------------------------------
// Products by a fixed multiplicand y with cached floor(2^n y / p).

template <Word U>
struct FixedMultiplicand {
  U y{};
  /// floor(2^n y / p)
  U psi{};
  /// ceil(2^n y / p), only meaningful when `half` is set.
  U psibar{};
  U p{};
  /// p has at most n/2 bits: the correction-free product applies.
  bool half = false;
};

template <Word U>
constexpr FixedMultiplicand<U> make_fixed(U y, U p) {
  using W = Wide<U>;
  constexpr unsigned n = word_bits<U>;
  if (p < 2) throw Error(ErrorCode::invalid_modulus, "modulus must be at least 2");
  if (y >= p) throw Error(ErrorCode::range_error, "fixed multiplicand must be a residue");
  FixedMultiplicand<U> fm;
  fm.y = y;
  fm.p = p;
  const W scaled = static_cast<W>(W{y} << n);
  fm.psi = static_cast<U>(scaled / p);
  fm.half = std::bit_width(static_cast<std::uint64_t>(p)) <= n / 2;
  if (fm.half) fm.psibar = static_cast<U>((scaled + (p - 1)) / p);
  return fm;
}

template <Word U>
constexpr FixedMultiplicand<U> make_fixed(U y, const BarrettContext<U>& ctx) {
  return make_fixed<U>(y, ctx.p());
}

/// (x * y) rem p with one conditional correction.
template <Word U>
constexpr U mul_mod_fixed_general(U x, const FixedMultiplicand<U>& fm) {
  using W = Wide<U>;
  using C = calc_t<W>;
  constexpr unsigned n = word_bits<U>;
  LANEMOD_EXPECT(x < fm.p);
  const U c = static_cast<U>((static_cast<C>(x) * fm.psi) >> n);
  const W d = static_cast<W>(static_cast<C>(x) * fm.y - static_cast<C>(c) * fm.p);
  return static_cast<U>(d >= fm.p ? d - fm.p : d);
}

/// (x * y) rem p with no correction, for p of at most n/2 bits.
template <Word U>
constexpr U mul_mod_fixed_half(U x, const FixedMultiplicand<U>& fm) {
  using W = Wide<U>;
  using C = calc_t<W>;
  constexpr unsigned n = word_bits<U>;
  LANEMOD_EXPECT(x < fm.p && fm.half);
  const U c = static_cast<U>((static_cast<C>(x) * fm.psibar) >> n);
  return static_cast<U>(static_cast<calc_t<U>>(x) * fm.y - static_cast<calc_t<U>>(c) * fm.p);
}

template <Word U>
constexpr U mul_mod_fixed(U x, const FixedMultiplicand<U>& fm) {
  return fm.half ? mul_mod_fixed_half(x, fm) : mul_mod_fixed_general(x, fm);
}

template <Word U>
constexpr U mul_mod_fixed(U x, const FixedMultiplicand<U>& fm, const BarrettContext<U>& ctx) {
  LANEMOD_EXPECT(fm.p == ctx.p());
  static_cast<void>(ctx);
  return mul_mod_fixed(x, fm);
}

}  // namespace lanemod

#endif  // LANEMOD_BARRETT_HPP
