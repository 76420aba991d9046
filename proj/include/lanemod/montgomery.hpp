// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_MONTGOMERY_HPP
#define LANEMOD_MONTGOMERY_HPP

#include <string>

#include "lanemod/error.hpp"
#include "lanemod/word.hpp"

namespace lanemod {

/// Odd modulus p with cofactors satisfying rho * 2^m - chi * p = 1,
/// 0 < chi < 2^m and 0 < rho < p.
template <Word U>
class MontgomeryContext {
 public:
  using wide_type = Wide<U>;
  static constexpr unsigned n = word_bits<U>;

  U p() const noexcept { return p_; }
  unsigned m() const noexcept { return m_; }
  /// 2^m - 1
  U mu() const noexcept { return mu_; }
  U chi() const noexcept { return chi_; }
  U rho() const noexcept { return rho_; }
  /// 2^(2m) mod p, the encoding constant.
  U r2() const noexcept { return r2_; }

  template <Word V>
  friend MontgomeryContext<V> make_montgomery(V p, unsigned m);

 private:
  U p_{};
  unsigned m_ = 0;
  U mu_{}, chi_{}, rho_{}, r2_{};
};

namespace detail {

/// Inverse of a modulo p (gcd(a, p) = 1) by the extended Euclidean algorithm.
inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  i128 r0 = p, r1 = a % p;
  i128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    const i128 quo = r0 / r1;
    const i128 r2 = r0 - quo * r1;
    r0 = r1;
    r1 = r2;
    const i128 s2 = s0 - quo * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw Error(ErrorCode::invalid_modulus, "value is not invertible");
  if (s0 < 0) s0 += p;
  return static_cast<std::uint64_t>(s0);
}

}  // namespace detail

template <Word U>
MontgomeryContext<U> make_montgomery(U p, unsigned m) {
  using W = Wide<U>;
  constexpr unsigned n = word_bits<U>;
  if (p < 3 || p % 2 == 0)
    throw Error(ErrorCode::invalid_modulus, "Montgomery modulus must be odd and at least 3");
  const unsigned r = ceil_log2(p);
  if (m < r || m > n)
    throw Error(ErrorCode::profile_violation,
                "Montgomery shift m=" + std::to_string(m) + " outside [" + std::to_string(r) + ", " +
                    std::to_string(n) + "]");
  MontgomeryContext<U> c;
  c.p_ = p;
  c.m_ = m;
  c.mu_ = low_mask<U>(m);
  const W two_m = W{1} << m;
  const auto two_m_mod_p = static_cast<std::uint64_t>(two_m % p);
  c.rho_ = static_cast<U>(detail::inverse_mod(two_m_mod_p, p));
  const W lhs = static_cast<W>(static_cast<calc_t<W>>(c.rho_) * two_m);
  c.chi_ = static_cast<U>((lhs - 1) / p);
  if (static_cast<W>(lhs - static_cast<calc_t<W>>(c.chi_) * p) != 1)
    throw Error(ErrorCode::invalid_modulus, "Bezout identity check failed");
  c.r2_ = static_cast<U>(static_cast<calc_t<W>>(two_m_mod_p) * two_m_mod_p % p);
  return c;
}

/// (a * rho) mod p for 0 <= a < 2^m p.
template <Word U>
constexpr U mont_reduce(Wide<U> a, const MontgomeryContext<U>& ctx) {
  using W = Wide<U>;
  using CU = calc_t<U>;
  using CW = calc_t<W>;
  LANEMOD_EXPECT(a < static_cast<W>(static_cast<CW>(ctx.p()) << ctx.m()));
  const U b = static_cast<U>(static_cast<CU>(static_cast<U>(a)) * ctx.chi() & ctx.mu());
  const W c = static_cast<W>(a + static_cast<W>(static_cast<CW>(b) * ctx.p()));
  const U d = static_cast<U>(c >> ctx.m());
  // Only reachable when m = n: the sum above wrapped around 2^(2n).
  if (ctx.m() == word_bits<U> && c < a) return static_cast<U>(d - ctx.p());
  return d >= ctx.p() ? static_cast<U>(d - ctx.p()) : d;
}

template <Word U>
constexpr U mont_mul(U x, U y, const MontgomeryContext<U>& ctx) {
  LANEMOD_EXPECT(x < ctx.p() && y < ctx.p());
  return mont_reduce<U>(static_cast<Wide<U>>(static_cast<calc_t<Wide<U>>>(x) * y), ctx);
}

/// x * 2^m mod p
template <Word U>
constexpr U to_mont(U x, const MontgomeryContext<U>& ctx) {
  return mont_mul<U>(x, ctx.r2(), ctx);
}

template <Word U>
constexpr U from_mont(U x, const MontgomeryContext<U>& ctx) {
  return mont_reduce<U>(Wide<U>{x}, ctx);
}

/// Montgomery-encoded multiplicand with phi = (chi * y) mod 2^m cached, which
/// saves the first product of the reduction.
template <Word U>
struct MontgomeryFixed {
  U y{};
  U phi{};
};

template <Word U>
constexpr MontgomeryFixed<U> make_montgomery_fixed(U y_mont, const MontgomeryContext<U>& ctx) {
  if (y_mont >= ctx.p()) throw Error(ErrorCode::range_error, "fixed multiplicand must be a residue");
  return {y_mont, static_cast<U>(static_cast<calc_t<U>>(ctx.chi()) * y_mont & ctx.mu())};
}

template <Word U>
constexpr U mont_mul_fixed(U x, const MontgomeryFixed<U>& fm, const MontgomeryContext<U>& ctx) {
  using W = Wide<U>;
  using CW = calc_t<W>;
  LANEMOD_EXPECT(x < ctx.p());
  const W a = static_cast<W>(static_cast<CW>(x) * fm.y);
  const U b = static_cast<U>(static_cast<calc_t<U>>(x) * fm.phi & ctx.mu());
  const W c = static_cast<W>(a + static_cast<W>(static_cast<CW>(b) * ctx.p()));
  const U d = static_cast<U>(c >> ctx.m());
  if (ctx.m() == word_bits<U> && c < a) return static_cast<U>(d - ctx.p());
  return d >= ctx.p() ? static_cast<U>(d - ctx.p()) : d;
}

}  // namespace lanemod

#endif  // LANEMOD_MONTGOMERY_HPP
