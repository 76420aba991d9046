// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "lanemod/modsimd.hpp"
#include "oracles.hpp"

using namespace lanemod;
using namespace lanemod::simd;

namespace {

template <class T, std::size_t N>
Pack<T, N> pack_of(std::initializer_list<T> v) {
  Pack<T, N> p = Pack<T, N>::broadcast(T{0});
  std::size_t i = 0;
  for (T x : v) p[i++] = x;
  return p;
}

}  // namespace

TEST_CASE_TEMPLATE("width changes keep every lane", U, std::uint8_t, std::uint16_t, std::uint32_t, std::uint64_t) {
  constexpr std::size_t N = 256 / word_bits<U>;
  using W = Wide<U>;
  std::mt19937_64 rng(word_bits<U> + 1);
  for (int iter = 0; iter < 200; ++iter) {
    Pack<U, N> a, b;
    for (std::size_t i = 0; i < N; ++i) {
      a[i] = static_cast<U>(rng());
      b[i] = static_cast<U>(rng());
    }
    // Edge lanes: all-ones words must not leak into their neighbours.
    a[0] = static_cast<U>(~U{0});
    a[N - 1] = static_cast<U>(~U{0});
    const auto lo = widen_lo(a), hi = widen_hi(a), even = take_even(a), odd = take_odd(a);
    const auto pe = mul_even_wide(a, b), po = mul_odd_wide(a, b);
    for (std::size_t i = 0; i < N / 2; ++i) {
      CHECK(lo[i] == W{a[i]});
      CHECK(hi[i] == W{a[N / 2 + i]});
      CHECK(even[i] == W{a[2 * i]});
      CHECK(odd[i] == W{a[2 * i + 1]});
      CHECK(pe[i] == static_cast<W>(W{a[2 * i]} * b[2 * i]));
      CHECK(po[i] == static_cast<W>(W{a[2 * i + 1]} * b[2 * i + 1]));
    }
    CHECK(narrow<U>(lo, hi) == a);
    CHECK(interleave_low<U>(even, odd) == a);
    CHECK(narrow<U>(shift_left(lo, 1), shift_left(hi, 1)) == add(a, a));
  }
}

TEST_CASE("lane sums") {
  using P = Pack<std::uint8_t, 4>;
  CHECK(vadd_mod(P::broadcast(0), P::broadcast(0), std::uint8_t{7}) == P::broadcast(0));
  CHECK(vadd_mod(pack_of<std::uint8_t, 4>({5, 6, 3, 0}), pack_of<std::uint8_t, 4>({3, 2, 4, 6}), std::uint8_t{7}) ==
        pack_of<std::uint8_t, 4>({1, 1, 0, 6}));
  using Q = Pack<std::uint8_t, 2>;
  CHECK(vadd_mod(pack_of<std::uint8_t, 2>({200, 250}), pack_of<std::uint8_t, 2>({100, 250}), std::uint8_t{251}) ==
        pack_of<std::uint8_t, 2>({49, 249}));
  CHECK(vsub_mod(Q::broadcast(1), Q::broadcast(3), std::uint8_t{251}) == Q::broadcast(249));
  CHECK(vneg_mod(Q::broadcast(0), std::uint8_t{251}) == Q::broadcast(0));
}

TEST_CASE("lane products on small examples") {
  const auto ctx = make_barrett<std::uint8_t>(7, BarrettProfile::minus2);
  CHECK(vmul_mod_barrett(pack_of<std::uint8_t, 2>({5, 6}), pack_of<std::uint8_t, 2>({3, 2}), ctx) ==
        pack_of<std::uint8_t, 2>({1, 5}));

  const auto fm = make_fixed<std::uint8_t>(3, 7);
  CHECK(vmul_mod_fixed(pack_of<std::uint8_t, 4>({5, 0, 6, 1}), fm) == pack_of<std::uint8_t, 4>({1, 0, 4, 3}));
  const auto xs = pack_of<std::uint8_t, 4>({5, 0, 6, 1});
  CHECK(vmul_mod_fixed(xs, make_fixed<std::uint8_t>(0, 7)) == Pack<std::uint8_t, 4>::broadcast(0));
  CHECK(vmul_mod_fixed(xs, make_fixed<std::uint8_t>(1, 7)) == xs);

  const auto mctx = make_montgomery<std::uint8_t>(7, 8);
  const auto mm = vmont_mul(pack_of<std::uint8_t, 2>({5, 0}), pack_of<std::uint8_t, 2>({2, 0}), mctx);
  CHECK(mm[0] == 6);
  CHECK(mm[1] == 0);

  const auto fctx = make_float_ctx<double>(7);
  const auto r = vmul_mod_fma(pack_of<double, 2>({3.0, 0.0}), pack_of<double, 2>({4.0, 5.0}), fctx);
  CHECK(r[0] == 5.0);
  CHECK(r[1] == 0.0);
  CHECK(vmul_mod_fma(Pack<double, 4>::broadcast(1.0), Pack<double, 4>::broadcast(1.0), fctx) ==
        Pack<double, 4>::broadcast(1.0));
}

TEST_CASE_TEMPLATE("random lanes agree with the scalar kernels", U, std::uint16_t, std::uint32_t, std::uint64_t) {
  constexpr std::size_t N = 256 / word_bits<U>;
  constexpr unsigned n = word_bits<U>;
  using P = Pack<U, N>;
  std::mt19937_64 rng(n);
  for (int iter = 0; iter < 3000; ++iter) {
    for (auto profile : {BarrettProfile::full, BarrettProfile::minus1, BarrettProfile::minus2}) {
      const unsigned m = profile_bound(profile, n);
      const std::uint64_t top = std::uint64_t{1} << (m - 1);
      const U p = static_cast<U>(top + rng() % top);
      const auto ctx = make_barrett<U>(p, profile);
      P x, y;
      for (std::size_t i = 0; i < N; ++i) {
        x[i] = static_cast<U>(rng() % p);
        y[i] = static_cast<U>(rng() % p);
      }
      const P prod = vmul_mod_barrett(x, y, ctx);
      const P sum = vadd_mod(x, y, p);
      const P diff = vsub_mod(x, y, p);
      const auto fm = make_fixed<U>(y[0], p);
      const P fixed = vmul_mod_fixed(x, fm);
      for (std::size_t i = 0; i < N; ++i) {
        CHECK(prod[i] == oracle::mul(x[i], y[i], p));
        CHECK(sum[i] == oracle::add(x[i], y[i], p));
        CHECK(diff[i] == oracle::sub(x[i], y[i], p));
        CHECK(fixed[i] == oracle::mul(x[i], y[0], p));
      }
      if (p % 2 == 1) {
        const auto mctx = make_montgomery<U>(p, n);
        const P mm = vmont_mul(x, y, mctx);
        for (std::size_t i = 0; i < N; ++i) CHECK(mm[i] == oracle::mont(x[i], y[i], n, p));
      }
    }
  }
}

TEST_CASE("per-lane moduli") {
  const std::vector<std::uint32_t> moduli{998244353u, 985661441u};
  const auto ctx = MultiBarrettContext<std::uint32_t, 8>::make(moduli, BarrettProfile::minus2);
  std::mt19937_64 rng(2);
  for (int iter = 0; iter < 1000; ++iter) {
    Pack<std::uint32_t, 8> x, y;
    for (std::size_t i = 0; i < 8; ++i) {
      x[i] = static_cast<std::uint32_t>(rng() % moduli[i % 2]);
      y[i] = static_cast<std::uint32_t>(rng() % moduli[i % 2]);
    }
    const auto z = vmul_mod_barrett(x, y, ctx);
    for (std::size_t i = 0; i < 8; ++i) CHECK(z[i] == oracle::mul(x[i], y[i], moduli[i % 2]));
  }
  const std::vector<std::uint32_t> mixed{998244353u, 17u};
  CHECK_THROWS_AS((MultiBarrettContext<std::uint32_t, 8>::make(mixed, BarrettProfile::minus2)), Error);
}

TEST_CASE("batches handle ragged tails") {
  const std::uint32_t p = 469762049u;
  const auto ctx = make_barrett<std::uint32_t>(p, BarrettProfile::minus2);
  std::mt19937_64 rng(7);
  for (std::size_t len : {0u, 1u, 7u, 8u, 9u, 63u, 1000u}) {
    std::vector<std::uint32_t> x(len), y(len), z(len);
    for (std::size_t i = 0; i < len; ++i) {
      x[i] = static_cast<std::uint32_t>(rng() % p);
      y[i] = static_cast<std::uint32_t>(rng() % p);
    }
    mul_mod_batch<std::uint32_t>(z, x, y, ctx);
    for (std::size_t i = 0; i < len; ++i) CHECK(z[i] == oracle::mul(x[i], y[i], p));
    add_mod_batch<std::uint32_t, 128>(z, x, y, p);
    for (std::size_t i = 0; i < len; ++i) CHECK(z[i] == oracle::add(x[i], y[i], p));
  }
  std::vector<std::uint32_t> a(3), b(4), c(3);
  CHECK_THROWS_AS(add_mod_batch<std::uint32_t>(c, a, b, p), Error);
}

TEST_CASE("binary64 lanes") {
  const std::uint64_t p = (std::uint64_t{1} << 50) - 27;
  const auto ctx = make_float_ctx<double>(p);
  std::mt19937_64 rng(4);
  std::vector<double> x(101), y(101), z(101);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(rng() % p);
    y[i] = static_cast<double>(rng() % p);
  }
  mul_mod_fma_batch<double>(z, x, y, ctx);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(static_cast<std::uint64_t>(z[i]) ==
          oracle::mul(static_cast<std::uint64_t>(x[i]), static_cast<std::uint64_t>(y[i]), p));
  add_mod_fma_batch<double>(z, x, y, ctx);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(static_cast<std::uint64_t>(z[i]) ==
          oracle::add(static_cast<std::uint64_t>(x[i]), static_cast<std::uint64_t>(y[i]), p));
}
