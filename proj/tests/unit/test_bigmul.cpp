// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "lanemod/bigmul.hpp"
#include "oracles.hpp"

using namespace lanemod;

namespace {

BigNat random_bits(std::mt19937_64& rng, std::size_t bits) {
  std::vector<std::uint64_t> limbs((bits + 63) / 64);
  for (auto& l : limbs) l = rng();
  if (bits % 64 != 0) limbs.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
  limbs.back() |= std::uint64_t{1} << ((bits - 1) % 64);
  return BigNat::from_limbs(std::move(limbs));
}

BigNat oracle_mul(const BigNat& a, const BigNat& b) {
  const auto c = oracle::nat_mul(oracle::Nat::from_u64_limbs(a.limbs()), oracle::Nat::from_u64_limbs(b.limbs()));
  return BigNat::from_limbs(c.to_u64_limbs());
}

}  // namespace

TEST_CASE("hex conversion") {
  CHECK(BigNat().to_hex() == "0");
  CHECK(BigNat::from_hex("00ff").to_hex() == "ff");
  CHECK(BigNat::from_hex("1234567890ABCDEF1234").to_hex() == "1234567890abcdef1234");
  CHECK_THROWS_AS(BigNat::from_hex("12g4"), Error);
}

TEST_CASE("three-prime plan") {
  const auto plan = make_three_prime_plan(1);
  CHECK(plan.d == 1);
  CHECK(plan.primes == default_ntt_primes);
  CHECK(plan.primes[0] == 998244353u);
  CHECK(plan.primes[1] == 985661441u);
  CHECK(plan.primes[2] == 943718401u);

  // floor(log2(p1 p2 p3)) by exact comparison.
  const oracle::u128 P = static_cast<oracle::u128>(998244353u) * 985661441u * 943718401u;
  unsigned lg = 0;
  while ((P >> (lg + 1)) != 0) ++lg;
  CHECK(three_prime_log2(plan.primes) == lg);
  for (std::size_t N : {std::size_t{1}, std::size_t{1000}, std::size_t{1} << 20}) {
    const auto pl = make_three_prime_plan(N, 4);
    CHECK(pl.H <= lg);
    CHECK(pl.h % 8 == 0);
  }
  CHECK_THROWS_AS(make_three_prime_plan(0), Error);
}

TEST_CASE("CRT reconstruction") {
  const auto plan = make_three_prime_plan(64);
  const std::uint32_t x = 123456789u;
  CHECK(crt3(x, x, x, plan) == x);
  CHECK(crt3(0, 0, 0, plan) == 0);
  std::mt19937_64 rng(61);
  const oracle::u128 P = static_cast<oracle::u128>(998244353u) * 985661441u * 943718401u;
  for (int i = 0; i < 10000; ++i) {
    const oracle::u128 v = ((static_cast<oracle::u128>(rng()) << 64) | rng()) % P;
    CHECK(crt3(static_cast<std::uint32_t>(v % 998244353u), static_cast<std::uint32_t>(v % 985661441u),
               static_cast<std::uint32_t>(v % 943718401u), plan) == v);
  }
}

TEST_CASE("integer products") {
  const BigNat a = BigNat::from_hex("ffffffff");
  CHECK(int_mul(a, a).to_hex() == "fffffffe00000001");
  CHECK(int_mul(a, BigNat()).is_zero());
  CHECK(int_mul(a, BigNat(1)) == a);
  CHECK(int_mul_fft(a, a).to_hex() == "fffffffe00000001");

  std::mt19937_64 rng(67);
  for (std::size_t bits : {64u, 1000u, 4096u, 100000u}) {
    const BigNat x = random_bits(rng, bits), y = random_bits(rng, bits + 37);
    const BigNat want = oracle_mul(x, y);
    CHECK(int_mul_fft(x, y) == want);
    CHECK(int_mul(x, y) == want);
    CHECK(int_mul(y, x) == want);
  }
  // Unbalanced operands and values with long runs of ones.
  const BigNat ones = BigNat::from_limbs(std::vector<std::uint64_t>(300, ~std::uint64_t{0}));
  CHECK(int_mul_fft(ones, ones) == oracle_mul(ones, ones));
  const BigNat small = random_bits(rng, 70);
  CHECK(int_mul_fft(ones, small) == oracle_mul(ones, small));
}

TEST_CASE("all products of up to three limbs with boundary limbs") {
  const std::vector<std::uint64_t> vals{0, 1, 2, 0xffffffffull, 0x8000000000000000ull, ~std::uint64_t{0}};
  std::vector<BigNat> nums;
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<std::size_t> idx(len, 0);
    for (;;) {
      std::vector<std::uint64_t> limbs(len);
      for (std::size_t i = 0; i < len; ++i) limbs[i] = vals[idx[i]];
      nums.push_back(BigNat::from_limbs(limbs));
      std::size_t i = 0;
      while (i < len && ++idx[i] == vals.size()) idx[i++] = 0;
      if (i == len) break;
    }
  }
  bool ok = true;
  for (const auto& x : nums)
    for (const auto& y : nums) ok = ok && int_mul_fft(x, y) == oracle_mul(x, y) && int_mul(x, y) == oracle_mul(x, y);
  CHECK(ok);
}

TEST_CASE("integer matrices") {
  std::mt19937_64 rng(71);
  BigMatrix A(4, 4), B(4, 4);
  for (auto& e : A.entries) e = random_bits(rng, 4096);
  for (auto& e : B.entries) e = random_bits(rng, 1 + rng() % 4096);
  const auto C = int_mat_mul(A, B);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      oracle::Nat acc;
      for (std::size_t k = 0; k < 4; ++k)
        acc = oracle::nat_add(acc, oracle::nat_mul(oracle::Nat::from_u64_limbs(A.at(i, k).limbs()),
                                                   oracle::Nat::from_u64_limbs(B.at(k, j).limbs())));
      CHECK(C.at(i, j) == BigNat::from_limbs(acc.to_u64_limbs()));
    }

  BigMatrix I(4, 4);
  for (std::size_t i = 0; i < 4; ++i) I.at(i, i) = BigNat(1);
  CHECK(int_mat_mul(I, B) == B);

  BigMatrix x(1, 1), y(1, 1);
  x.at(0, 0) = random_bits(rng, 3000);
  y.at(0, 0) = random_bits(rng, 2000);
  CHECK(int_mat_mul(x, y).at(0, 0) == int_mul(x.at(0, 0), y.at(0, 0)));
  CHECK_THROWS_AS(int_mat_mul(BigMatrix(2, 3), BigMatrix(2, 3)), Error);
}
