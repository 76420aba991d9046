// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Sample counts and time
// limits are fixed here; nothing is read from the environment.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "lanemod/bench.hpp"
#include "lanemod/bigmul.hpp"
#include "lanemod/modcore.hpp"
#include "lanemod/modsimd.hpp"
#include "lanemod/ntt.hpp"
#include "lanemod/polymul.hpp"
#include "oracles.hpp"

using namespace lanemod;
using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

namespace {

constexpr double kLimitSweep8 = 300.0;    // criterion 1
constexpr double kLimitIntMul = 600.0;    // criterion 9
constexpr u64 kRandomPerStrategy = 10'000'000;
constexpr u64 kBoundSamples = 1'000'000;
constexpr u64 kMontSamples = 1'000'000;
constexpr u64 kFloatSamples = 10'000'000;
constexpr u64 kLaneBatches = 1'000'000;
constexpr int kPolyInstances = 1000;

/// Counts checks and keeps the first failure.
struct Tally {
  u64 checked = 0, failures = 0;
  std::string first;

  template <class Describe>
  void check(bool ok, Describe&& describe) {
    ++checked;
    if (!ok && failures++ == 0) first = describe();
  }
  bool ok() const { return failures == 0 && checked > 0; }
};

template <class... T>
std::string cat(const T&... parts) {
  std::ostringstream os;
  ((os << parts << ' '), ...);
  std::string s = os.str();
  // Empty parts (no counterexample) leave runs of blanks behind.
  std::string out;
  for (char c : s)
    if (c != ' ' || (!out.empty() && out.back() != ' ')) out += c;
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

/// Random modulus of exactly `bits` bits.
u64 random_modulus(std::mt19937_64& rng, unsigned bits) {
  const u64 top = u64{1} << (bits - 1);
  return top | (rng() & (top - 1));
}

u64 random_prime(std::mt19937_64& rng, unsigned bits) {
  for (;;) {
    const u64 p = random_modulus(rng, bits) | 1;
    if (oracle::is_prime_small(p)) return p;
  }
}

struct Outcome {
  bool pass;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. exhaustive n = 8

Outcome sweep8() {
  Tally t;
  for (unsigned p = 2; p < 256; ++p) {
    const u8 pp = static_cast<u8>(p);
    std::vector<BarrettContext<u8>> ctxs;
    for (auto profile : {BarrettProfile::full, BarrettProfile::minus1, BarrettProfile::minus2})
      if (std::bit_width(p) <= profile_bound(profile, 8)) ctxs.push_back(make_barrett<u8>(pp, profile));
    std::vector<SumVariant> variants{SumVariant::branching};
    if (fits_below_top_bit<u8>(pp)) variants = {SumVariant::branching, SumVariant::min_select, SumVariant::sign_shift};
    std::vector<MontgomeryContext<u8>> monts;
    if (p % 2 == 1 && p > 2)
      for (unsigned m = ceil_log2(p); m <= 8; ++m) monts.push_back(make_montgomery<u8>(pp, m));
    const auto fctx = make_float_ctx<double>(p);

    for (unsigned y = 0; y < p; ++y) {
      const auto fm = make_fixed<u8>(static_cast<u8>(y), pp);
      for (unsigned x = 0; x < p; ++x) {
        const u8 ux = static_cast<u8>(x), uy = static_cast<u8>(y);
        const u64 sum = (x + y) % p, diff = (x + p - y) % p, prod = x * y % p;
        auto where = [&](const char* what) { return cat(what, "p=", p, "x=", x, "y=", y); };
        for (auto v : variants) {
          t.check(add_mod<u8>(ux, uy, pp, v) == sum, [&] { return where("add_mod"); });
          t.check(sub_mod<u8>(ux, uy, pp, v) == diff, [&] { return where("sub_mod"); });
        }
        for (const auto& c : ctxs) t.check(mul_mod<u8>(ux, uy, c) == prod, [&] { return where(to_string(c.profile())); });
        t.check(mul_mod_fixed<u8>(ux, fm) == prod, [&] { return where("fixed"); });
        for (const auto& c : monts)
          t.check(mont_mul<u8>(ux, uy, c) == oracle::mont(x, y, c.m(), p), [&] { return where("mont_mul"); });
        t.check(mul_mod_fma<double>(x, y, fctx) == static_cast<double>(prod), [&] { return where("fma"); });
      }
      t.check(neg_mod<u8>(static_cast<u8>(y), pp) == (p - y) % p, [&] { return cat("neg_mod p=", p, "x=", y); });
    }
    if (std::bit_width(p) <= BarrettHalfContext<u8>::max_modulus_bits) {
      const auto h = make_barrett_half<u8>(pp);
      for (unsigned a = 0; a * p <= (1u << h.t()) && a < 256; ++a)
        t.check(barrett_reduce_half<u8>(static_cast<u8>(a), h) == a % p, [&] { return cat("half p=", p, "a=", a); });
    }
  }
  return {t.ok(), cat(t.checked, "checks,", t.failures, "mismatches", t.first)};
}

// ---------------------------------------------------------------------------
// 2. random 16/32/64-bit sweeps

template <Word U>
void random_width(std::mt19937_64& rng, std::vector<std::pair<std::string, Tally>>& out) {
  constexpr unsigned n = word_bits<U>;
  const auto strategies = {"barrett-full", "barrett-minus1", "barrett-minus2", "fixed", "montgomery", "sum"};
  for (const std::string s : strategies) {
    Tally t;
    const unsigned maxbits = s == "barrett-minus1" ? n - 1 : s == "barrett-minus2" ? n - 2 : n;
    U p{};
    std::optional<BarrettContext<U>> bctx;
    std::optional<MontgomeryContext<U>> mctx;
    for (u64 i = 0; i < kRandomPerStrategy; ++i) {
      if (i % 64 == 0) {
        const unsigned bits = 2 + static_cast<unsigned>(rng() % (maxbits - 1));
        p = static_cast<U>(random_modulus(rng, bits));
        if (s == "montgomery") {
          p |= 1;
          if (p < 3) p = 3;
          mctx = make_montgomery<U>(p, n);
        } else if (s.rfind("barrett", 0) == 0) {
          const auto profile = s == "barrett-full" ? BarrettProfile::full
                               : s == "barrett-minus1" ? BarrettProfile::minus1
                                                       : BarrettProfile::minus2;
          bctx = make_barrett<U>(p, profile);
        }
      }
      // Bias a quarter of the operands towards p - 1.
      const U x = static_cast<U>((i & 3) == 0 ? p - 1 - rng() % std::min<u64>(p, 4) : rng() % p);
      const U y = static_cast<U>(rng() % p);
      auto where = [&] { return cat(s, "n=", n, "p=", u64{p}, "x=", u64{x}, "y=", u64{y}); };
      if (s == "sum") {
        t.check(add_mod<U>(x, y, p) == oracle::add(x, y, p), where);
        t.check(sub_mod<U>(x, y, p) == oracle::sub(x, y, p), where);
      } else if (s == "fixed") {
        t.check(mul_mod_fixed<U>(x, make_fixed<U>(y, p)) == oracle::mul(x, y, p), where);
      } else if (s == "montgomery") {
        t.check(mont_mul<U>(x, y, *mctx) == oracle::mont(x, y, n, p), where);
      } else {
        t.check(mul_mod<U>(x, y, *bctx) == oracle::mul(x, y, p), where);
      }
    }
    out.emplace_back(s + "/" + std::to_string(n), t);
  }
}

Outcome random_sweeps() {
  std::mt19937_64 rng(2);
  std::vector<std::pair<std::string, Tally>> all;
  random_width<u16>(rng, all);
  random_width<u32>(rng, all);
  random_width<u64>(rng, all);
  bool ok = true;
  u64 min_checked = ~u64{0};
  std::string first;
  for (const auto& [name, t] : all) {
    ok = ok && t.ok() && t.checked >= kRandomPerStrategy;
    min_checked = std::min(min_checked, t.checked);
    if (!t.ok() && first.empty()) first = name + ": " + t.first;
  }
  return {ok, cat(all.size(), "width/strategy pairs, min", min_checked, "cases each", first)};
}

// ---------------------------------------------------------------------------
// 3. correction-count bound

template <Word U>
Tally bound_for(std::mt19937_64& rng, BarrettProfile profile) {
  constexpr unsigned n = word_bits<U>;
  using W = Wide<U>;
  Tally t;
  const unsigned m = profile_bound(profile, n);
  std::optional<BarrettContext<U>> ctx;
  for (u64 i = 0; i < kBoundSamples; ++i) {
    if (i % 256 == 0) {
      const unsigned bits = 2 + static_cast<unsigned>(rng() % (m - 1));
      ctx = make_barrett<U>(static_cast<U>(random_modulus(rng, bits)), profile);
    }
    const oracle::u128 lim = static_cast<oracle::u128>(ctx->input_bound());
    const oracle::u128 r = (static_cast<oracle::u128>(rng()) << 64) | rng();
    // Every 8th sample sits just below alpha p, where corrections peak.
    const auto a = static_cast<W>((i & 7) == 0 ? lim - 1 - r % std::min<oracle::u128>(lim, 1024) : r % lim);
    const auto res = barrett_reduce_counted<U>(a, *ctx);
    t.check(res.corrections <= ctx->h() && res.value == static_cast<U>(static_cast<oracle::u128>(a) % ctx->p()),
            [&] { return cat(to_string(profile), "n=", n, "p=", u64{ctx->p()}, "corrections=", res.corrections); });
  }
  return t;
}

Outcome correction_bound() {
  std::mt19937_64 rng(3);
  bool ok = true;
  u64 checked = 0;
  std::string first;
  for (auto profile : {BarrettProfile::full, BarrettProfile::minus1, BarrettProfile::minus2}) {
    for (const Tally& t : {bound_for<u8>(rng, profile), bound_for<u16>(rng, profile), bound_for<u32>(rng, profile),
                           bound_for<u64>(rng, profile)}) {
      ok = ok && t.ok() && t.checked >= kBoundSamples;
      checked += t.checked;
      if (!t.ok() && first.empty()) first = t.first;
    }
  }
  return {ok, cat(checked, "samples over 3 profiles x 4 widths", first)};
}

// ---------------------------------------------------------------------------
// 4. Montgomery

Outcome montgomery() {
  std::mt19937_64 rng(4);
  Tally red, trip;
  for (u64 i = 0; i < kMontSamples; ++i) {
    const unsigned bits = 2 + static_cast<unsigned>(rng() % 63);
    const u64 p = std::max<u64>(3, random_modulus(rng, bits) | 1);
    const unsigned m = static_cast<unsigned>(ceil_log2(p) + rng() % (65 - ceil_log2(p)));
    const auto ctx = make_montgomery<u64>(p, m);
    const oracle::u128 a = ((static_cast<oracle::u128>(rng()) << 64) | rng()) % (static_cast<oracle::u128>(p) << m);
    const u64 got = mont_reduce<u64>(a, ctx);
    // a * 2^-m mod p: reduce a, then halve m times.
    const u64 want = oracle::mont(static_cast<u64>(a % p), 1, m, p);
    red.check(got < p && got == want, [&] { return cat("p=", p, "m=", m); });
  }
  for (unsigned p = 3; p < 256; p += 2)
    for (unsigned m = ceil_log2(p); m <= 8; ++m) {
      const auto ctx = make_montgomery<u8>(static_cast<u8>(p), m);
      for (unsigned x = 0; x < p; ++x)
        trip.check(from_mont<u8>(to_mont<u8>(static_cast<u8>(x), ctx), ctx) == x,
                   [&] { return cat("roundtrip p=", p, "m=", m, "x=", x); });
    }
  return {red.ok() && trip.ok() && red.checked >= kMontSamples,
          cat(red.checked, "reductions,", trip.checked, "roundtrips,", red.failures + trip.failures, "mismatches",
              red.first, trip.first)};
}

// ---------------------------------------------------------------------------
// 5. floating point

template <std::floating_point F, FmaMode Mode>
Tally float_products(std::mt19937_64& rng, unsigned max_bits, u64 samples) {
  Tally t;
  std::optional<FloatContext<F>> ctx;
  u64 p = 0;
  for (u64 i = 0; i < samples; ++i) {
    if (i % 64 == 0) {
      p = random_modulus(rng, 2 + static_cast<unsigned>(rng() % (max_bits - 1)));
      ctx = make_float_ctx<F>(p);
    }
    const u64 x = (i & 3) == 0 ? p - 1 : rng() % p, y = rng() % p;
    const F z = mul_mod_fma<F, Mode>(static_cast<F>(x), static_cast<F>(y), *ctx);
    t.check(z == static_cast<F>(oracle::mul(x, y, p)), [&] { return cat("p=", p, "x=", x, "y=", y); });
  }
  return t;
}

template <std::floating_point F>
Tally float_half(std::mt19937_64& rng, u64 samples) {
  Tally t;
  constexpr unsigned any_bits = FloatContext<F>::half_bits, up_bits = FloatContext<F>::half_upward_bits;
  for (u64 i = 0; i < samples; ++i) {
    const u64 p = random_modulus(rng, 2 + static_cast<unsigned>(rng() % (any_bits - 1)));
    const auto ctx = make_float_ctx<F>(p);
    const u64 a = rng() % (p << any_bits);
    t.check(float_reduce_half<F>(static_cast<F>(a), ctx) == static_cast<F>(a % p),
            [&] { return cat("any-rounding p=", p, "a=", a); });
    // Branch-elided form: only prime moduli and products of residues.
    const u64 q = random_prime(rng, 2 + static_cast<unsigned>(rng() % (up_bits - 1)));
    const auto qctx = make_float_ctx<F>(q);
    const u64 b = (rng() % q) * (rng() % q);
    t.check(float_reduce_half<F>(static_cast<F>(b), qctx, HalfReduction::upward_no_high_branch) ==
                static_cast<F>(b % q),
            [&] { return cat("no-high-branch p=", q, "a=", b); });
  }
  return t;
}

Outcome floating_point() {
  std::mt19937_64 rng(5);
  const Tally d = float_products<double, default_fma_mode>(rng, 50, kFloatSamples);
  const Tally dk = float_products<double, FmaMode::dekker>(rng, 50, kFloatSamples / 10);
  const Tally f = float_products<float, default_fma_mode>(rng, 21, kFloatSamples);
  const Tally hd = float_half<double>(rng, 500'000);
  const Tally hf = float_half<float>(rng, 500'000);
  const bool ok = d.ok() && dk.ok() && f.ok() && hd.ok() && hf.ok() && d.checked >= kFloatSamples &&
                  f.checked >= kFloatSamples;
  return {ok, cat("binary64", d.checked, "(+", dk.checked, "Dekker), binary32", f.checked, ", half reductions",
                  hd.checked + hf.checked, ", mismatches", d.failures + dk.failures + f.failures + hd.failures + hf.failures,
                  d.first, dk.first, f.first, hd.first, hf.first)};
}

// ---------------------------------------------------------------------------
// 6. lane homomorphism

Outcome lanes() {
  using namespace simd;
  Tally t;
  constexpr std::size_t N8 = 32;
  using P8 = Pack<u8, N8>;
  // Exhaustive: every p, every (x, y), packed N8 pairs at a time.
  for (unsigned p = 2; p < 256; ++p) {
    const u8 pp = static_cast<u8>(p);
    std::vector<BarrettContext<u8>> ctxs;
    for (auto profile : {BarrettProfile::full, BarrettProfile::minus1, BarrettProfile::minus2})
      if (std::bit_width(p) <= profile_bound(profile, 8)) ctxs.push_back(make_barrett<u8>(pp, profile));
    const bool odd = p % 2 == 1 && p > 2;
    const auto mctx = odd ? make_montgomery<u8>(pp, 8) : make_montgomery<u8>(3, 8);
    for (unsigned y = 0; y < p; ++y) {
      const auto fm = make_fixed<u8>(static_cast<u8>(y), pp);
      for (unsigned x0 = 0; x0 < p; x0 += N8) {
        P8 x = P8::broadcast(0), yy = P8::broadcast(static_cast<u8>(y));
        for (std::size_t i = 0; i < N8; ++i) x[i] = static_cast<u8>(std::min<unsigned>(x0 + i, p - 1));
        const P8 s = vadd_mod(x, yy, pp), d = vsub_mod(x, yy, pp), ng = vneg_mod(x, pp), f = vmul_mod_fixed(x, fm);
        for (std::size_t i = 0; i < N8; ++i) {
          auto where = [&](const char* k) { return cat(k, "p=", p, "x=", unsigned(x[i]), "y=", y); };
          t.check(s[i] == add_mod<u8>(x[i], static_cast<u8>(y), pp), [&] { return where("vadd"); });
          t.check(d[i] == sub_mod<u8>(x[i], static_cast<u8>(y), pp), [&] { return where("vsub"); });
          t.check(ng[i] == neg_mod<u8>(x[i], pp), [&] { return where("vneg"); });
          t.check(f[i] == mul_mod_fixed<u8>(x[i], fm), [&] { return where("vfixed"); });
        }
        for (const auto& c : ctxs) {
          const P8 z = vmul_mod_barrett(x, yy, c);
          for (std::size_t i = 0; i < N8; ++i)
            t.check(z[i] == mul_mod<u8>(x[i], static_cast<u8>(y), c),
                    [&] { return cat("vmul", to_string(c.profile()), "p=", p, "x=", unsigned(x[i]), "y=", y); });
        }
        if (odd) {
          const P8 z = vmont_mul(x, yy, mctx);
          for (std::size_t i = 0; i < N8; ++i)
            t.check(z[i] == mont_mul<u8>(x[i], static_cast<u8>(y), mctx),
                    [&] { return cat("vmont p=", p, "x=", unsigned(x[i]), "y=", y); });
        }
      }
    }
  }
  const u64 exhaustive = t.checked;

  std::mt19937_64 rng(6);
  auto random_lanes = [&]<Word U>() {
    constexpr unsigned n = word_bits<U>;
    constexpr std::size_t N = 256 / n;
    using P = Pack<U, N>;
    for (u64 b = 0; b < kLaneBatches; ++b) {
      const auto profile = static_cast<BarrettProfile>(b % 3);
      const unsigned m = profile_bound(profile, n);
      const U p = static_cast<U>(std::max<u64>(3, random_modulus(rng, 2 + static_cast<unsigned>(rng() % (m - 1))) | 1));
      P x, y;
      for (std::size_t i = 0; i < N; ++i) {
        x[i] = static_cast<U>(rng() % p);
        y[i] = static_cast<U>(rng() % p);
      }
      auto where = [&](const char* k, std::size_t i) {
        return cat(k, "n=", n, "p=", u64{p}, "x=", u64{x[i]}, "y=", u64{y[i]});
      };
      const auto ctx = make_barrett<U>(p, profile);
      const P z = vmul_mod_barrett(x, y, ctx), s = vadd_mod(x, y, p), d = vsub_mod(x, y, p);
      const auto fm = make_fixed<U>(y[0], p);
      const P f = vmul_mod_fixed(x, fm);
      for (std::size_t i = 0; i < N; ++i) {
        t.check(z[i] == mul_mod<U>(x[i], y[i], ctx), [&] { return where("vmul", i); });
        t.check(s[i] == add_mod<U>(x[i], y[i], p), [&] { return where("vadd", i); });
        t.check(d[i] == sub_mod<U>(x[i], y[i], p), [&] { return where("vsub", i); });
        t.check(f[i] == mul_mod_fixed<U>(x[i], fm), [&] { return where("vfixed", i); });
      }
      if (b % 4 == 0) {
        const auto mctx = make_montgomery<U>(p, n);
        const P mm = vmont_mul(x, y, mctx);
        for (std::size_t i = 0; i < N; ++i) t.check(mm[i] == mont_mul<U>(x[i], y[i], mctx), [&] { return where("vmont", i); });
      }
    }
  };
  random_lanes.operator()<u16>();
  random_lanes.operator()<u32>();
  random_lanes.operator()<u64>();

  using PD = Pack<double, 4>;
  for (u64 b = 0; b < kLaneBatches; ++b) {
    const u64 p = random_modulus(rng, 2 + static_cast<unsigned>(rng() % 49));
    const auto ctx = make_float_ctx<double>(p);
    PD x, y;
    for (std::size_t i = 0; i < 4; ++i) {
      x[i] = static_cast<double>(rng() % p);
      y[i] = static_cast<double>(rng() % p);
    }
    const PD z = vmul_mod_fma(x, y, ctx), s = vadd_mod(x, y, ctx);
    for (std::size_t i = 0; i < 4; ++i) {
      t.check(z[i] == mul_mod_fma<double>(x[i], y[i], ctx), [&] { return cat("vfma p=", p); });
      t.check(s[i] == static_cast<double>(oracle::add(static_cast<u64>(x[i]), static_cast<u64>(y[i]), p)),
              [&] { return cat("vadd binary64 p=", p); });
    }
  }
  return {t.ok(), cat(exhaustive, "exhaustive 8-bit lane checks,", t.checked - exhaustive, "random lane checks,",
                      t.failures, "mismatches", t.first)};
}

// ---------------------------------------------------------------------------
// 7. transforms

Outcome transforms() {
  std::mt19937_64 rng(7);
  Tally brute, trip, blocked;
  for (u32 p : {17u, 97u, 469762049u}) {
    // n <= 64 bounded by the largest power of two dividing p - 1.
    const unsigned kmax = std::min(6u, static_cast<unsigned>(std::countr_zero(p - 1)));
    for (unsigned k = 0; k <= kmax; ++k) {
      const auto plan = make_plan<u32>(p, k);
      if (k >= 1 && oracle::pow(plan.omega(), u64{1} << (k - 1), p) != p - 1) brute.check(false, [] { return "bad root"; });
      for (std::size_t l = 1; l <= plan.size(); ++l)
        for (int rep = 0; rep < 4; ++rep) {
          std::vector<u32> a(l);
          for (auto& v : a) v = static_cast<u32>(rng() % p);
          brute.check(tft<u32>(a, l, plan).values == oracle::eval_bitrev<u32>(a, plan.omega(), k, l, p),
                      [&] { return cat("p=", p, "n=", plan.size(), "l=", l); });
        }
    }
  }
  const u32 P = 469762049u;
  for (unsigned k : {10u, 16u}) {
    const auto plan = make_plan<u32>(P, k);
    for (std::size_t l = 0; l <= 128; ++l)
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<u32> a(l);
        for (auto& v : a) v = static_cast<u32>(rng() % P);
        trip.check(itft<u32>(tft<u32>(a, l, plan), l, plan) == a, [&] { return cat("n=", plan.size(), "l=", l); });
      }
    // Full-length and odd lengths as well.
    for (std::size_t l : {plan.size(), plan.size() - 1, plan.size() / 2 + 1}) {
      std::vector<u32> a(l);
      for (auto& v : a) v = static_cast<u32>(rng() % P);
      trip.check(itft<u32>(tft<u32>(a, l, plan), l, plan) == a, [&] { return cat("n=", plan.size(), "l=", l); });
    }
  }
  for (unsigned k = 2; k <= 16; k += 2) {
    const std::size_t n = std::size_t{1} << k;
    for (std::size_t n1 : {std::size_t{2}, std::size_t{4}, std::size_t{8}, std::size_t{16}, std::size_t{1} << (k / 2)}) {
      if (n1 > n) continue;
      const auto plan = make_plan<u32>(P, k, n1);
      for (std::size_t l : {n, n - n / 4 + 1, n1 + 1, std::max(n1, n / 3)}) {
        if (l < n1 || l > n) continue;
        std::vector<u32> a(l);
        for (auto& v : a) v = static_cast<u32>(rng() % P);
        const auto got = blocked_tft<u32>(a, l, plan).values;
        blocked.check(got == tft<u32>(a, got.size(), plan).values,
                      [&] { return cat("n=", n, "n1=", n1, "l=", l); });
      }
    }
  }
  return {brute.ok() && trip.ok() && blocked.ok(),
          cat(brute.checked, "DFT comparisons,", trip.checked, "roundtrips,", blocked.checked, "blocked comparisons,",
              brute.failures + trip.failures + blocked.failures, "mismatches", brute.first, trip.first, blocked.first)};
}

// ---------------------------------------------------------------------------
// 8. polynomial products

Outcome polynomials() {
  std::mt19937_64 rng(8);
  Tally t;
  const u32 P = 469762049u;
  const auto plan = make_plan<u32>(P, 10);
  for (int i = 0; i < kPolyInstances; ++i) {
    std::vector<u32> a(1 + rng() % 513), b(1 + rng() % 513);
    for (auto& v : a) v = static_cast<u32>(rng() % P);
    for (auto& v : b) v = static_cast<u32>(rng() % P);
    const auto want = oracle::poly_mul(a, b, P);
    const ModPoly<u32> pa(P, a), pb(P, b);
    t.check(poly_mul_tft(pa, pb, plan).coeffs == want, [&] { return cat("tft degrees", a.size() - 1, b.size() - 1); });
    t.check(poly_mul_kronecker(pa, pb).coeffs == want,
            [&] { return cat("kronecker degrees", a.size() - 1, b.size() - 1); });
  }
  const u64 random_checks = t.checked;

  // Exhaustive over p = 7: every pair of polynomials of length 1..4.
  std::vector<std::vector<u32>> polys;
  for (std::size_t len = 1; len <= 4; ++len) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < len; ++i) count *= 7;
    for (std::size_t code = 0; code < count; ++code) {
      std::vector<u32> c(len);
      for (std::size_t i = 0, v = code; i < len; ++i, v /= 7) c[i] = static_cast<u32>(v % 7);
      polys.push_back(std::move(c));
    }
  }
  for (const auto& a : polys)
    for (const auto& b : polys) {
      const auto want = oracle::poly_mul(a, b, 7);
      const ModPoly<u32> pa(7, a), pb(7, b);
      t.check(poly_mul_kronecker(pa, pb).coeffs == want && poly_mul_naive(pa, pb).coeffs == want,
              [&] { return cat("p=7 lengths", a.size(), b.size()); });
    }
  return {t.ok(), cat(random_checks, "random checks (degree <= 512),", t.checked - random_checks,
                      "exhaustive p=7 pairs,", t.failures, "mismatches", t.first)};
}

// ---------------------------------------------------------------------------
// 9. integer products

BigNat random_bits(std::mt19937_64& rng, std::size_t bits) {
  std::vector<u64> limbs((bits + 63) / 64);
  for (auto& l : limbs) l = rng();
  if (bits % 64 != 0) limbs.back() &= (u64{1} << (bits % 64)) - 1;
  limbs.back() |= u64{1} << ((bits - 1) % 64);
  return BigNat::from_limbs(std::move(limbs));
}

BigNat oracle_mul(const BigNat& a, const BigNat& b) {
  return BigNat::from_limbs(
      oracle::nat_mul(oracle::Nat::from_u64_limbs(a.limbs()), oracle::Nat::from_u64_limbs(b.limbs())).to_u64_limbs());
}

Outcome integers() {
  std::mt19937_64 rng(9);
  Tally t;
  for (unsigned e = 8; e <= 15; ++e) {
    const std::size_t bits = std::size_t{32} << e;
    for (int rep = 0; rep < 2; ++rep) {
      const BigNat a = random_bits(rng, bits), b = random_bits(rng, bits);
      t.check(int_mul(a, b) == oracle_mul(a, b), [&] { return cat("bits=", bits); });
    }
  }
  return {t.ok(), cat(t.checked, "products at 32*2^8 .. 32*2^15 bits,", t.failures, "mismatches", t.first)};
}

// ---------------------------------------------------------------------------
// 10. matrices

Outcome matrices() {
  std::mt19937_64 rng(10);
  Tally poly, ints;
  const u32 P = 469762049u;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t d : {1u, 2u, 5u, 16u, 32u}) {
      const auto plan = make_plan<u32>(P, 6);
      PolyMatrix<u32> A(n, n, P), B(n, n, P);
      for (auto& e : A.entries) {
        e.resize(d);
        for (auto& v : e) v = static_cast<u32>(rng() % P);
      }
      for (auto& e : B.entries) {
        e.resize(d);
        for (auto& v : e) v = static_cast<u32>(rng() % P);
      }
      const auto C = poly_mat_mul(A, B, plan);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          std::vector<u32> want(2 * d - 1, 0);
          for (std::size_t k = 0; k < n; ++k) {
            const auto prod = oracle::poly_mul(A.at(i, k), B.at(k, j), P);
            for (std::size_t s = 0; s < prod.size(); ++s) want[s] = static_cast<u32>(oracle::add(want[s], prod[s], P));
          }
          poly.check(C.at(i, j) == want, [&] { return cat("poly n=", n, "d=", d); });
        }
    }
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t maxbits : {64u, 1000u, 4096u}) {
      BigMatrix A(n, n), B(n, n);
      for (auto& e : A.entries) e = random_bits(rng, 1 + rng() % maxbits);
      for (auto& e : B.entries) e = random_bits(rng, 1 + rng() % maxbits);
      A.entries[0] = random_bits(rng, maxbits);
      const auto C = int_mat_mul(A, B);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          oracle::Nat acc;
          for (std::size_t k = 0; k < n; ++k)
            acc = oracle::nat_add(acc, oracle::nat_mul(oracle::Nat::from_u64_limbs(A.at(i, k).limbs()),
                                                       oracle::Nat::from_u64_limbs(B.at(k, j).limbs())));
          ints.check(C.at(i, j) == BigNat::from_limbs(acc.to_u64_limbs()),
                     [&] { return cat("int n=", n, "bits<=", maxbits); });
        }
    }
  return {poly.ok() && ints.ok(), cat(poly.checked, "polynomial entries,", ints.checked, "integer entries,",
                                      poly.failures + ints.failures, "mismatches", poly.first, ints.first)};
}

// ---------------------------------------------------------------------------
// 11. speedup grid (informational)

Outcome speedups() {
  std::size_t rows = 0;
  bool positive = true;
  for (const auto& name : bench::table_names()) {
    const auto table = bench::run_table(name, 8);
    rows += table.size();
    for (const auto& r : table) positive = positive && r.ns_per_elem_median > 0;
    std::fputs(bench::format_table(table, name).c_str(), stdout);
  }
  return {rows > 0 && positive, cat(rows, "rows over", bench::table_names().size(), "grids (timings informational)")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit;  // seconds, 0 = none
  };
  const Criterion criteria[] = {
      {1, "exhaustive 8-bit sweep", sweep8, kLimitSweep8},
      {2, "randomized 16/32/64-bit sweeps", random_sweeps, 0},
      {3, "Barrett correction count <= h", correction_bound, 0},
      {4, "Montgomery reduction and roundtrip", montgomery, 0},
      {5, "floating-point products", floating_point, 0},
      {6, "lane homomorphism", lanes, 0},
      {7, "TFT oracle, roundtrip, blocked", transforms, 0},
      {8, "polynomial products", polynomials, 0},
      {9, "integer products", integers, kLimitIntMul},
      {10, "matrix products", matrices, 0},
      {11, "speedup grid (informational)", speedups, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    std::string timing = cat("[" + std::to_string(secs).substr(0, 6), "s");
    if (c.limit > 0) {
      timing += cat(", limit", c.limit, "s");
      pass = pass && secs < c.limit;
    }
    timing += "]";
    std::printf("%s criterion %2d: %s - %s %s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    failed += pass ? 0 : 1;
  }
  std::printf("%s: %d of 11 criteria failed\n", failed == 0 ? "ACCEPTED" : "REJECTED", failed);
  return failed == 0 ? 0 : 1;
}
