// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "lanemod/bench.hpp"
#include "lanemod/bigmul.hpp"
#include "lanemod/modcore.hpp"
#include "lanemod/modsimd.hpp"
#include "lanemod/ntt.hpp"
#include "lanemod/polymul.hpp"

namespace lanemod::bench {

bool SelftestReport::passed() const noexcept {
  for (const auto& p : properties)
    if (p.failures != 0) return false;
  return true;
}

void print_report(const SelftestReport& report, std::ostream& out) {
  for (const auto& p : report.properties) {
    out << (p.failures == 0 ? "PASS " : "FAIL ") << p.scope << '/' << p.name << "  checked=" << p.checked
        << " failures=" << p.failures << (p.truncated ? " (budget exhausted)" : "") << '\n';
    if (!p.counterexample.empty()) out << "     counterexample: " << p.counterexample << '\n';
  }
  out << (report.passed() ? "selftest: all properties hold" : "selftest: FAILED") << '\n';
}

namespace {

using Clock = std::chrono::steady_clock;

class Budget {
 public:
  explicit Budget(double seconds) : end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                              std::chrono::duration<double>(seconds))) {}
  bool expired() const { return Clock::now() >= end_; }

 private:
  Clock::time_point end_;
};

class Prop {
 public:
  Prop(SelftestReport& report, std::string scope, std::string name) : report_(report) {
    r_.scope = std::move(scope);
    r_.name = std::move(name);
  }
  ~Prop() { report_.properties.push_back(r_); }
  Prop(const Prop&) = delete;
  Prop& operator=(const Prop&) = delete;

  template <class Describe>
  bool check(bool ok, Describe&& describe) {
    ++r_.checked;
    if (!ok) {
      ++r_.failures;
      if (r_.counterexample.empty()) r_.counterexample = describe();
    }
    return ok;
  }
  void truncate() { r_.truncated = true; }
  bool failed() const { return r_.failures != 0; }

 private:
  SelftestReport& report_;
  PropertyResult r_;
};

template <class... T>
std::string describe(const T&... parts) {
  std::ostringstream os;
  ((os << parts << ' '), ...);
  return os.str();
}

std::uint64_t oracle_mul(std::uint64_t x, std::uint64_t y, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<u128>(x) * y % p);
}

// ---------------------------------------------------------------------------

void modcore_suite(SelftestReport& rep, const SelftestOptions& opt, const Budget& budget) {
  using U = std::uint8_t;
  {
    Prop sums(rep, "modcore", "sum/difference n=8 exhaustive");
    for (unsigned p = 2; p < 256; ++p) {
      const bool narrow = fits_below_top_bit<U>(static_cast<U>(p));
      for (unsigned x = 0; x < p; ++x) {
        for (unsigned y = 0; y < p; ++y) {
          const U px = static_cast<U>(p), ux = static_cast<U>(x), uy = static_cast<U>(y);
          const unsigned s = (x + y) % p, d = (x + p - y) % p;
          std::vector<SumVariant> vs{SumVariant::branching};
          if (narrow) vs = {SumVariant::branching, SumVariant::min_select, SumVariant::sign_shift};
          for (auto v : vs) {
            sums.check(add_mod<U>(ux, uy, px, v) == s, [&] { return describe("add_mod p=", p, "x=", x, "y=", y); });
            sums.check(sub_mod<U>(ux, uy, px, v) == d, [&] { return describe("sub_mod p=", p, "x=", x, "y=", y); });
          }
        }
        sums.check(neg_mod<U>(static_cast<U>(x), static_cast<U>(p)) == (p - x) % p,
                   [&] { return describe("neg_mod p=", p, "x=", x); });
      }
    }
  }
  {
    Prop prod(rep, "modcore", "Barrett products n=8 exhaustive");
    Prop bound(rep, "modcore", "Barrett correction count <= h (n=8, all a < alpha p)");
    for (unsigned p = 2; p < 256; ++p) {
      // A mutated pre-inverse can make each reduction loop ~2^16/p times;
      // one counterexample is enough.
      if (opt.inject_fault && prod.failed() && bound.failed()) break;
      for (auto profile : {BarrettProfile::full, BarrettProfile::minus1, BarrettProfile::minus2}) {
        if (std::bit_width(p) > profile_bound(profile, 8)) continue;
        if (opt.inject_fault && prod.failed() && bound.failed()) break;
        auto ctx = make_barrett<U>(static_cast<U>(p), profile);
        if (opt.inject_fault) ctx = ctx.with_preinverse(static_cast<U>(ctx.q() + 1));
        for (unsigned x = 0; x < p && !(opt.inject_fault && prod.failed()); ++x)
          for (unsigned y = 0; y < p; ++y)
            prod.check(mul_mod<U>(static_cast<U>(x), static_cast<U>(y), ctx) == x * y % p, [&] {
              return describe("mul_mod profile=", to_string(profile), "p=", p, "q=", unsigned(ctx.q()), "x=", x,
                              "y=", y, "got", unsigned(mul_mod<U>(static_cast<U>(x), static_cast<U>(y), ctx)),
                              "want", x * y % p);
            });
        const unsigned limit = static_cast<unsigned>(ctx.input_bound());
        for (unsigned a = 0; a < limit && !(opt.inject_fault && bound.failed()); ++a) {
          const auto r = barrett_reduce_counted<U>(static_cast<std::uint16_t>(a), ctx);
          bound.check(r.corrections <= ctx.h() && r.value == a % p,
                      [&] { return describe("p=", p, "profile=", to_string(profile), "a=", a, "corrections=", r.corrections); });
        }
      }
    }
  }
  {
    Prop fixed(rep, "modcore", "fixed multiplicand n=8 exhaustive");
    Prop half(rep, "modcore", "half-size Barrett n=8 exhaustive");
    for (unsigned p = 2; p < 256; ++p) {
      for (unsigned y = 0; y < p; ++y) {
        const auto fm = make_fixed<U>(static_cast<U>(y), static_cast<U>(p));
        for (unsigned x = 0; x < p; ++x)
          fixed.check(mul_mod_fixed<U>(static_cast<U>(x), fm) == x * y % p,
                      [&] { return describe("p=", p, "x=", x, "y=", y); });
      }
      if (std::bit_width(p) <= BarrettHalfContext<U>::max_modulus_bits) {
        const auto ctx = make_barrett_half<U>(static_cast<U>(p));
        for (unsigned a = 0; a < (p << ctx.alpha_log2()); ++a)
          half.check(barrett_reduce_half<U>(static_cast<U>(a), ctx) == a % p,
                     [&] { return describe("p=", p, "a=", a); });
      }
    }
  }
  {
    Prop mont(rep, "modcore", "Montgomery reduce and roundtrip n=8");
    for (unsigned p = 3; p < 256; p += 2) {
      for (unsigned m = ceil_log2(p); m <= 8; ++m) {
        const auto ctx = make_montgomery<U>(static_cast<U>(p), m);
        for (unsigned a = 0; a < (p << m); ++a) {
          const unsigned r = mont_reduce<U>(static_cast<std::uint16_t>(a), ctx);
          mont.check(r < p && r == a * ctx.rho() % p, [&] { return describe("p=", p, "m=", m, "a=", a); });
        }
        for (unsigned x = 0; x < p; ++x)
          mont.check(from_mont<U>(to_mont<U>(static_cast<U>(x), ctx), ctx) == x,
                     [&] { return describe("roundtrip p=", p, "m=", m, "x=", x); });
      }
    }
  }

  std::mt19937_64 rng(opt.seed);
  auto random_sweep = [&]<Word W>(const char* label) {
    Prop prop(rep, "modcore", std::string("randomized Barrett/fixed/Montgomery ") + label);
    constexpr unsigned n = word_bits<W>;
    for (std::uint64_t iter = 0; iter < 200000; ++iter) {
      if ((iter & 1023) == 0 && budget.expired()) {
        prop.truncate();
        break;
      }
      const unsigned bits = 2 + static_cast<unsigned>(rng() % (n - 1));
      const std::uint64_t half = std::uint64_t{1} << (bits - 1);
      const std::uint64_t p = half + rng() % half;
      const std::uint64_t x = rng() % p, y = rng() % p, want = oracle_mul(x, y, p);
      const W wp = static_cast<W>(p), wx = static_cast<W>(x), wy = static_cast<W>(y);
      const auto ctx = make_barrett<W>(wp, best_profile<W>(wp));
      prop.check(mul_mod<W>(wx, wy, ctx) == want, [&] { return describe("barrett p=", p, "x=", x, "y=", y); });
      prop.check(mul_mod_fixed<W>(wx, make_fixed<W>(wy, wp)) == want,
                 [&] { return describe("fixed p=", p, "x=", x, "y=", y); });
      if (p % 2 == 1 && p >= 3) {
        const auto mc = make_montgomery<W>(wp, n);
        const W got = from_mont<W>(mont_mul<W>(to_mont<W>(wx, mc), to_mont<W>(wy, mc), mc), mc);
        prop.check(got == want, [&] { return describe("montgomery p=", p, "x=", x, "y=", y); });
      }
    }
  };
  random_sweep.operator()<std::uint16_t>("n=16");
  random_sweep.operator()<std::uint32_t>("n=32");
  random_sweep.operator()<std::uint64_t>("n=64");

  {
    Prop fl(rep, "modcore", "floating-point products (binary64 <= 50 bits, binary32 <= 21 bits)");
    for (std::uint64_t iter = 0; iter < 200000; ++iter) {
      if ((iter & 1023) == 0 && budget.expired()) {
        fl.truncate();
        break;
      }
      const unsigned bits = 2 + static_cast<unsigned>(rng() % 49);
      const std::uint64_t p = (std::uint64_t{1} << (bits - 1)) + rng() % (std::uint64_t{1} << (bits - 1));
      const auto ctx = make_float_ctx<double>(p);
      const std::uint64_t x = rng() % p, y = rng() % p;
      const double got = mul_mod_fma<double>(static_cast<double>(x), static_cast<double>(y), ctx);
      fl.check(got == static_cast<double>(oracle_mul(x, y, p)), [&] { return describe("double p=", p, "x=", x, "y=", y); });
      const std::uint64_t pf = 2 + rng() % ((std::uint64_t{1} << 21) - 2);
      const auto fctx = make_float_ctx<float>(pf);
      const std::uint64_t a = rng() % pf, b = rng() % pf;
      const float gf = mul_mod_fma<float>(static_cast<float>(a), static_cast<float>(b), fctx);
      fl.check(gf == static_cast<float>(oracle_mul(a, b, pf)), [&] { return describe("float p=", pf, "x=", a, "y=", b); });
    }
  }
}

// ---------------------------------------------------------------------------

template <Word U, std::size_t N>
void lanes_exhaustive(Prop& prop, unsigned p, const SelftestOptions& opt) {
  using P = simd::Pack<U, N>;
  const U up = static_cast<U>(p);
  std::vector<BarrettContext<U>> ctxs;
  for (auto profile : {BarrettProfile::full, BarrettProfile::minus1, BarrettProfile::minus2}) {
    if (std::bit_width(p) > profile_bound(profile, word_bits<U>)) continue;
    auto c = make_barrett<U>(up, profile);
    if (opt.inject_fault) c = c.with_preinverse(static_cast<U>(c.q() + 1));
    ctxs.push_back(c);
  }
  std::vector<U> xs, ys;
  for (unsigned x = 0; x < p; ++x)
    for (unsigned y = 0; y < p; ++y) {
      xs.push_back(static_cast<U>(x));
      ys.push_back(static_cast<U>(y));
    }
  while (xs.size() % N != 0) {
    xs.push_back(0);
    ys.push_back(0);
  }
  for (std::size_t i = 0; i < xs.size(); i += N) {
    const auto x = P::load(xs.data() + i), y = P::load(ys.data() + i);
    const auto s = simd::vadd_mod(x, y, up), d = simd::vsub_mod(x, y, up), ng = simd::vneg_mod(x, up);
    for (std::size_t j = 0; j < N; ++j) {
      const unsigned a = x[j], b = y[j];
      prop.check(s[j] == (a + b) % p && d[j] == (a + p - b) % p && ng[j] == (p - a) % p,
                 [&] { return describe("sum lanes p=", p, "x=", a, "y=", b); });
    }
    for (const auto& ctx : ctxs) {
      const auto m = simd::vmul_mod_barrett(x, y, ctx);
      for (std::size_t j = 0; j < N; ++j) {
        const unsigned a = x[j], b = y[j];
        prop.check(m[j] == a * b % p, [&] {
          return describe("vmul_mod_barrett profile=", to_string(ctx.profile()), "p=", p, "x=", a, "y=", b, "got",
                          unsigned(m[j]));
        });
      }
    }
  }
  for (unsigned yv = 0; yv < p; ++yv) {
    const auto fm = make_fixed<U>(static_cast<U>(yv), up);
    for (std::size_t i = 0; i < p; i += N) {
      P x;
      for (std::size_t j = 0; j < N; ++j) x[j] = static_cast<U>((i + j) % p);
      const auto r = simd::vmul_mod_fixed(x, fm);
      for (std::size_t j = 0; j < N; ++j)
        prop.check(r[j] == unsigned(x[j]) * yv % p, [&] { return describe("vmul_mod_fixed p=", p, "y=", yv); });
    }
  }
  if (p % 2 == 1 && p >= 3) {
    const auto mc = make_montgomery<U>(up, word_bits<U>);
    for (std::size_t i = 0; i < xs.size(); i += N) {
      const auto x = P::load(xs.data() + i), y = P::load(ys.data() + i);
      const auto r = simd::vmont_mul(x, y, mc);
      for (std::size_t j = 0; j < N; ++j)
        prop.check(r[j] == mont_mul<U>(x[j], y[j], mc), [&] { return describe("vmont_mul p=", p); });
    }
  }
}

template <Word U>
void lanes_random(Prop& prop, std::mt19937_64& rng, const Budget& budget) {
  constexpr std::size_t N = simd::default_register_bits / word_bits<U>;
  constexpr unsigned n = word_bits<U>;
  using P = simd::Pack<U, N>;
  for (int iter = 0; iter < 20000; ++iter) {
    if ((iter & 255) == 0 && budget.expired()) {
      prop.truncate();
      return;
    }
    const unsigned bits = 2 + static_cast<unsigned>(rng() % (n - 1));
    const std::uint64_t half = std::uint64_t{1} << (bits - 1);
    const U p = static_cast<U>(half + rng() % half);
    P x, y;
    for (std::size_t j = 0; j < N; ++j) {
      x[j] = static_cast<U>(rng() % p);
      y[j] = static_cast<U>(rng() % p);
    }
    const auto ctx = make_barrett<U>(p, best_profile<U>(p));
    const auto fm = make_fixed<U>(y[0], p);
    const auto s = simd::vadd_mod(x, y, ctx), d = simd::vsub_mod(x, y, ctx), m = simd::vmul_mod_barrett(x, y, ctx);
    const auto f = simd::vmul_mod_fixed(x, fm);
    for (std::size_t j = 0; j < N; ++j) {
      prop.check(s[j] == add_mod<U>(x[j], y[j], ctx) && d[j] == sub_mod<U>(x[j], y[j], ctx) &&
                     m[j] == mul_mod<U>(x[j], y[j], ctx) && f[j] == mul_mod_fixed<U>(x[j], fm),
                 [&] { return describe("n=", n, "p=", std::uint64_t(p), "x=", std::uint64_t(x[j]), "y=", std::uint64_t(y[j])); });
    }
    if (p % 2 == 1 && p >= 3) {
      const auto mc = make_montgomery<U>(p, n);
      const auto r = simd::vmont_mul(x, y, mc);
      for (std::size_t j = 0; j < N; ++j)
        prop.check(r[j] == mont_mul<U>(x[j], y[j], mc), [&] { return describe("vmont_mul n=", n, "p=", std::uint64_t(p)); });
    }
  }
}

void modsimd_suite(SelftestReport& rep, const SelftestOptions& opt, const Budget& budget) {
  {
    Prop prop(rep, "modsimd", "lane homomorphism, 8-bit lanes, all p, all pairs");
    for (unsigned p = 2; p < 256; ++p) {
      if ((p & 15) == 0 && budget.expired()) {
        prop.truncate();
        break;
      }
      lanes_exhaustive<std::uint8_t, 32>(prop, p, opt);
    }
  }
  std::mt19937_64 rng(opt.seed + 1);
  Prop prop(rep, "modsimd", "lane homomorphism, 16/32/64-bit lanes, random batches");
  lanes_random<std::uint16_t>(prop, rng, budget);
  lanes_random<std::uint32_t>(prop, rng, budget);
  lanes_random<std::uint64_t>(prop, rng, budget);
  Prop fl(rep, "modsimd", "binary64 lanes vs scalar");
  for (int iter = 0; iter < 20000; ++iter) {
    const std::uint64_t p = (std::uint64_t{1} << 49) + rng() % (std::uint64_t{1} << 49);
    const auto ctx = make_float_ctx<double>(p);
    simd::Pack<double, 4> x, y;
    for (int j = 0; j < 4; ++j) {
      x[j] = static_cast<double>(rng() % p);
      y[j] = static_cast<double>(rng() % p);
    }
    const auto r = simd::vmul_mod_fma(x, y, ctx);
    for (int j = 0; j < 4; ++j)
      fl.check(r[j] == mul_mod_fma<double>(x[j], y[j], ctx), [&] { return describe("p=", p, "x=", x[j], "y=", y[j]); });
  }
}

// ---------------------------------------------------------------------------

void ntt_suite(SelftestReport& rep, const SelftestOptions& opt, const Budget& budget) {
  using U = std::uint32_t;
  std::mt19937_64 rng(opt.seed + 2);
  {
    Prop prop(rep, "ntt", "tft = bit-mirrored brute-force DFT (n <= 64)");
    for (U p : {17u, 97u, 469762049u}) {
      for (unsigned k = 0; k <= 6 && k <= two_adic_valuation(p - 1); ++k) {
        const auto plan = make_plan<U>(p, k);
        const std::size_t n = plan.size();
        std::vector<U> a(n);
        for (auto& v : a) v = static_cast<U>(rng() % p);
        const auto ref = dft_bruteforce<U>(a, plan);
        const auto got = tft<U>(a, n, plan);
        for (std::size_t i = 0; i < n; ++i)
          prop.check(got.values[i] == ref[bit_mirror(i, k)], [&] { return describe("p=", p, "k=", k, "i=", i); });
      }
    }
  }
  {
    Prop prop(rep, "ntt", "itft(tft(a, l), l) = a");
    for (unsigned k : {6u, 10u}) {
      const auto plan = make_plan<U>(469762049u, k);
      for (std::size_t l = 0; l <= std::min<std::size_t>(plan.size(), 128); ++l) {
        if (budget.expired()) {
          prop.truncate();
          break;
        }
        std::vector<U> a(l);
        for (auto& v : a) v = static_cast<U>(rng() % plan.p());
        const auto back = itft<U>(tft<U>(a, l, plan), l, plan);
        prop.check(back == a, [&] { return describe("k=", k, "l=", l); });
      }
    }
  }
  {
    Prop prop(rep, "ntt", "blocked_tft = tft");
    for (std::size_t n1 : {1u, 2u, 4u, 8u, 16u, 32u}) {
      const auto plan = make_plan<U>(469762049u, 10, n1);
      for (std::size_t l : {n1, n1 + 1, std::size_t{300}, std::size_t{1024}}) {
        if (l > plan.size()) continue;
        std::vector<U> a(l);
        for (auto& v : a) v = static_cast<U>(rng() % plan.p());
        const auto ref = tft<U>(a, l, plan);
        const auto got = blocked_tft<U>(a, l, plan);
        bool same = true;
        for (std::size_t i = 0; i < l; ++i) same = same && got.values[i] == ref.values[i];
        prop.check(same, [&] { return describe("n1=", n1, "l=", l); });
      }
    }
  }
}

void polymul_suite(SelftestReport& rep, const SelftestOptions& opt, const Budget& budget) {
  using U = std::uint32_t;
  std::mt19937_64 rng(opt.seed + 3);
  const U p = 469762049u;
  const auto plan = make_plan<U>(p, 11);
  Prop prop(rep, "polymul", "poly_mul_tft = poly_mul_kronecker = poly_mul_naive");
  for (int iter = 0; iter < 200; ++iter) {
    if (budget.expired()) {
      prop.truncate();
      break;
    }
    auto rand_poly = [&] {
      std::vector<U> c(1 + rng() % 512);
      for (auto& v : c) v = static_cast<U>(rng() % p);
      return ModPoly<U>(p, c);
    };
    const auto a = rand_poly(), b = rand_poly();
    const auto ref = poly_mul_naive(a, b);
    prop.check(poly_mul_tft(a, b, plan) == ref && poly_mul_kronecker(a, b) == ref,
               [&] { return describe("len a=", a.size(), "len b=", b.size()); });
  }
}

void bigmul_suite(SelftestReport& rep, const SelftestOptions& opt, const Budget& budget) {
  std::mt19937_64 rng(opt.seed + 4);
  Prop prop(rep, "bigmul", "int_mul_fft = schoolbook");
  for (int iter = 0; iter < 60; ++iter) {
    if (budget.expired()) {
      prop.truncate();
      break;
    }
    auto rand_nat = [&] {
      std::vector<std::uint64_t> limbs(1 + rng() % 300);
      for (auto& v : limbs) v = rng();
      return BigNat::from_limbs(limbs);
    };
    const auto a = rand_nat(), b = rand_nat();
    prop.check(int_mul_fft(a, b) == mul_schoolbook(a, b),
               [&] { return describe("limbs a=", a.limb_count(), "limbs b=", b.limb_count()); });
  }
  Prop crt(rep, "bigmul", "crt3 inverts the residue map");
  const auto plan = make_three_prime_plan(64);
  const u128 P = static_cast<u128>(plan.primes[0]) * plan.primes[1] * plan.primes[2];
  for (int iter = 0; iter < 100000; ++iter) {
    const u128 x = ((static_cast<u128>(rng()) << 64) | rng()) % P;
    const auto r = [&](int i) { return static_cast<std::uint32_t>(x % plan.primes[i]); };
    crt.check(crt3(r(0), r(1), r(2), plan) == x, [&] { return describe("x high/low", std::uint64_t(x >> 64), std::uint64_t(x)); });
  }
}

}  // namespace

SelftestReport selftest(const SelftestOptions& options) {
  static const std::vector<std::pair<std::string, std::function<void(SelftestReport&, const SelftestOptions&, const Budget&)>>>
      suites = {{"modcore", modcore_suite},
                {"modsimd", modsimd_suite},
                {"ntt", ntt_suite},
                {"polymul", polymul_suite},
                {"bigmul", bigmul_suite}};
  bool known = options.scope == "all";
  for (const auto& s : suites) known = known || s.first == options.scope;
  if (!known) throw Error(ErrorCode::usage_error, "unknown scope '" + options.scope + "'");
  const Budget budget(options.budget_seconds);
  SelftestReport report;
  for (const auto& [name, fn] : suites)
    if (options.scope == "all" || options.scope == name) fn(report, options, budget);
  return report;
}

}  // namespace lanemod::bench
