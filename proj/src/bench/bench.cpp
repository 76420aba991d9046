// SPDX-License-Identifier: Apache-2.0

#include "lanemod/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "lanemod/modcore.hpp"
#include "lanemod/modsimd.hpp"
#include "lanemod/ntt.hpp"
#include "lanemod/numtheory.hpp"

#if defined(__linux__)
#include <sched.h>
#endif
#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define LANEMOD_HAS_TSC 1
#endif

namespace lanemod::bench {

namespace {

using clock_type = std::chrono::steady_clock;

void pin_to_current_cpu() {
#if defined(__linux__)
  const int cpu = sched_getcpu();
  if (cpu < 0) return;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  sched_setaffinity(0, sizeof(set), &set);
#endif
}

struct Timing {
  double mean = 0, median = 0, variation = 0;
};

/// Warmup, then `reps` samples of enough back-to-back runs to last ~20us.
template <class Fn>
Timing time_kernel(Fn&& fn, std::size_t len, unsigned reps) {
  fn();
  std::size_t inner = 1;
  for (;;) {
    const auto t0 = clock_type::now();
    for (std::size_t i = 0; i < inner; ++i) fn();
    const auto dt = std::chrono::duration<double, std::nano>(clock_type::now() - t0).count();
    if (dt >= 20000 || inner >= (std::size_t{1} << 20)) break;
    inner *= 2;
  }
  std::vector<double> samples;
  samples.reserve(std::max(1u, reps));
  for (unsigned r = 0; r < std::max(1u, reps); ++r) {
    const auto t0 = clock_type::now();
    for (std::size_t i = 0; i < inner; ++i) fn();
    const auto dt = std::chrono::duration<double, std::nano>(clock_type::now() - t0).count();
    samples.push_back(dt / static_cast<double>(inner * len));
  }
  Timing t;
  t.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  t.median = samples.size() % 2 == 1 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2;
  double var = 0;
  for (double s : samples) var += (s - t.mean) * (s - t.mean);
  t.variation = t.mean > 0 ? std::sqrt(var / static_cast<double>(samples.size())) / t.mean : 0;
  return t;
}

bool is_one_of(const std::string& s, std::initializer_list<const char*> list) {
  for (const char* v : list)
    if (s == v) return true;
  return false;
}

template <class T>
simd::AlignedVector<T> random_residues(std::size_t len, std::uint64_t p, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  simd::AlignedVector<T> v(len);
  for (auto& e : v) e = static_cast<T>(dist(rng));
  return v;
}

template <Word U>
Timing bench_integer(const BenchSpec& s, std::uint64_t p64, std::size_t len) {
  using W = Wide<U>;
  const U p = static_cast<U>(p64);
  std::mt19937_64 rng(42);
  auto xv = random_residues<U>(len, p64, rng);
  auto yv = random_residues<U>(len, p64, rng);
  std::span<U> x(xv);
  std::span<const U> cx(xv), y(yv);
  const unsigned reps = s.reps;

  if (s.strategy == "scalar_naive") {
    if (s.op == "add_mod")
      return time_kernel([&] { for (std::size_t i = 0; i < len; ++i) x[i] = static_cast<U>((W{x[i]} + y[i]) % p); }, len, reps);
    if (s.op == "sub_mod")
      return time_kernel([&] { for (std::size_t i = 0; i < len; ++i) x[i] = static_cast<U>((W{x[i]} + p - y[i]) % p); }, len, reps);
    if (s.op == "mul_mod_fixed") {
      const U c = y[0];
      return time_kernel(
          [&] { for (std::size_t i = 0; i < len; ++i) x[i] = static_cast<U>(static_cast<calc_t<W>>(x[i]) * c % p); }, len, reps);
    }
    return time_kernel(
        [&] { for (std::size_t i = 0; i < len; ++i) x[i] = static_cast<U>(static_cast<calc_t<W>>(x[i]) * y[i] % p); }, len, reps);
  }
  if (s.op == "add_mod") return time_kernel([&] { simd::add_mod_batch<U>(x, cx, y, p); }, len, reps);
  if (s.op == "sub_mod") return time_kernel([&] { simd::sub_mod_batch<U>(x, cx, y, p); }, len, reps);
  if (s.op == "mul_mod_fixed") {
    const auto fm = make_fixed<U>(y[0], p);
    return time_kernel([&] { simd::mul_mod_fixed_batch<U>(x, cx, fm); }, len, reps);
  }
  // mul_mod / mont_mul
  if (s.strategy == "barrett") {
    const auto ctx = make_barrett<U>(p, best_profile<U>(p));
    return time_kernel([&] { simd::mul_mod_batch<U>(x, cx, y, ctx); }, len, reps);
  }
  if (s.strategy == "barrett_half") {
    const auto ctx = make_barrett_half<U>(p);
    return time_kernel(
        [&] {
          for (std::size_t i = 0; i < len; ++i)
            x[i] = barrett_reduce_half<U>(static_cast<U>(static_cast<calc_t<U>>(x[i]) * y[i]), ctx);
        },
        len, reps);
  }
  const auto ctx = make_montgomery<U>(p, word_bits<U>);
  return time_kernel([&] { simd::mont_mul_batch<U>(x, cx, y, ctx); }, len, reps);
}

template <std::floating_point F>
Timing bench_float(const BenchSpec& s, std::uint64_t p64, std::size_t len) {
  const auto ctx = make_float_ctx<F>(p64);
  std::mt19937_64 rng(42);
  auto xv = random_residues<F>(len, p64, rng);
  auto yv = random_residues<F>(len, p64, rng);
  std::span<F> x(xv);
  std::span<const F> cx(xv), y(yv);
  if (s.op == "add_mod") return time_kernel([&] { simd::add_mod_fma_batch<F>(x, cx, y, ctx); }, len, s.reps);
  return time_kernel([&] { simd::mul_mod_fma_batch<F>(x, cx, y, ctx); }, len, s.reps);
}

}  // namespace

std::uint64_t largest_prime_with_bits(unsigned bits) {
  if (bits < 2 || bits > 64) throw Error(ErrorCode::usage_error, "prime bit-size must lie in [2, 64]");
  const std::uint64_t lo = std::uint64_t{1} << (bits - 1);
  std::uint64_t c = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  while (c >= lo && !is_prime_u64(c)) --c;
  return c;
}

void validate(const BenchSpec& s) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::usage_error, what); };
  if (!is_one_of(s.op, {"add_mod", "sub_mod", "mul_mod", "mul_mod_fixed", "mont_mul"}))
    fail("unknown op '" + s.op + "' (add_mod, sub_mod, mul_mod, mul_mod_fixed, mont_mul; fft via --op fft)");
  if (!is_one_of(s.strategy, {"barrett", "barrett_half", "fixed", "montgomery", "float_fma", "scalar_naive"}))
    fail("unknown strategy '" + s.strategy + "'");
  if (s.strategy == "float_fma") {
    if (s.lane_bits != 32 && s.lane_bits != 64) fail("float_fma needs lane_bits 32 (binary32) or 64 (binary64)");
    const unsigned ell = s.lane_bits == 64 ? 52 : 23;
    if (s.m < 2 || s.m > ell - 2) fail("float_fma needs 2 <= m <= " + std::to_string(ell - 2));
    if (!is_one_of(s.op, {"add_mod", "mul_mod"})) fail("float_fma supports add_mod and mul_mod");
    return;
  }
  if (!is_one_of(std::to_string(s.lane_bits), {"8", "16", "32", "64"})) fail("lane_bits must be 8, 16, 32 or 64");
  if (s.m < 2 || s.m > s.lane_bits) fail("m must satisfy 2 <= m <= lane_bits");
  if (s.strategy == "scalar_naive") return;
  if (is_one_of(s.op, {"add_mod", "sub_mod"}) && s.strategy != "barrett")
    fail(s.op + " supports strategies barrett, float_fma and scalar_naive");
  if (s.op == "mul_mod_fixed" && s.strategy != "fixed") fail("mul_mod_fixed supports strategies fixed and scalar_naive");
  if (s.op == "mont_mul" && s.strategy != "montgomery") fail("mont_mul supports strategy montgomery");
  if (s.op == "mul_mod" && !is_one_of(s.strategy, {"barrett", "barrett_half", "montgomery"}))
    fail("mul_mod supports barrett, barrett_half, montgomery, float_fma and scalar_naive");
  if (s.strategy == "barrett_half" && s.m > (s.lane_bits - 1) / 2)
    fail("barrett_half needs m <= floor((lane_bits - 1) / 2) = " + std::to_string((s.lane_bits - 1) / 2));
  if (s.strategy == "montgomery" && s.m < 2) fail("montgomery needs an odd modulus of at least 2 bits");
}

BenchRow run_bench(const BenchSpec& spec) {
  validate(spec);
  pin_to_current_cpu();
  BenchSpec s = spec;
  if (s.op == "mont_mul") s.strategy = "montgomery";
  const std::size_t elem_bytes = s.lane_bits / 8;
  const std::size_t len = s.buffer_len != 0 ? s.buffer_len : 4096 / elem_bytes;
  const std::uint64_t p = largest_prime_with_bits(s.m);
  Timing t;
  if (s.strategy == "float_fma") {
    t = s.lane_bits == 64 ? bench_float<double>(s, p, len) : bench_float<float>(s, p, len);
  } else {
    switch (s.lane_bits) {
      case 8: t = bench_integer<std::uint8_t>(s, p, len); break;
      case 16: t = bench_integer<std::uint16_t>(s, p, len); break;
      case 32: t = bench_integer<std::uint32_t>(s, p, len); break;
      default: t = bench_integer<std::uint64_t>(s, p, len); break;
    }
  }
  return {spec.op, s.strategy, s.lane_bits, s.m, len, t.mean, t.median, t.variation};
}

std::vector<BenchRow> run_fft_bench(std::uint64_t p, const std::vector<unsigned>& log_sizes, unsigned reps,
                                    bool float_arithmetic) {
  pin_to_current_cpu();
  std::vector<BenchRow> rows;
  std::mt19937_64 rng(7);
  const auto arith = float_arithmetic ? NttArithmetic::float_fma : NttArithmetic::barrett;
  for (unsigned k : log_sizes) {
    const std::size_t n = std::size_t{1} << k;
    BenchRow row{"fft", float_arithmetic ? "float_fma" : "barrett", 0, static_cast<unsigned>(std::bit_width(p)),
                 n, 0, 0, 0};
    Timing t;
    if (p < (std::uint64_t{1} << 32)) {
      const auto plan = make_plan<std::uint32_t>(static_cast<std::uint32_t>(p), k, 0, arith);
      auto buf = random_residues<std::uint32_t>(n, p, rng);
      t = time_kernel([&] { tft_inplace<std::uint32_t>(buf, n, n, plan); }, n, reps);
      row.lane_bits = 32;
    } else {
      const auto plan = make_plan<std::uint64_t>(p, k, 0, arith);
      auto buf = random_residues<std::uint64_t>(n, p, rng);
      t = time_kernel([&] { tft_inplace<std::uint64_t>(buf, n, n, plan); }, n, reps);
      row.lane_bits = 64;
    }
    row.ns_per_elem_mean = t.mean;
    row.ns_per_elem_median = t.median;
    row.variation = t.variation;
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::string> table_names() { return {"mod-sum", "mod-product", "fixed", "montgomery", "float", "fft"}; }

std::vector<BenchRow> run_table(const std::string& name, unsigned reps) {
  std::vector<BenchRow> rows;
  auto add = [&](const std::string& op, unsigned lanes, unsigned m, const std::string& strategy) {
    BenchSpec s;
    s.op = op;
    s.lane_bits = lanes;
    s.m = m;
    s.strategy = strategy;
    s.reps = reps;
    rows.push_back(run_bench(s));
  };
  const unsigned widths[] = {8, 16, 32, 64};
  if (name == "mod-sum") {
    for (unsigned n : widths)
      for (unsigned m : {n - 1, n})
        for (const char* st : {"scalar_naive", "barrett"}) add("add_mod", n, m, st);
  } else if (name == "mod-product") {
    for (unsigned n : widths) {
      for (unsigned m : {(n - 1) / 2, n - 2, n - 1, n}) {
        if (m < 2) continue;
        add("mul_mod", n, m, "scalar_naive");
        add("mul_mod", n, m, "barrett");
        if (m <= (n - 1) / 2) add("mul_mod", n, m, "barrett_half");
      }
    }
  } else if (name == "fixed") {
    for (unsigned n : widths)
      for (unsigned m : {n / 2, n - 1, n})
        for (const char* st : {"scalar_naive", "fixed"}) add("mul_mod_fixed", n, m, st);
  } else if (name == "montgomery") {
    for (unsigned n : widths)
      for (unsigned m : {n - 1, n})
        for (const char* st : {"scalar_naive", "montgomery"}) add("mul_mod", n, m, st);
  } else if (name == "float") {
    for (unsigned m : {11u, 21u}) {
      add("mul_mod", 32, m, "scalar_naive");
      add("mul_mod", 32, m, "float_fma");
    }
    for (unsigned m : {26u, 50u}) {
      add("mul_mod", 64, m, "scalar_naive");
      add("mul_mod", 64, m, "float_fma");
    }
  } else if (name == "fft") {
    rows = run_fft_bench(469762049, {8, 10, 12, 14, 16}, std::max(1u, reps / 8));
  } else {
    throw Error(ErrorCode::usage_error, "unknown table '" + name + "'");
  }
  return rows;
}

std::string csv_header() { return "op,strategy,lane_bits,m,len,ns_per_elem_mean,ns_per_elem_median"; }

std::string to_csv(const BenchRow& r) {
  std::ostringstream os;
  os << r.op << ',' << r.strategy << ',' << r.lane_bits << ',' << r.m << ',' << r.len << ',' << std::setprecision(6)
     << r.ns_per_elem_mean << ',' << r.ns_per_elem_median;
  return os.str();
}

namespace {

/// TSC ticks per nanosecond, measured once.
double tsc_per_ns() {
#ifdef LANEMOD_HAS_TSC
  static const double ratio = [] {
    const auto t0 = clock_type::now();
    const auto c0 = __rdtsc();
    while (std::chrono::duration<double, std::milli>(clock_type::now() - t0).count() < 20) {
    }
    const auto c1 = __rdtsc();
    const double ns = std::chrono::duration<double, std::nano>(clock_type::now() - t0).count();
    return static_cast<double>(c1 - c0) / ns;
  }();
  return ratio;
#else
  return 0;
#endif
}

}  // namespace

std::string format_table(const std::vector<BenchRow>& rows, const std::string& title) {
  std::map<std::tuple<std::string, unsigned, unsigned>, double> baseline;
  for (const auto& r : rows)
    if (r.strategy == "scalar_naive") baseline[{r.op, r.lane_bits, r.m}] = r.ns_per_elem_median;
  const double ratio = tsc_per_ns();
  std::ostringstream os;
  os << title << '\n';
  os << std::left << std::setw(14) << "op" << std::setw(14) << "strategy" << std::right << std::setw(6) << "lanes"
     << std::setw(5) << "m" << std::setw(9) << "len" << std::setw(12) << "ns/elem" << std::setw(12) << "cyc/elem"
     << std::setw(10) << "speedup" << std::setw(8) << "cv" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(14) << r.op << std::setw(14) << r.strategy << std::right << std::setw(6)
       << r.lane_bits << std::setw(5) << r.m << std::setw(9) << r.len << std::fixed << std::setprecision(3)
       << std::setw(12) << r.ns_per_elem_median << std::setw(12) << r.ns_per_elem_median * ratio;
    const auto it = baseline.find({r.op, r.lane_bits, r.m});
    if (it != baseline.end() && r.ns_per_elem_median > 0)
      os << std::setw(10) << std::setprecision(2) << it->second / r.ns_per_elem_median;
    else
      os << std::setw(10) << "-";
    os << std::setw(8) << std::setprecision(2) << r.variation << std::defaultfloat << '\n';
  }
  return os.str();
}

}  // namespace lanemod::bench
