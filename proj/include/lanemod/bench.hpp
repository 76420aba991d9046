// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_BENCH_HPP
#define LANEMOD_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lanemod::bench {

/// Strategies: barrett, barrett_half, fixed, montgomery, float_fma,
/// scalar_naive (plain % on the double-width product, the baseline).
struct BenchSpec {
  std::string op = "add_mod";
  unsigned lane_bits = 32;
  unsigned m = 31;
  std::string strategy = "barrett";
  /// Elements per buffer; 0 selects 4096 bytes.
  std::size_t buffer_len = 0;
  unsigned reps = 64;
};

struct BenchRow {
  std::string op;
  std::string strategy;
  unsigned lane_bits = 0;
  unsigned m = 0;
  std::size_t len = 0;
  double ns_per_elem_mean = 0;
  double ns_per_elem_median = 0;
  /// Coefficient of variation of the samples, logged only.
  double variation = 0;
};

/// Throws Error(usage_error) naming the failed precondition.
void validate(const BenchSpec& spec);
BenchRow run_bench(const BenchSpec& spec);

/// Transform timings, one row per size 2^s.
std::vector<BenchRow> run_fft_bench(std::uint64_t p, const std::vector<unsigned>& log_sizes, unsigned reps,
                                    bool float_arithmetic = false);

/// Grids shaped like the reference tables: mod-sum, mod-product, fixed,
/// montgomery, float, fft.
std::vector<std::string> table_names();
std::vector<BenchRow> run_table(const std::string& name, unsigned reps = 64);

std::string csv_header();
std::string to_csv(const BenchRow& row);
/// Aligned text with a speedup column relative to scalar_naive rows of the
/// same (op, lane_bits, m).
std::string format_table(const std::vector<BenchRow>& rows, const std::string& title);

/// Largest prime of exactly `bits` bits (bits >= 2).
std::uint64_t largest_prime_with_bits(unsigned bits);

// ---------------------------------------------------------------------------

struct PropertyResult {
  std::string scope;
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::string counterexample;
  bool truncated = false;
};

struct SelftestOptions {
  /// all, modcore, modsimd, ntt, polymul, bigmul
  std::string scope = "all";
  double budget_seconds = 60;
  /// Replaces the Barrett pre-inverse q by q + 1 in the 8-bit sweeps.
  bool inject_fault = false;
  std::uint64_t seed = 1;
};

struct SelftestReport {
  std::vector<PropertyResult> properties;
  bool passed() const noexcept;
};

SelftestReport selftest(const SelftestOptions& options);
void print_report(const SelftestReport& report, std::ostream& out);

// ---------------------------------------------------------------------------

/// Golden vectors: `<op> <p-hex> <m> <x-hex> <y-hex> -> <z-hex>`, one per line,
/// `#` comments. The word size is the smallest of 8/16/32/64 bits holding m
/// bits; the Barrett profile follows m and the Montgomery shift is the word
/// size.
struct GoldenCase {
  std::string op;
  std::uint64_t p = 0;
  unsigned m = 0;
  std::uint64_t x = 0, y = 0, z = 0;
};

std::vector<std::string> golden_ops();
std::uint64_t golden_eval(const std::string& op, std::uint64_t p, unsigned m, std::uint64_t x, std::uint64_t y);
std::string format_golden(const GoldenCase& c);
GoldenCase parse_golden(const std::string& line, std::size_t line_no);
std::vector<GoldenCase> generate_goldens(std::uint64_t seed = 1, std::size_t per_config = 8);

struct GoldenReport {
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  /// First 10 offenders.
  std::vector<std::string> offenders;
};

void dump_goldens(const std::string& path, std::uint64_t seed = 1);
GoldenReport verify_goldens(const std::string& path);

}  // namespace lanemod::bench

#endif  // LANEMOD_BENCH_HPP
