// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <iostream>
#include <regex>

#include "lanemod/bench.hpp"
#include "lanemod/error.hpp"

namespace {

using namespace lanemod;

/// "2^8..2^20", "8..20", "2^10" or "10,12,16" to a list of exponents.
std::vector<unsigned> parse_sizes(const std::string& text) {
  static const std::regex range(R"((?:2\^)?(\d+)\.\.(?:2\^)?(\d+))");
  std::smatch m;
  std::vector<unsigned> out;
  if (std::regex_match(text, m, range)) {
    const auto lo = std::stoul(m[1]), hi = std::stoul(m[2]);
    if (lo > hi) throw Error(ErrorCode::usage_error, "empty size range '" + text + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(static_cast<unsigned>(s));
    return out;
  }
  static const std::regex item(R"((?:2\^)?(\d+))");
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (!std::regex_match(tok, m, item)) throw Error(ErrorCode::usage_error, "bad size '" + tok + "'");
    out.push_back(static_cast<unsigned>(std::stoul(m[1])));
  }
  return out;
}

int cmd_bench(const bench::BenchSpec& spec, const std::string& table, std::uint64_t p, const std::string& sizes,
              bool float_fft) {
  std::vector<bench::BenchRow> rows;
  std::string title;
  if (!table.empty()) {
    rows = bench::run_table(table, spec.reps);
    title = table;
  } else if (spec.op == "fft") {
    rows = bench::run_fft_bench(p, parse_sizes(sizes), spec.reps, float_fft);
    title = "fft p=" + std::to_string(p);
  } else {
    rows.push_back(bench::run_bench(spec));
    title = spec.op;
  }
  std::cout << bench::csv_header() << '\n';
  for (const auto& r : rows) std::cout << bench::to_csv(r) << '\n';
  std::cerr << bench::format_table(rows, title);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lanemod: lane-parallel modular arithmetic toolkit"};
  app.require_subcommand(1);

  bench::BenchSpec spec;
  std::string table;
  std::uint64_t fft_p = 469762049;
  std::string sizes = "2^8..2^20";
  bool float_fft = false;
  auto* b = app.add_subcommand("bench", "throughput benchmarks (CSV on stdout, table on stderr)");
  b->add_option("--op", spec.op, "add_mod, sub_mod, mul_mod or fft")->capture_default_str();
  b->add_option("--lanes", spec.lane_bits, "lane width in bits")->capture_default_str();
  b->add_option("--m", spec.m, "modulus bit-size bound")->capture_default_str();
  b->add_option("--strategy", spec.strategy, "barrett, barrett_half, fixed, montgomery, float_fma, scalar_naive")
      ->capture_default_str();
  b->add_option("--len", spec.buffer_len, "elements per buffer (0: 4096 bytes)");
  b->add_option("--reps", spec.reps, "timed repetitions")->capture_default_str();
  b->add_option("--table", table, "predefined grid: mod-sum, mod-product, fixed, montgomery, float, fft");
  b->add_option("--p", fft_p, "transform modulus for --op fft")->capture_default_str();
  b->add_option("--sizes", sizes, "transform sizes, e.g. 2^8..2^20")->capture_default_str();
  b->add_flag("--float", float_fft, "use the binary64 backend for --op fft");

  bench::SelftestOptions st;
  auto* s = app.add_subcommand("selftest", "differential self-tests against wide-integer oracles");
  s->add_option("--scope", st.scope, "all, modcore, modsimd, ntt, polymul, bigmul")->capture_default_str();
  s->add_option("--budget", st.budget_seconds, "time budget in seconds")->capture_default_str();
  s->add_option("--seed", st.seed, "random seed")->capture_default_str();
  s->add_flag("--inject-fault", st.inject_fault, "perturb the Barrett pre-inverse to exercise failure reporting");

  std::string mode, path;
  std::uint64_t golden_seed = 1;
  auto* g = app.add_subcommand("goldens", "dump or verify golden vectors");
  g->add_option("mode", mode, "dump or verify")->required()->check(CLI::IsMember({"dump", "verify"}));
  g->add_option("path", path, "golden file")->required();
  g->add_option("--seed", golden_seed, "generator seed for dump")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (b->parsed()) return cmd_bench(spec, table, fft_p, sizes, float_fft);
    if (s->parsed()) {
      const auto report = bench::selftest(st);
      bench::print_report(report, std::cout);
      return report.passed() ? 0 : 1;
    }
    if (mode == "dump") {
      bench::dump_goldens(path, golden_seed);
      std::cerr << "wrote " << path << '\n';
      return 0;
    }
    const auto rep = bench::verify_goldens(path);
    for (const auto& o : rep.offenders) std::cout << o << '\n';
    std::cout << rep.cases << " cases, " << rep.mismatches << " mismatches\n";
    return rep.mismatches == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
