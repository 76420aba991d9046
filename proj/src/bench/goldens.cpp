// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "lanemod/bench.hpp"
#include "lanemod/modcore.hpp"
#include "lanemod/numtheory.hpp"

namespace lanemod::bench {

namespace {

unsigned word_size_for(unsigned m) {
  if (m == 0 || m > 64) throw Error(ErrorCode::usage_error, "modulus bound m must lie in [1, 64]");
  for (unsigned n : {8u, 16u, 32u, 64u})
    if (m <= n) return n;
  return 64;
}

BarrettProfile profile_for(unsigned m, unsigned n) {
  if (m <= n - 2) return BarrettProfile::minus2;
  if (m <= n - 1) return BarrettProfile::minus1;
  return BarrettProfile::full;
}

template <Word U>
std::uint64_t eval_word(const std::string& op, U p, unsigned m, U x, U y) {
  constexpr unsigned n = word_bits<U>;
  if (op == "mont_mul") {
    const auto ctx = make_montgomery<U>(p, n);
    return mont_mul<U>(x, y, ctx);
  }
  if (op == "mul_mod_fixed") return mul_mod_fixed<U>(x, make_fixed<U>(y, p));
  const auto ctx = make_barrett<U>(p, profile_for(m, n));
  if (op == "add_mod") return add_mod<U>(x, y, ctx);
  if (op == "sub_mod") return sub_mod<U>(x, y, ctx);
  if (op == "neg_mod") return neg_mod<U>(x, ctx);
  if (op == "mul_mod") return mul_mod<U>(x, y, ctx);
  throw Error(ErrorCode::usage_error, "unknown golden op '" + op + "'");
}

std::string hex(std::uint64_t v, unsigned digits) {
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(static_cast<int>(digits)) << v;
  return os.str();
}

std::uint64_t parse_hex(const std::string& tok, std::size_t line_no) {
  if (tok.empty() || tok.size() > 16 || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); }))
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": bad hex field '" + tok + "'");
  return std::stoull(tok, nullptr, 16);
}

}  // namespace

std::vector<std::string> golden_ops() {
  return {"add_mod", "sub_mod", "neg_mod", "mul_mod", "mul_mod_fixed", "mont_mul", "mul_mod_fma"};
}

std::uint64_t golden_eval(const std::string& op, std::uint64_t p, unsigned m, std::uint64_t x, std::uint64_t y) {
  const unsigned n = word_size_for(m);
  if (p < 2 || static_cast<unsigned>(std::bit_width(p)) > m)
    throw Error(ErrorCode::invalid_modulus, "modulus " + std::to_string(p) + " does not fit m=" + std::to_string(m));
  if (x >= p || y >= p) throw Error(ErrorCode::range_error, "operands must be residues");
  if (op == "mul_mod_fma") {
    const auto ctx = make_float_ctx<double>(p);
    return static_cast<std::uint64_t>(mul_mod_fma<double>(static_cast<double>(x), static_cast<double>(y), ctx));
  }
  switch (n) {
    case 8: return eval_word<std::uint8_t>(op, static_cast<std::uint8_t>(p), m, static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y));
    case 16: return eval_word<std::uint16_t>(op, static_cast<std::uint16_t>(p), m, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y));
    case 32: return eval_word<std::uint32_t>(op, static_cast<std::uint32_t>(p), m, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
    default: return eval_word<std::uint64_t>(op, p, m, x, y);
  }
}

std::string format_golden(const GoldenCase& c) {
  const unsigned digits = word_size_for(c.m) / 4;
  std::ostringstream os;
  os << c.op << ' ' << hex(c.p, digits) << ' ' << c.m << ' ' << hex(c.x, digits) << ' ' << hex(c.y, digits)
     << " -> " << hex(c.z, digits);
  return os.str();
}

GoldenCase parse_golden(const std::string& line, std::size_t line_no) {
  std::istringstream is(line);
  GoldenCase c;
  std::string p, m, x, y, arrow, z, extra;
  if (!(is >> c.op >> p >> m >> x >> y >> arrow >> z) || arrow != "->" || (is >> extra))
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected '<op> <p> <m> <x> <y> -> <z>'");
  const auto ops = golden_ops();
  if (std::find(ops.begin(), ops.end(), c.op) == ops.end())
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": unknown op '" + c.op + "'");
  if (m.empty() || m.size() > 2 || !std::all_of(m.begin(), m.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": bad bit bound '" + m + "'");
  c.m = static_cast<unsigned>(std::stoul(m));
  if (c.m == 0 || c.m > 64)
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": bit bound out of range");
  c.p = parse_hex(p, line_no);
  c.x = parse_hex(x, line_no);
  c.y = parse_hex(y, line_no);
  c.z = parse_hex(z, line_no);
  return c;
}

std::vector<GoldenCase> generate_goldens(std::uint64_t seed, std::size_t per_config) {
  std::vector<GoldenCase> out = {
      {"mul_mod", 7, 3, 5, 3, 1},
      {"add_mod", 7, 3, 0, 0, 0},
      {"mont_mul", 7, 3, 5, 2, 6},
  };
  std::mt19937_64 rng(seed);
  for (unsigned n : {8u, 16u, 32u, 64u}) {
    for (unsigned m = n > 8 ? n - 3 : 2; m <= n; ++m) {
      const std::uint64_t half = std::uint64_t{1} << (m - 1);
      const std::uint64_t prime = largest_prime_with_bits(m);
      for (const auto& op : golden_ops()) {
        if (op == "mul_mod_fma" && m > FloatContext<double>::max_modulus_bits) continue;
        for (std::size_t i = 0; i < per_config; ++i) {
          std::uint64_t p = prime;
          // Alternate with random odd moduli of exactly m bits, except for the
          // float product whose contract asks for a prime.
          if (op != "mul_mod_fma" && i % 2 == 1 && m >= 2) p = (half + rng() % half) | 1;
          if (p < 3) p = 3;
          GoldenCase c{op, p, m, rng() % p, op == "neg_mod" ? 0 : rng() % p, 0};
          c.z = golden_eval(c.op, c.p, c.m, c.x, c.y);
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

void dump_goldens(const std::string& path, std::uint64_t seed) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::usage_error, "cannot write '" + path + "'");
  f << "# SPDX-License-Identifier: Apache-2.0\n";
  f << "# <op> <p-hex> <m> <x-hex> <y-hex> -> <z-hex>\n";
  f << "# word size: smallest of 8/16/32/64 holding m bits; Montgomery shift = word size\n";
  for (const auto& c : generate_goldens(seed)) f << format_golden(c) << '\n';
  if (!f) throw Error(ErrorCode::usage_error, "write to '" + path + "' failed");
}

GoldenReport verify_goldens(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::usage_error, "cannot read '" + path + "'");
  GoldenReport rep;
  std::string line;
  for (std::size_t line_no = 1; std::getline(f, line); ++line_no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const GoldenCase c = parse_golden(line, line_no);
    ++rep.cases;
    std::uint64_t got = 0;
    std::string why;
    try {
      got = golden_eval(c.op, c.p, c.m, c.x, c.y);
    } catch (const Error& e) {
      why = e.what();
    }
    if (!why.empty() || got != c.z) {
      ++rep.mismatches;
      if (rep.offenders.size() < 10) {
        rep.offenders.push_back("line " + std::to_string(line_no) + ": expected " + format_golden(c) +
                                (why.empty() ? ", got " + hex(got, word_size_for(c.m) / 4) : ", " + why));
      }
    }
  }
  return rep;
}

}  // namespace lanemod::bench
