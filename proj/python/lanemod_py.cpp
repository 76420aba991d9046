// SPDX-License-Identifier: Apache-2.0

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lanemod/bench.hpp"
#include "lanemod/bigmul.hpp"
#include "lanemod/modcore.hpp"
#include "lanemod/modsimd.hpp"
#include "lanemod/ntt.hpp"
#include "lanemod/polymul.hpp"

namespace py = pybind11;
using namespace lanemod;

namespace {

unsigned default_m(std::uint64_t p) { return static_cast<unsigned>(std::bit_width(p)); }

BigNat to_bignat(const py::int_& v) {
  if (py::reinterpret_borrow<py::object>(v) < py::int_(0)) throw py::value_error("operands must be non-negative");
  const std::string h = py::str(py::module_::import("builtins").attr("format")(v, "x"));
  return BigNat::from_hex(h);
}

py::int_ from_bignat(const BigNat& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(v.to_hex().c_str(), nullptr, 16));
}

template <Word U>
using Array = py::array_t<U, py::array::c_style | py::array::forcecast>;

template <Word U>
Array<U> batch(Array<U> x, Array<U> y, std::uint64_t p, const std::string& op) {
  if (x.ndim() != 1 || y.ndim() != 1 || x.shape(0) != y.shape(0))
    throw Error(ErrorCode::dimension_mismatch, "expected two 1-D arrays of equal length");
  const auto n = static_cast<std::size_t>(x.shape(0));
  Array<U> out(static_cast<py::ssize_t>(n));
  std::span<const U> xs(x.data(), n), ys(y.data(), n);
  std::span<U> dst(out.mutable_data(), n);
  for (std::size_t i = 0; i < n; ++i)
    if (xs[i] >= p || ys[i] >= p) throw Error(ErrorCode::range_error, "array entries must be residues");
  if (op == "add") {
    simd::add_mod_batch<U>(dst, xs, ys, static_cast<U>(p));
  } else if (op == "sub") {
    simd::sub_mod_batch<U>(dst, xs, ys, static_cast<U>(p));
  } else {
    const auto ctx = make_barrett<U>(static_cast<U>(p), best_profile<U>(static_cast<U>(p)));
    simd::mul_mod_batch<U>(dst, xs, ys, ctx);
  }
  return out;
}

TftPlan<std::uint64_t> plan_for(std::uint64_t p, std::size_t len) {
  const auto size = ntt_detail::transform_size(std::max<std::size_t>(len, 1));
  return make_plan<std::uint64_t>(p, static_cast<unsigned>(std::countr_zero(size)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lane-parallel modular arithmetic, number theoretic transforms and big-integer products";

  static py::exception<Error> exc(m, "LanemodError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  auto scalar = [&m](const char* name, const char* op, const char* doc) {
    m.def(
        name,
        [op](std::uint64_t x, std::uint64_t y, std::uint64_t p, unsigned bits) {
          return bench::golden_eval(op, p, bits == 0 ? default_m(p) : bits, x, y);
        },
        py::arg("x"), py::arg("y"), py::arg("p"), py::arg("m") = 0, doc);
  };
  scalar("add_mod", "add_mod", "(x + y) mod p");
  scalar("sub_mod", "sub_mod", "(x - y) mod p");
  scalar("mul_mod", "mul_mod", "x * y mod p with Barrett reduction");
  scalar("mul_mod_fixed", "mul_mod_fixed", "x * y mod p with y precomputed");
  scalar("mont_mul", "mont_mul", "x * y * 2^-n mod p, n the word size holding m bits");
  scalar("mul_mod_fma", "mul_mod_fma", "x * y mod p in binary64 (p below 2^50)");
  m.def(
      "neg_mod",
      [](std::uint64_t x, std::uint64_t p, unsigned bits) {
        return bench::golden_eval("neg_mod", p, bits == 0 ? default_m(p) : bits, x, 0);
      },
      py::arg("x"), py::arg("p"), py::arg("m") = 0);

  m.def(
      "add_mod_batch",
      [](Array<std::uint64_t> x, Array<std::uint64_t> y, std::uint64_t p) { return batch<std::uint64_t>(x, y, p, "add"); },
      py::arg("x"), py::arg("y"), py::arg("p"));
  m.def(
      "mul_mod_batch",
      [](Array<std::uint64_t> x, Array<std::uint64_t> y, std::uint64_t p) { return batch<std::uint64_t>(x, y, p, "mul"); },
      py::arg("x"), py::arg("y"), py::arg("p"));
  m.def(
      "sub_mod_batch",
      [](Array<std::uint64_t> x, Array<std::uint64_t> y, std::uint64_t p) { return batch<std::uint64_t>(x, y, p, "sub"); },
      py::arg("x"), py::arg("y"), py::arg("p"));

  m.def(
      "tft",
      [](const std::vector<std::uint64_t>& a, std::size_t l, std::uint64_t p) {
        const auto plan = plan_for(p, l);
        return tft<std::uint64_t>(a, l, plan).values;
      },
      py::arg("a"), py::arg("l"), py::arg("p"), "First l evaluations in bit-reversed order");
  m.def(
      "itft",
      [](const std::vector<std::uint64_t>& e, std::size_t l, std::uint64_t p) {
        const auto plan = plan_for(p, l);
        return itft<std::uint64_t>({e, Ordering::bitrev_evaluation}, l, plan);
      },
      py::arg("e"), py::arg("l"), py::arg("p"));

  m.def(
      "poly_mul",
      [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, std::uint64_t p,
         const std::string& method) {
        const ModPoly<std::uint64_t> pa(p, a), pb(p, b);
        if (method == "naive") return poly_mul_naive(pa, pb).coeffs;
        if (method == "kronecker") return poly_mul_kronecker(pa, pb).coeffs;
        if (method != "tft") throw Error(ErrorCode::usage_error, "method must be tft, kronecker or naive");
        const auto plan = plan_for(p, a.size() + b.size());
        return poly_mul_tft(pa, pb, plan).coeffs;
      },
      py::arg("a"), py::arg("b"), py::arg("p"), py::arg("method") = "tft");

  m.def(
      "int_mul", [](const py::int_& a, const py::int_& b) { return from_bignat(int_mul(to_bignat(a), to_bignat(b))); },
      py::arg("a"), py::arg("b"));
  m.def(
      "int_mul_fft",
      [](const py::int_& a, const py::int_& b) { return from_bignat(int_mul_fft(to_bignat(a), to_bignat(b))); },
      py::arg("a"), py::arg("b"), "Three-prime transform product, no schoolbook cutoff");

  m.def(
      "selftest",
      [](const std::string& scope, double budget) {
        bench::SelftestOptions opt;
        opt.scope = scope;
        opt.budget_seconds = budget;
        const auto rep = bench::selftest(opt);
        py::list props;
        for (const auto& p : rep.properties) {
          py::dict d;
          d["scope"] = p.scope;
          d["name"] = p.name;
          d["checked"] = p.checked;
          d["failures"] = p.failures;
          d["counterexample"] = p.counterexample;
          props.append(d);
        }
        return py::make_tuple(rep.passed(), props);
      },
      py::arg("scope") = "all", py::arg("budget") = 10.0);
  m.def(
      "verify_goldens",
      [](const std::string& path) {
        const auto rep = bench::verify_goldens(path);
        return py::make_tuple(rep.cases, rep.mismatches, rep.offenders);
      },
      py::arg("path"));
}
