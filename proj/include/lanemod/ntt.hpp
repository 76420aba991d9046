// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_NTT_HPP
#define LANEMOD_NTT_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "lanemod/barrett.hpp"
#include "lanemod/error.hpp"
#include "lanemod/float_mod.hpp"
#include "lanemod/modsimd.hpp"
#include "lanemod/numtheory.hpp"

namespace lanemod {

/// [i]_k: i's k-bit binary expansion reversed.
std::size_t bit_mirror(std::size_t i, unsigned k);

/// Reduction used inside butterflies.
enum class NttArithmetic { barrett, float_fma };

enum class Ordering { coefficient, bitrev_evaluation };

template <Word U>
struct EvalVector {
  std::vector<U> values;
  Ordering ordering = Ordering::coefficient;
};

/// Butterfly bookkeeping for operation-count checks: one lane-wise modular
/// sum/difference counts as an add, one modular product as a mul.
struct OpCounter {
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;
  std::uint64_t total() const noexcept { return adds + muls; }
};

/// Power-of-two transform over Z/pZ.
///
/// The twiddle table holds W[i] = omega^[i]_(k-1) for i < n/2. Block i of
/// every butterfly level uses W[i], so the first m/2 entries form the table of
/// the size-m transform with root omega^(n/m).
template <Word U>
class TftPlan {
 public:
  U p() const noexcept { return barrett_.p(); }
  unsigned k() const noexcept { return k_; }
  std::size_t size() const noexcept { return std::size_t{1} << k_; }
  U omega() const noexcept { return omega_; }
  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return size() / n1_; }
  NttArithmetic arithmetic() const noexcept { return arithmetic_; }
  const BarrettContext<U>& barrett() const noexcept { return barrett_; }
  const FloatContext<double>* float_context() const noexcept {
    return arithmetic_ == NttArithmetic::float_fma ? &float_ : nullptr;
  }
  const FixedMultiplicand<U>& twiddle(std::size_t i) const noexcept { return fwd_[i]; }
  const FixedMultiplicand<U>& inverse_twiddle(std::size_t i) const noexcept { return inv_[i]; }
  /// 2^-j mod p
  const FixedMultiplicand<U>& inverse_pow2(unsigned j) const noexcept { return inv_pow2_[j]; }

  template <Word V>
  friend TftPlan<V> make_plan(V p, unsigned k, std::size_t n1, NttArithmetic arithmetic);

 private:
  explicit TftPlan(const BarrettContext<U>& b) : barrett_(b) {}

  BarrettContext<U> barrett_;
  unsigned k_ = 0;
  U omega_{};
  std::size_t n1_ = 1;
  NttArithmetic arithmetic_ = NttArithmetic::barrett;
  FloatContext<double> float_{};
  std::vector<FixedMultiplicand<U>> fwd_, inv_, inv_pow2_;
};

/// Block split used when n1 = 0 is requested: the lane count for transforms
/// up to 4 KiB, about sqrt(n) above.
template <Word U>
std::size_t default_block_split(unsigned k) noexcept {
  const std::size_t n = std::size_t{1} << k;
  if (n * sizeof(U) <= 4096) return std::min(n, simd::default_register_bits / word_bits<U>);
  return std::size_t{1} << ((k + 1) / 2);
}

template <Word U>
TftPlan<U> make_plan(U p, unsigned k, std::size_t n1 = 0, NttArithmetic arithmetic = NttArithmetic::barrett) {
  if (!is_prime_u64(p)) throw Error(ErrorCode::invalid_modulus, std::to_string(p) + " is not prime");
  if (p == 2 || k > two_adic_valuation(p - 1))
    throw Error(ErrorCode::unsupported_transform_size,
                "2^" + std::to_string(k) + " does not divide p - 1 for p=" + std::to_string(p));
  if (k > 30) throw Error(ErrorCode::size_overflow, "transform size 2^" + std::to_string(k) + " is too large");
  const std::size_t n = std::size_t{1} << k;
  if (n1 == 0) n1 = default_block_split<U>(k);
  if (!std::has_single_bit(n1) || n1 > n)
    throw Error(ErrorCode::usage_error, "n1=" + std::to_string(n1) + " must be a power of two dividing n");

  TftPlan<U> plan(make_barrett<U>(p, best_profile<U>(p)));
  plan.k_ = k;
  plan.n1_ = n1;
  plan.arithmetic_ = arithmetic;
  if (arithmetic == NttArithmetic::float_fma) plan.float_ = make_float_ctx<double>(p);

  const std::uint64_t g = find_generator(p);
  const std::uint64_t omega = powmod_u64(g, (p - 1) >> k, p);
  plan.omega_ = static_cast<U>(omega);
  if (k >= 1 && powmod_u64(omega, n / 2, p) != p - 1)
    throw Error(ErrorCode::invalid_modulus, "root of unity check failed");

  const std::size_t half = n / 2;
  const std::uint64_t omega_inv = powmod_u64(omega, n - 1, p);
  std::vector<std::uint64_t> pw(half), pw_inv(half);
  std::uint64_t w = 1, wi = 1;
  for (std::size_t j = 0; j < half; ++j) {
    pw[j] = w;
    pw_inv[j] = wi;
    w = mulmod_u64(w, omega, p);
    wi = mulmod_u64(wi, omega_inv, p);
  }
  plan.fwd_.reserve(half);
  plan.inv_.reserve(half);
  for (std::size_t i = 0; i < half; ++i) {
    const std::size_t e = bit_mirror(i, k - 1);
    plan.fwd_.push_back(make_fixed<U>(static_cast<U>(pw[e]), p));
    plan.inv_.push_back(make_fixed<U>(static_cast<U>(pw_inv[e]), p));
  }
  const std::uint64_t inv2 = (p + 1) / 2;
  std::uint64_t s = 1;
  for (unsigned j = 0; j <= k; ++j) {
    plan.inv_pow2_.push_back(make_fixed<U>(static_cast<U>(s), p));
    s = mulmod_u64(s, inv2, p);
  }
  return plan;
}

// ---------------------------------------------------------------------------

namespace ntt_detail {

template <Word U>
inline constexpr std::size_t lanes = simd::default_register_bits / word_bits<U>;

/// Product by a cached twiddle through the plan's reduction.
template <Word U>
struct Multiplier {
  FixedMultiplicand<U> fm;
  const FloatContext<double>* fctx;

  U operator()(U x) const {
    if (fctx != nullptr)
      return static_cast<U>(mul_mod_fma<double>(static_cast<double>(x), static_cast<double>(fm.y), *fctx));
    return mul_mod_fixed<U>(x, fm);
  }

  template <std::size_t N>
  simd::Pack<U, N> operator()(const simd::Pack<U, N>& x) const {
    if (fctx == nullptr) return simd::vmul_mod_fixed(x, fm);
    simd::Pack<double, N> xd;
    for (std::size_t i = 0; i < N; ++i) xd[i] = static_cast<double>(x[i]);
    const auto r = simd::vmul_mod_fma(xd, simd::Pack<double, N>::broadcast(static_cast<double>(fm.y)), *fctx);
    simd::Pack<U, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<U>(r[i]);
    return out;
  }
};

/// Applies `vec` to packs of a[i], b[i] and `scalar` to the remainder.
template <Word U, class Vec, class Scalar>
inline void zip2(U* a, U* b, std::size_t count, Vec vec, Scalar scalar) {
  constexpr std::size_t N = lanes<U>;
  using P = simd::Pack<U, N>;
  std::size_t i = 0;
  for (; i + N <= count; i += N) {
    P x = P::load(a + i);
    P y = P::load(b + i);
    vec(x, y);
    x.store(a + i);
    y.store(b + i);
  }
  for (; i < count; ++i) scalar(a[i], b[i]);
}

/// Transform engine over rows of `width` residues: element i of a transform
/// of size `size` is the row a[i*width, (i+1)*width).
template <Word U>
class Engine {
 public:
  Engine(const TftPlan<U>& plan, std::size_t width, OpCounter* ops) : plan_(plan), w_(width), ops_(ops) {}

  void forward_full(U* a, std::size_t size, std::size_t block) const {
    for (std::size_t t = size / 2, nb = 1; t >= 1; t /= 2, nb *= 2) {
      for (std::size_t b = 0; b < nb; ++b) {
        U* base = a + 2 * t * b * w_;
        butterfly(base, base + t * w_, t * w_, mul(plan_.twiddle(block * nb + b)));
      }
    }
  }

  void inverse_full(U* a, std::size_t size, std::size_t block) const {
    for (std::size_t t = 1, nb = size / 2; t < size; t *= 2, nb /= 2) {
      for (std::size_t b = 0; b < nb; ++b) {
        U* base = a + 2 * t * b * w_;
        inverse_butterfly(base, base + t * w_, t * w_, mul(plan_.inverse_twiddle(block * nb + b)));
      }
    }
    scale(a, size * w_, mul(plan_.inverse_pow2(static_cast<unsigned>(std::countr_zero(size)))));
  }

  /// Inputs [0, l_in) (zero beyond), outputs [0, l_out). Positions at or
  /// beyond l_in are never read.
  void forward(U* a, std::size_t size, std::size_t block, std::size_t l_in, std::size_t l_out) const {
    if (l_out == 0) return;
    if (l_in == 0) {
      std::fill(a, a + l_out * w_, U{0});
      return;
    }
    if (size == 1) return;
    if (l_in == size && l_out == size) {
      forward_full(a, size, block);
      return;
    }
    const std::size_t t = size / 2;
    U* lo = a;
    U* hi = a + t * w_;
    const auto z = mul(plan_.twiddle(block));
    if (l_in <= t) {
      // hi is zero: both children start from lo.
      if (l_out > t) {
        std::copy(lo, lo + l_in * w_, hi);
        forward(hi, t, 2 * block + 1, l_in, l_out - t);
      }
      forward(lo, t, 2 * block, l_in, std::min(l_out, t));
      return;
    }
    const std::size_t c = (l_in - t) * w_;
    if (l_out > t) {
      butterfly(lo, hi, c, z);
      std::copy(lo + c, lo + t * w_, hi + c);
      forward(hi, t, 2 * block + 1, t, l_out - t);
    } else {
      fused_add(lo, hi, c, z);
    }
    forward(lo, t, 2 * block, t, std::min(l_out, t));
  }

  /// Positions [0, l) hold evaluations, [l, size) the known inputs. On return
  /// [0, l) holds the inputs; [l, size) is clobbered.
  void inverse(U* a, std::size_t size, std::size_t block, std::size_t l) const {
    if (l == 0 || size == 1) return;
    if (l == size) {
      inverse_full(a, size, block);
      return;
    }
    const std::size_t t = size / 2;
    U* lo = a;
    U* hi = a + t * w_;
    const auto z = mul(plan_.twiddle(block));
    if (l >= t) {
      inverse_full(lo, t, 2 * block);
      const std::size_t c0 = (l - t) * w_;
      const std::size_t rest = t * w_ - c0;
      // Known hi: lo = L - z*hi, and the right child's input R = lo - z*hi.
      fused_sub(lo + c0, hi + c0, rest, z);
      store_sub(lo + c0, hi + c0, rest, z);
      inverse(hi, t, 2 * block + 1, l - t);
      const U p = plan_.p();
      const auto& half = plan_.inverse_pow2(1);
      const U zinv_half = mul_mod<U>(plan_.inverse_twiddle(block).y, half.y, plan_.barrett());
      half_combine(lo, hi, c0, mul(half), mul(make_fixed<U>(zinv_half, p)));
    } else {
      const std::size_t c0 = l * w_;
      fused_add(lo + c0, hi + c0, t * w_ - c0, z);
      inverse(lo, t, 2 * block, l);
      fused_sub(lo, hi, c0, z);
    }
  }

 private:
  Multiplier<U> mul(const FixedMultiplicand<U>& fm) const { return {fm, plan_.float_context()}; }

  void count(std::uint64_t adds, std::uint64_t muls) const {
    if (ops_ != nullptr) {
      ops_->adds += adds;
      ops_->muls += muls;
    }
  }

  // (lo, hi) <- (lo + z*hi, lo - z*hi)
  void butterfly(U* lo, U* hi, std::size_t c, const Multiplier<U>& z) const {
    const U p = plan_.p();
    zip2<U>(
        lo, hi, c,
        [&](auto& x, auto& y) {
          const auto v = z(y);
          y = simd::vsub_mod(x, v, p);
          x = simd::vadd_mod(x, v, p);
        },
        [&](U& x, U& y) {
          const U v = z(y);
          y = sub_mod<U>(x, v, p);
          x = add_mod<U>(x, v, p);
        });
    count(2 * c, c);
  }

  // (lo, hi) <- (lo + hi, (lo - hi) * zinv)
  void inverse_butterfly(U* lo, U* hi, std::size_t c, const Multiplier<U>& zinv) const {
    const U p = plan_.p();
    zip2<U>(
        lo, hi, c,
        [&](auto& x, auto& y) {
          const auto d = simd::vsub_mod(x, y, p);
          x = simd::vadd_mod(x, y, p);
          y = zinv(d);
        },
        [&](U& x, U& y) {
          const U d = sub_mod<U>(x, y, p);
          x = add_mod<U>(x, y, p);
          y = zinv(d);
        });
    count(2 * c, c);
  }

  // a <- a + z*b
  void fused_add(U* a, U* b, std::size_t c, const Multiplier<U>& z) const {
    const U p = plan_.p();
    zip2<U>(
        a, b, c, [&](auto& x, auto& y) { x = simd::vadd_mod(x, z(y), p); },
        [&](U& x, U& y) { x = add_mod<U>(x, z(y), p); });
    count(c, c);
  }

  // a <- a - z*b
  void fused_sub(U* a, U* b, std::size_t c, const Multiplier<U>& z) const {
    const U p = plan_.p();
    zip2<U>(
        a, b, c, [&](auto& x, auto& y) { x = simd::vsub_mod(x, z(y), p); },
        [&](U& x, U& y) { x = sub_mod<U>(x, z(y), p); });
    count(c, c);
  }

  // b <- a - z*b
  void store_sub(U* a, U* b, std::size_t c, const Multiplier<U>& z) const {
    const U p = plan_.p();
    zip2<U>(
        a, b, c, [&](auto& x, auto& y) { y = simd::vsub_mod(x, z(y), p); },
        [&](U& x, U& y) { y = sub_mod<U>(x, z(y), p); });
    count(c, c);
  }

  // (a, b) <- ((a + b) * h, (a - b) * g)
  void half_combine(U* a, U* b, std::size_t c, const Multiplier<U>& h, const Multiplier<U>& g) const {
    const U p = plan_.p();
    zip2<U>(
        a, b, c,
        [&](auto& x, auto& y) {
          const auto d = simd::vsub_mod(x, y, p);
          x = h(simd::vadd_mod(x, y, p));
          y = g(d);
        },
        [&](U& x, U& y) {
          const U d = sub_mod<U>(x, y, p);
          x = h(add_mod<U>(x, y, p));
          y = g(d);
        });
    count(2 * c, 2 * c);
  }

  void scale(U* a, std::size_t c, const Multiplier<U>& s) const {
    constexpr std::size_t N = lanes<U>;
    using P = simd::Pack<U, N>;
    std::size_t i = 0;
    for (; i + N <= c; i += N) s(P::load(a + i)).store(a + i);
    for (; i < c; ++i) a[i] = s(a[i]);
    count(0, c);
  }

  const TftPlan<U>& plan_;
  std::size_t w_;
  OpCounter* ops_;
};

inline std::size_t transform_size(std::size_t l) { return l <= 1 ? 1 : std::bit_ceil(l); }

}  // namespace ntt_detail

// ---------------------------------------------------------------------------

/// Transposes the rows x cols row-major grid `src` into `dst` (cols x rows),
/// walking block x block tiles.
template <class T>
void transpose_blocked(std::span<const T> src, std::size_t rows, std::size_t cols, std::span<T> dst,
                       std::size_t block = 8) {
  if (src.size() != rows * cols || dst.size() != rows * cols)
    throw Error(ErrorCode::dimension_mismatch, "transpose buffers do not match the grid");
  if (block == 0) block = 1;
  for (std::size_t ib = 0; ib < rows; ib += block) {
    const std::size_t ie = std::min(rows, ib + block);
    for (std::size_t jb = 0; jb < cols; jb += block) {
      const std::size_t je = std::min(cols, jb + block);
      for (std::size_t i = ib; i < ie; ++i)
        for (std::size_t j = jb; j < je; ++j) dst[j * rows + i] = src[i * cols + j];
    }
  }
}

template <class T>
std::vector<T> transpose_blocked(std::span<const T> src, std::size_t rows, std::size_t cols,
                                 std::size_t block = 8) {
  std::vector<T> out(src.size());
  transpose_blocked<T>(src, rows, cols, std::span<T>(out), block);
  return out;
}

/// In-place TFT: buf[0, l_in) holds coefficients, buf[0, l_out) receives
/// A(omega^[j]_k). buf needs room for the next power of two >= max(l_in, l_out).
template <Word U>
void tft_inplace(std::span<U> buf, std::size_t l_in, std::size_t l_out, const TftPlan<U>& plan,
                 OpCounter* ops = nullptr) {
  const std::size_t size = ntt_detail::transform_size(std::max(l_in, l_out));
  if (size > plan.size())
    throw Error(ErrorCode::range_error, "transform length " + std::to_string(std::max(l_in, l_out)) +
                                            " exceeds plan size " + std::to_string(plan.size()));
  if (buf.size() < size) throw Error(ErrorCode::range_error, "transform buffer too small");
  ntt_detail::Engine<U>(plan, 1, ops).forward(buf.data(), size, 0, l_in, l_out);
}

/// In-place inverse: buf[0, l) holds the first l evaluations of a polynomial
/// of length l; on return it holds its coefficients.
template <Word U>
void itft_inplace(std::span<U> buf, std::size_t l, const TftPlan<U>& plan, OpCounter* ops = nullptr) {
  const std::size_t size = ntt_detail::transform_size(l);
  if (size > plan.size())
    throw Error(ErrorCode::range_error,
                "transform length " + std::to_string(l) + " exceeds plan size " + std::to_string(plan.size()));
  if (buf.size() < size) throw Error(ErrorCode::range_error, "transform buffer too small");
  std::fill(buf.begin() + static_cast<std::ptrdiff_t>(l), buf.begin() + static_cast<std::ptrdiff_t>(size), U{0});
  ntt_detail::Engine<U>(plan, 1, ops).inverse(buf.data(), size, 0, l);
}

/// (A(omega^[0]_k), ..., A(omega^[l-1]_k)) for the l-tuple a (missing entries
/// are zero).
template <Word U>
EvalVector<U> tft(std::span<const U> a, std::size_t l, const TftPlan<U>& plan) {
  if (l > plan.size())
    throw Error(ErrorCode::range_error,
                "l=" + std::to_string(l) + " exceeds transform size " + std::to_string(plan.size()));
  const std::size_t l_in = std::min(a.size(), l);
  std::vector<U> buf(ntt_detail::transform_size(l), U{0});
  std::copy_n(a.begin(), l_in, buf.begin());
  tft_inplace<U>(buf, l_in, l, plan);
  buf.resize(l);
  return {std::move(buf), Ordering::bitrev_evaluation};
}

template <Word U>
std::vector<U> itft(const EvalVector<U>& e, std::size_t l, const TftPlan<U>& plan) {
  if (e.ordering != Ordering::bitrev_evaluation)
    throw Error(ErrorCode::usage_error, "itft expects bit-reversed evaluations");
  if (l > plan.size() || l > e.values.size())
    throw Error(ErrorCode::range_error, "l=" + std::to_string(l) + " exceeds the available evaluations");
  std::vector<U> buf(ntt_detail::transform_size(l), U{0});
  std::copy_n(e.values.begin(), l, buf.begin());
  itft_inplace<U>(buf, l, plan);
  buf.resize(l);
  return buf;
}

/// O(n^2) evaluation a_hat_i = sum_j omega^(ij) a_j in natural order.
template <Word U>
std::vector<U> dft_bruteforce(std::span<const U> a, const TftPlan<U>& plan) {
  const std::size_t n = plan.size();
  if (a.size() != n) throw Error(ErrorCode::range_error, "brute-force DFT needs exactly n coefficients");
  const std::uint64_t p = plan.p();
  std::vector<U> out(n);
  std::uint64_t wi = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t acc = 0, x = 1;
    for (std::size_t j = 0; j < n; ++j) {
      acc = (acc + mulmod_u64(x, a[j], p)) % p;
      x = mulmod_u64(x, wi, p);
    }
    out[i] = static_cast<U>(acc);
    wi = mulmod_u64(wi, plan.omega(), p);
  }
  return out;
}

/// Blocked transform: the input is seen as a lambda x n1 grid with
/// lambda = ceil(l / n1). Columns are transformed as vectors of n1 residues
/// (size n2, root omega^n1), scaled by omega^(j1 [j2]_k2), transposed, and
/// transformed again as vectors of lambda residues (size n1, root omega^n2).
/// Returns all lambda * n1 evaluations in the order of tft.
template <Word U>
EvalVector<U> blocked_tft(std::span<const U> a, std::size_t l, const TftPlan<U>& plan, OpCounter* ops = nullptr) {
  const std::size_t n1 = plan.n1();
  if (l > plan.size() || l < n1)
    throw Error(ErrorCode::range_error,
                "blocked transform needs n1=" + std::to_string(n1) + " <= l <= n, got l=" + std::to_string(l));
  const std::size_t lambda = (l + n1 - 1) / n1;
  const std::size_t total = lambda * n1;
  const unsigned k2 = static_cast<unsigned>(std::countr_zero(plan.n2()));

  // Step 1 may use rows up to bit_ceil(lambda) as scratch.
  const std::size_t rows = ntt_detail::transform_size(lambda);
  simd::AlignedVector<U> grid(rows * n1, U{0});
  std::copy_n(a.begin(), std::min(a.size(), l), grid.begin());

  // Step 1: lambda evaluations of the size-n2 transform over rows.
  ntt_detail::Engine<U>(plan, n1, ops).forward(grid.data(), rows, 0, lambda, lambda);

  // Step 2: row j2 times omega^(j1 [j2]_k2).
  const U p = plan.p();
  std::vector<U> powers(n1);
  for (std::size_t j2 = 0; j2 < lambda; ++j2) {
    const U base = static_cast<U>(powmod_u64(plan.omega(), bit_mirror(j2, k2), p));
    U x = 1 % p;
    for (std::size_t j1 = 0; j1 < n1; ++j1) {
      powers[j1] = x;
      x = mul_mod<U>(x, base, plan.barrett());
    }
    std::span<U> row(grid.data() + j2 * n1, n1);
    simd::mul_mod_batch<U>(row, row, powers, plan.barrett());
  }
  if (ops != nullptr) ops->muls += 2 * total;

  // Step 3: size-n1 transforms over vectors of lambda residues.
  simd::AlignedVector<U> columns(total);
  transpose_blocked<U>(std::span<const U>(grid.data(), total), lambda, n1, std::span<U>(columns));
  ntt_detail::Engine<U>(plan, lambda, ops).forward_full(columns.data(), n1, 0);
  transpose_blocked<U>(columns, n1, lambda, std::span<U>(grid.data(), total));

  return {std::vector<U>(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(total)), Ordering::bitrev_evaluation};
}

extern template class TftPlan<std::uint32_t>;
extern template class TftPlan<std::uint64_t>;

}  // namespace lanemod

#endif  // LANEMOD_NTT_HPP
