// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_BIGNAT_HPP
#define LANEMOD_BIGNAT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lanemod {

/// Non-negative integer with little-endian 64-bit limbs. Canonical form has no
/// most significant zero limb; zero has no limbs.
class BigNat {
 public:
  BigNat() = default;
  explicit BigNat(std::uint64_t v);

  static BigNat from_limbs(std::vector<std::uint64_t> limbs);
  /// Lowercase or uppercase hex digits, most significant first, no prefix.
  static BigNat from_hex(std::string_view hex);
  /// Lowercase hex, "0" for zero.
  std::string to_hex() const;

  const std::vector<std::uint64_t>& limbs() const noexcept { return limbs_; }
  std::size_t limb_count() const noexcept { return limbs_.size(); }
  bool is_zero() const noexcept { return limbs_.empty(); }
  std::size_t bit_length() const noexcept;

  /// `width` (<= 64) bits starting at bit `offset`; bits past the end are 0.
  std::uint64_t bits(std::size_t offset, unsigned width) const noexcept;

  friend bool operator==(const BigNat&, const BigNat&) = default;

 private:
  void normalize() noexcept;
  std::vector<std::uint64_t> limbs_;
};

BigNat add(const BigNat& a, const BigNat& b);
/// Quadratic limb product.
BigNat mul_schoolbook(const BigNat& a, const BigNat& b);

/// Accumulates values at arbitrary bit offsets into a limb vector, for
/// Kronecker packing and chunk recombination.
class BitWriter {
 public:
  explicit BitWriter(std::size_t limb_count) : limbs_(limb_count, 0) {}
  /// Adds v << offset; the caller guarantees the region is still zero.
  void put(std::size_t offset, std::uint64_t v);
  BigNat finish() &&;

 private:
  std::vector<std::uint64_t> limbs_;
};

}  // namespace lanemod

#endif  // LANEMOD_BIGNAT_HPP
