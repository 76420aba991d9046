// SPDX-License-Identifier: Apache-2.0

#include "lanemod/bignat.hpp"

#include <bit>

#include "lanemod/error.hpp"
#include "lanemod/word.hpp"

namespace lanemod {

BigNat::BigNat(std::uint64_t v) {
  if (v != 0) limbs_.push_back(v);
}

BigNat BigNat::from_limbs(std::vector<std::uint64_t> limbs) {
  BigNat r;
  r.limbs_ = std::move(limbs);
  r.normalize();
  return r;
}

BigNat BigNat::from_hex(std::string_view hex) {
  if (hex.empty()) throw Error(ErrorCode::parse_error, "empty hex string");
  BigNat r;
  r.limbs_.assign((hex.size() + 15) / 16, 0);
  std::size_t bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    const char ch = *it;
    std::uint64_t digit;
    if (ch >= '0' && ch <= '9') {
      digit = static_cast<std::uint64_t>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      digit = static_cast<std::uint64_t>(ch - 'a' + 10);
    } else if (ch >= 'A' && ch <= 'F') {
      digit = static_cast<std::uint64_t>(ch - 'A' + 10);
    } else {
      throw Error(ErrorCode::parse_error, std::string("invalid hex digit '") + ch + "'");
    }
    r.limbs_[bit / 64] |= digit << (bit % 64);
  }
  r.normalize();
  return r;
}

std::string BigNat::to_hex() const {
  if (limbs_.empty()) return "0";
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(limbs_.size() * 16);
  bool leading = true;
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
    for (int shift = 60; shift >= 0; shift -= 4) {
      const auto d = static_cast<unsigned>((*it >> shift) & 0xF);
      if (leading && d == 0) continue;
      leading = false;
      out.push_back(digits[d]);
    }
  }
  return out;
}

std::size_t BigNat::bit_length() const noexcept {
  if (limbs_.empty()) return 0;
  return 64 * (limbs_.size() - 1) + static_cast<std::size_t>(std::bit_width(limbs_.back()));
}

std::uint64_t BigNat::bits(std::size_t offset, unsigned width) const noexcept {
  const std::size_t idx = offset / 64;
  const unsigned sh = static_cast<unsigned>(offset % 64);
  if (idx >= limbs_.size() || width == 0) return 0;
  std::uint64_t v = limbs_[idx] >> sh;
  if (sh != 0 && idx + 1 < limbs_.size()) v |= limbs_[idx + 1] << (64 - sh);
  return width >= 64 ? v : v & ((std::uint64_t{1} << width) - 1);
}

void BigNat::normalize() noexcept {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigNat add(const BigNat& a, const BigNat& b) {
  const auto& x = a.limb_count() >= b.limb_count() ? a.limbs() : b.limbs();
  const auto& y = a.limb_count() >= b.limb_count() ? b.limbs() : a.limbs();
  std::vector<std::uint64_t> out(x.size() + 1, 0);
  unsigned carry = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const u128 s = static_cast<u128>(x[i]) + (i < y.size() ? y[i] : 0) + carry;
    out[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<unsigned>(s >> 64);
  }
  out[x.size()] = carry;
  return BigNat::from_limbs(std::move(out));
}

BigNat mul_schoolbook(const BigNat& a, const BigNat& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& x = a.limbs();
  const auto& y = b.limbs();
  std::vector<std::uint64_t> out(x.size() + y.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const u128 t = static_cast<u128>(x[i]) * y[j] + out[i + j] + carry;
      out[i + j] = static_cast<std::uint64_t>(t);
      carry = static_cast<std::uint64_t>(t >> 64);
    }
    out[i + y.size()] = carry;
  }
  return BigNat::from_limbs(std::move(out));
}

void BitWriter::put(std::size_t offset, std::uint64_t v) {
  if (v == 0) return;
  const std::size_t idx = offset / 64;
  const unsigned sh = static_cast<unsigned>(offset % 64);
  if (idx >= limbs_.size()) throw Error(ErrorCode::size_overflow, "bit offset past the output buffer");
  limbs_[idx] |= v << sh;
  if (sh != 0) {
    const std::uint64_t spill = v >> (64 - sh);
    if (spill != 0) {
      if (idx + 1 >= limbs_.size()) throw Error(ErrorCode::size_overflow, "bit offset past the output buffer");
      limbs_[idx + 1] |= spill;
    }
  }
}

BigNat BitWriter::finish() && { return BigNat::from_limbs(std::move(limbs_)); }

}  // namespace lanemod
