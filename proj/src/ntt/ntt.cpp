// SPDX-License-Identifier: Apache-2.0

#include "lanemod/ntt.hpp"

#include <string>

namespace lanemod {

std::size_t bit_mirror(std::size_t i, unsigned k) {
  if (k < 64 && (i >> k) != 0)
    throw Error(ErrorCode::range_error, "index " + std::to_string(i) + " has more than " + std::to_string(k) + " bits");
  std::size_t r = 0;
  for (unsigned b = 0; b < k; ++b) {
    r = (r << 1) | (i & 1);
    i >>= 1;
  }
  return r;
}

template class TftPlan<std::uint32_t>;
template class TftPlan<std::uint64_t>;

}  // namespace lanemod
