// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_MODSIMD_HPP
#define LANEMOD_MODSIMD_HPP

#include "lanemod/simd/kernels.hpp"
#include "lanemod/simd/pack.hpp"

#endif  // LANEMOD_MODSIMD_HPP
