// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_MODCORE_HPP
#define LANEMOD_MODCORE_HPP

#include "lanemod/barrett.hpp"
#include "lanemod/error.hpp"
#include "lanemod/float_mod.hpp"
#include "lanemod/modsum.hpp"
#include "lanemod/montgomery.hpp"
#include "lanemod/word.hpp"

#endif  // LANEMOD_MODCORE_HPP
