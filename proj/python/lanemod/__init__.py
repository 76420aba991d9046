# SPDX-License-Identifier: Apache-2.0
"""Lane-parallel modular arithmetic, NTTs and big-integer products."""

from ._core import (
    LanemodError,
    add_mod,
    add_mod_batch,
    int_mul,
    int_mul_fft,
    itft,
    mont_mul,
    mul_mod,
    mul_mod_batch,
    mul_mod_fixed,
    mul_mod_fma,
    neg_mod,
    poly_mul,
    selftest,
    sub_mod,
    sub_mod_batch,
    tft,
    verify_goldens,
)

__all__ = [
    "LanemodError",
    "add_mod",
    "add_mod_batch",
    "int_mul",
    "int_mul_fft",
    "itft",
    "mont_mul",
    "mul_mod",
    "mul_mod_batch",
    "mul_mod_fixed",
    "mul_mod_fma",
    "neg_mod",
    "poly_mul",
    "selftest",
    "sub_mod",
    "sub_mod_batch",
    "tft",
    "verify_goldens",
]
