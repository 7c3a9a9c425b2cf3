"""Polynomial and dense-matrix arithmetic over prime fields with
constant-space, cumulative and in-place algorithm variants, executed on an
instrumented register arena that enforces read/write permission models and
measures extra algebraic space and pointer-stack depth."""

from .coeff_ring import DEFAULT_FFT_PRIME, DEFAULT_TEST_PRIME, RootOfUnity, Zq
from .reg_arena import (
    INOUT,
    INPUT_ONLY,
    OUTPUT_ONLY,
    RO_RW,
    RW_RW,
    SCRATCH,
    Arena,
    PolyView,
    build_arena,
    make_view,
)

__all__ = [
    "Zq",
    "RootOfUnity",
    "DEFAULT_TEST_PRIME",
    "DEFAULT_FFT_PRIME",
    "Arena",
    "PolyView",
    "build_arena",
    "make_view",
    "INPUT_ONLY",
    "OUTPUT_ONLY",
    "INOUT",
    "SCRATCH",
    "RO_RW",
    "RW_RW",
]
