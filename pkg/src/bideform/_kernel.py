"""Backend selection for the hot kernels.

At import time we pick the compiled extension (``bideform._speedups``,
built from Cython) when it is available, unless ``BIDEFORM_PURE`` is set to
a non-empty value other than ``0``; otherwise the pure-Python twins from
``bideform._pure`` are used.  Both backends implement identical semantics;
``tests/test_kernel_backends.py`` cross-checks them and
``benchmarks/bench_kernels.py`` compares their speed.

The compiled fast paths cover prime fields small enough that the summed
products fit a 64-bit word; rational scalars and oversized primes always
run the pure implementations.
"""

from __future__ import annotations

import os

from . import _pure
from ._pure import ContractionTables

# p^2 terms are summed in 64-bit words; cap p so that 2*(p-1)^2 < 2^63.
_COMPILED_PRIME_LIMIT = 2**30

_forced_pure = os.environ.get("BIDEFORM_PURE", "").strip() not in ("", "0")
_speedups = None
if not _forced_pure:
    try:
        from . import _speedups as _speedups_mod

        _speedups = _speedups_mod
    except ImportError:
        _speedups = None

BACKEND = "compiled" if _speedups is not None else "pure"


def _use_compiled(prime: int) -> bool:
    return _speedups is not None and 0 < prime < _COMPILED_PRIME_LIMIT


def delta_h_apply(cmap, p, q, tab):
    if _use_compiled(tab.prime):
        return _speedups.delta_h_apply(cmap, p, q, tab)
    return _pure.delta_h_apply(cmap, p, q, tab)


def delta_c_apply(cmap, p, q, tab):
    if _use_compiled(tab.prime):
        return _speedups.delta_c_apply(cmap, p, q, tab)
    return _pure.delta_c_apply(cmap, p, q, tab)


def embed_map(dmap, p, q, tab):
    if _use_compiled(tab.prime):
        return _speedups.embed_map(dmap, p, q, tab)
    return _pure.embed_map(dmap, p, q, tab)


def corestrict_map(cmap, p, q, tab):
    if _use_compiled(tab.prime):
        return _speedups.corestrict_map(cmap, p, q, tab)
    return _pure.corestrict_map(cmap, p, q, tab)


def rref_mod(rows, p):
    if _use_compiled(p) and rows:
        return _speedups.rref_mod(rows, p)
    return _pure.rref_mod(rows, p)


def ff_rank_mod(rows, p):
    if _use_compiled(p) and rows:
        return _speedups.ff_rank_mod(rows, p)
    return _pure.ff_rank_mod(rows, p)


__all__ = [
    "BACKEND",
    "ContractionTables",
    "delta_h_apply",
    "delta_c_apply",
    "embed_map",
    "corestrict_map",
    "rref_mod",
    "ff_rank_mod",
]
