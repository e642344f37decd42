"""Cross-checks between the compiled kernels and their pure-Python twins."""

import random

import pytest

from bideform import builtin_example
from bideform import _pure
from bideform.cohomology import context_for

speedups = pytest.importorskip("bideform._speedups")


def _random_dmap(ctx, p, q, degree, rng):
    idx = ctx.pair_index(p, q, degree)
    prime = ctx.tab.prime
    dmap = {}
    for scode, tcode in idx.pairs:
        if rng.random() < 0.4:
            dmap.setdefault(scode, {})[tcode] = rng.randrange(1, prime)
    return dmap


@pytest.mark.parametrize(
    "name,kwargs",
    [("taft", dict(n=3, q=2, p=7)), ("restricted_poly", dict(p=3))],
)
def test_delta_kernels_agree(name, kwargs):
    B = builtin_example(name, **kwargs)
    ctx = context_for(B)
    tab = ctx.tab
    rng = random.Random(hash(name) & 0xFFFF)
    for p, q in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)]:
        for degree in (-2, -1, 0):
            dmap = _random_dmap(ctx, p, q, degree, rng)
            if not dmap:
                continue
            c_pure = _pure.embed_map(dmap, p, q, tab)
            c_fast = speedups.embed_map(dmap, p, q, tab)
            assert c_pure == c_fast
            h_pure = _pure.delta_h_apply(c_pure, p, q, tab)
            h_fast = speedups.delta_h_apply(c_fast, p, q, tab)
            assert h_pure == h_fast
            v_pure = _pure.delta_c_apply(c_pure, p, q, tab)
            v_fast = speedups.delta_c_apply(c_fast, p, q, tab)
            assert v_pure == v_fast
            assert _pure.corestrict_map(h_pure, p, q + 1, tab) == speedups.corestrict_map(
                h_fast, p, q + 1, tab
            )
            assert _pure.corestrict_map(v_pure, p + 1, q, tab) == speedups.corestrict_map(
                v_fast, p + 1, q, tab
            )


@pytest.mark.parametrize("p", [2, 3, 7, 101])
def test_elimination_kernels_agree(p):
    rng = random.Random(p)
    for _ in range(30):
        nrows = rng.randrange(1, 7)
        ncols = rng.randrange(1, 7)
        rows = [[rng.randrange(p) for _ in range(ncols)] for _ in range(nrows)]
        r1, piv1 = _pure.rref_mod(rows, p)
        r2, piv2 = speedups.rref_mod(rows, p)
        assert piv1 == list(piv2)
        assert [list(r) for r in r1] == [list(r) for r in r2]
        assert _pure.ff_rank_mod(rows, p) == speedups.ff_rank_mod(rows, p)
        assert len(piv1) == _pure.ff_rank_mod(rows, p)


def test_backend_flag_reports():
    from bideform import _kernel

    assert _kernel.BACKEND in ("compiled", "pure")
