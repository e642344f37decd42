import random
from fractions import Fraction

import pytest

from bideform import builtin_example
from bideform.errors import DimensionMismatchError, GradingError
from bideform.fields import GF, QQ
from bideform.graded import (
    GradedMap,
    GradedSpace,
    augmentation_split,
    flip_23,
    tensor_map,
    tensor_power,
)


def test_space_invariants():
    s = GradedSpace([(0, ["a"]), (2, ["b", "c"])])
    assert s.dim == 3
    assert s.top_degree == 2
    assert s.degrees == (0, 2, 2)
    with pytest.raises(GradingError):
        GradedSpace([(1, ["a"]), (0, ["b"])])
    with pytest.raises(GradingError):
        GradedSpace([(0, ["a", "a"])])


def test_zero_space_top_degree():
    assert GradedSpace([]).top_degree == 0
    assert GradedSpace([]).dim == 0


def test_graded_map_degree_enforced():
    s = GradedSpace([(0, ["a"]), (1, ["b"])])
    GradedMap(s, s, -1, QQ, {1: {0: 1}})  # b -> a is degree -1
    with pytest.raises(GradingError):
        GradedMap(s, s, -1, QQ, {0: {1: 1}})


def test_negative_shift_without_targets_is_zero_map():
    s = GradedSpace([(0, ["a"])])
    m = GradedMap.zero(s, s, -3, QQ)
    assert m.is_zero()


def test_tensor_power_ordering_and_codes():
    s = GradedSpace([(0, ["u"]), (1, ["v"])])
    t = tensor_power(s, 2)
    # degree groups: uu (0), uv & vu (1), vv (2)
    assert t.labels == (("u", "u"), ("u", "v"), ("v", "u"), ("v", "v"))
    assert t.degrees == (0, 1, 1, 2)
    for g, code in enumerate(t.global_to_code):
        assert t.code_to_global[code] == g


def _random_map(rng, src, tgt, degree, field):
    cols = {}
    for j in range(src.dim):
        want = src.degree_of(j) + degree
        hits = [i for i in range(tgt.dim) if tgt.degree_of(i) == want]
        for i in hits:
            if rng.random() < 0.6:
                cols.setdefault(j, {})[i] = field.check(rng.randint(-3, 3))
    return GradedMap(src, tgt, degree, field, cols)


def test_tensor_map_functorial():
    rng = random.Random(11)
    s = GradedSpace([(0, ["a"]), (1, ["b", "c"])])
    for _ in range(10):
        f1 = _random_map(rng, s, s, 0, QQ)
        f2 = _random_map(rng, s, s, -1, QQ)
        g1 = _random_map(rng, s, s, -1, QQ)
        g2 = _random_map(rng, s, s, 0, QQ)
        lhs = tensor_map([f1 @ g1, f2 @ g2])
        rhs = tensor_map([f1, f2]) @ tensor_map([g1, g2])
        assert lhs == rhs


def test_tensor_of_identities_is_identity():
    s = GradedSpace([(0, ["a"]), (1, ["b"])])
    ident = GradedMap.identity(s, QQ)
    t2 = tensor_map([ident, ident])
    assert t2 == GradedMap.identity(tensor_power(s, 2), QQ)


def test_tensor_with_zero_is_zero():
    s = GradedSpace([(0, ["a"]), (1, ["b"])])
    ident = GradedMap.identity(s, QQ)
    z = GradedMap.zero(s, s, 0, QQ)
    assert tensor_map([ident, z]).is_zero()


def test_tensor_scalar_blocks():
    # 1x1 blocks multiply: maps a->2a and b->3b tensor to ab -> 6 ab
    s = GradedSpace([(0, ["a"]), (1, ["b"])])
    f = GradedMap(s, s, 0, QQ, {0: {0: 2}, 1: {1: 1}})
    g = GradedMap(s, s, 0, QQ, {0: {0: 3}, 1: {1: 1}})
    t = tensor_map([f, g])
    sq = tensor_power(s, 2)
    j = sq.index_of(("a", "a"))
    assert t.entry(j, j) == Fraction(6)


def test_flip_23():
    s = GradedSpace([(0, ["a"]), (1, ["b"])])
    v4 = tensor_power(s, 4)
    fl = flip_23(v4, QQ)
    j = v4.index_of(("a", "b", "a", "b"))
    i = v4.index_of(("a", "a", "b", "b"))
    assert fl.entry(i, j) == 1
    # involution
    assert fl @ fl == GradedMap.identity(v4, QQ)
    # fixed point with equal middle factors
    k = v4.index_of(("b", "a", "a", "b"))
    assert fl.entry(k, k) == 1
    with pytest.raises(DimensionMismatchError):
        flip_23(tensor_power(s, 3), QQ)


def test_augmentation_split_trivial():
    B = builtin_example("trivial")
    m_space, inc, proj = augmentation_split(B)
    assert m_space.dim == 0
    assert inc.is_zero() and proj.is_zero()


def test_augmentation_split_h4():
    B = builtin_example("taft", n=2, q=-1)
    m_space, inc, proj = augmentation_split(B)
    assert m_space.labels == ("g-1", "x", "gx")
    assert m_space.degrees == (0, 1, 1)
    # project∘include = identity
    assert proj @ inc == GradedMap.identity(m_space, QQ)
    # include∘project = id - unit∘counit on every basis vector
    ip = inc @ proj
    f = B.field
    for i in range(B.dim):
        expected = {i: f.one}
        e = B.counit[i]
        if e:
            expected[B.unit_index] = f.add(expected.get(B.unit_index, f.zero), f.neg(e))
        expected = {k: v for k, v in expected.items() if v}
        assert ip.apply({i: f.one}) == expected


def test_augmentation_split_group_algebra():
    B = builtin_example("group_algebra_cyclic", n=2)
    m_space, _, _ = augmentation_split(B)
    assert m_space.dim == 1
    assert m_space.degrees == (0,)


def test_block_view_respects_shift():
    B = builtin_example("taft", n=2, q=-1)
    m = B.mul_map()
    blk = m.block(1)  # degree-1 part of the square -> degree-1 part of B
    assert blk.nrows == 2  # x, gx
    sq = tensor_power(B.space, 2)
    assert blk.ncols == sq.component_dim(1)
