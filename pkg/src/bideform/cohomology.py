"""The graded, normalized bialgebra-cohomology bicomplex.

Cochains of bidegree (p, q) and internal degree l are homogeneous maps from
the q-th tensor power of the augmentation ideal to its p-th tensor power.
Both differentials are computed in full tensor coordinates after embedding
(every output slot b becomes b - eps(b)·1, unit input slots are killed) and
then corestricted back; the corestriction asserts the closure criteria --
unit-bearing columns carry nothing and every single-slot counit contraction
of the output vanishes -- so closure of the normalized subcomplex is checked
on every single differential application rather than assumed.

The total complex groups the bidegrees with p + q = n + 1; its differential
acts on the (p, q) summand as delta_h into (p, q+1) plus (-1)^q delta_c
into (p+1, q).  The degree-3 cocycle conditions used elsewhere (obstruction
theory) are exactly kernel membership for this total differential.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernel
from .bialgebra import GradedBialgebra
from .errors import (
    BoundExceededError,
    GradingError,
    InternalInvariantError,
    ParseError,
)
from .graded import GradedMap, tensor_power
from .linalg import Matrix

__all__ = [
    "DEFAULT_BOUND",
    "Cochain",
    "TotalCochain",
    "CohomologyResult",
    "StructuralMaps",
    "structural_maps",
    "delta_h",
    "delta_c",
    "total_differential",
    "zero_total_cochain",
    "cochain_basis",
    "cohomology",
    "degree_window",
    "parse_total_cochain",
    "emit_total_cochain",
]

DEFAULT_BOUND = 5


# --------------------------------------------------------------------------
# cochain containers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Cochain:
    """Element of the (p, q) cochain space of internal degree ``degree``;
    ``map`` sends the q-th tensor power of the augmentation ideal to the
    p-th."""

    bialgebra: GradedBialgebra
    p: int
    q: int
    degree: int
    map: GradedMap

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise GradingError("cochain bidegrees must satisfy p, q >= 1")
        if self.map.degree != self.degree:
            raise GradingError("cochain map has the wrong degree shift")

    def is_zero(self) -> bool:
        return self.map.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and (self.p, self.q, self.degree) == (other.p, other.q, other.degree)
            and self.map == other.map
        )


@dataclass(frozen=True)
class TotalCochain:
    """Element of the degree-l total cochain group at level n: one (p, q)
    part for each p + q = n + 1, ordered by increasing q."""

    bialgebra: GradedBialgebra
    n: int
    degree: int
    parts: tuple

    def __post_init__(self):
        if self.n < 1:
            raise GradingError("total cochains start at level 1")
        if len(self.parts) != self.n:
            raise GradingError(f"level-{self.n} total cochain needs {self.n} parts")
        for q0, part in enumerate(self.parts):
            if (part.p, part.q) != (self.n + 1 - (q0 + 1), q0 + 1):
                raise GradingError("total cochain parts out of order")
            if part.degree != self.degree:
                raise GradingError("total cochain parts of mixed degree")

    def part(self, p: int, q: int) -> Cochain:
        if p + q != self.n + 1:
            raise KeyError((p, q))
        return self.parts[q - 1]

    def is_zero(self) -> bool:
        return all(part.is_zero() for part in self.parts)

    def __eq__(self, other):
        return (
            isinstance(other, TotalCochain)
            and (self.n, self.degree) == (other.n, other.degree)
            and self.parts == other.parts
        )

    def __add__(self, other):
        if (self.n, self.degree) != (other.n, other.degree):
            raise GradingError("total cochain addition shape mismatch")
        parts = tuple(
            Cochain(self.bialgebra, a.p, a.q, a.degree, a.map + b.map)
            for a, b in zip(self.parts, other.parts)
        )
        return TotalCochain(self.bialgebra, self.n, self.degree, parts)

    def __sub__(self, other):
        return self + other.scale(self.bialgebra.field.neg(self.bialgebra.field.one))

    def scale(self, c):
        parts = tuple(
            Cochain(self.bialgebra, a.p, a.q, a.degree, a.map.scale(c))
            for a in self.parts
        )
        return TotalCochain(self.bialgebra, self.n, self.degree, parts)


@dataclass(frozen=True)
class CohomologyResult:
    """Dimension data and canonical representatives for one (n, l)."""

    bialgebra: GradedBialgebra
    n: int
    degree: int
    dim_cocycles: int
    dim_coboundaries: int
    dimension: int
    representatives: tuple

    def to_dict(self):
        return {
            "n": self.n,
            "degree": self.degree,
            "dim_cocycles": self.dim_cocycles,
            "dim_coboundaries": self.dim_coboundaries,
            "dimension": self.dimension,
        }


# --------------------------------------------------------------------------
# per-bialgebra computation context
# --------------------------------------------------------------------------


class _PairIndex:
    """Coordinates of one (p, q, l) cochain space.

    Basis vectors are admissible (source tuple, target tuple) pairs in
    source-major order; tuples are packed codes over the ambient basis with
    only non-unit digits.
    """

    __slots__ = ("p", "q", "degree", "dim", "pairs", "offsets", "target_rel", "target_lists")

    def __init__(self, ctx, p, q, degree):
        self.p = p
        self.q = q
        self.degree = degree
        src = ctx.m_tuples(q)
        tgt = ctx.m_tuples(p)
        self.target_rel = {}
        self.target_lists = {}
        pairs = []
        offsets = {}
        for d in sorted(src):
            td = d + degree
            tlist = tgt.get(td)
            if not tlist:
                continue
            rel = ctx.m_tuple_rel(p).get(td)
            for scode in src[d]:
                offsets[scode] = len(pairs)
                self.target_rel[scode] = rel
                self.target_lists[scode] = tlist
                for tcode in tlist:
                    pairs.append((scode, tcode))
        self.pairs = pairs
        self.offsets = offsets
        self.dim = len(pairs)

    def position(self, scode, tcode):
        off = self.offsets.get(scode)
        if off is None:
            raise KeyError(scode)
        return off + self.target_rel[scode][tcode]

    def expand(self, dmap) -> dict:
        """Sparse coordinates {position: scalar} of a code-level map."""
        out = {}
        for scode, vec in dmap.items():
            off = self.offsets.get(scode)
            if off is None:
                raise InternalInvariantError(
                    "differential output leaves the admissible degree window"
                )
            rel = self.target_rel[scode]
            for tcode, v in vec.items():
                pos = rel.get(tcode)
                if pos is None:
                    raise InternalInvariantError(
                        "differential output violates the degree shift"
                    )
                out[off + pos] = v
        return out

    def unpack(self, coords) -> dict:
        """Inverse of expand; ``coords`` maps positions to scalars."""
        dmap = {}
        for pos, v in coords.items():
            if not v:
                continue
            scode, tcode = self.pairs[pos]
            dmap.setdefault(scode, {})[tcode] = v
        return dmap


class _Assembled:
    """A differential matrix in pair coordinates, stored column-sparse."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows, ncols):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = [dict() for _ in range(ncols)]

    def dense_rows(self, field):
        zero = field.zero
        rows = [[zero] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def apply(self, coords, field):
        out = {}
        for j, v in coords.items():
            if not v:
                continue
            for i, w in self.cols[j].items():
                out[i] = field.add(out.get(i, field.zero), field.mul(v, w))
        return {i: v for i, v in out.items() if v}


class _Context:
    """Cached tensor bookkeeping, assembled differentials and reductions."""

    def __init__(self, B: GradedBialgebra):
        self.B = B
        self.field = B.field
        self.tab = B.tables()
        self.m_space, self.include, self.project = B.splitting()
        n = B.dim
        unit = B.unit_index
        self._nonunit = tuple(i for i in range(n) if i != unit)
        self._b_to_m = {}
        for m_idx, b_idx in enumerate(self._nonunit):
            self._b_to_m[b_idx] = m_idx
        self._m_tuples = {}
        self._m_tuple_rel = {}
        self._pair_index = {}
        self._delta_matrix = {}
        self._total_matrix = {}
        self._image_rref = {}

    # -- tuple enumeration --------------------------------------------------

    def m_tuples(self, k):
        """{degree: [codes]} of k-tuples over non-unit basis digits, codes
        ascending (== lexicographic in basis indices)."""
        cached = self._m_tuples.get(k)
        if cached is not None:
            return cached
        n = self.B.dim
        degs = self.B.space.degrees
        buckets = {}
        codes = [0]
        degsum = [0]
        for _ in range(k):
            new_codes = []
            new_degs = []
            for code, dsum in zip(codes, degsum):
                base = code * n
                for b in self._nonunit:
                    new_codes.append(base + b)
                    new_degs.append(dsum + degs[b])
            codes, degsum = new_codes, new_degs
        for code, d in zip(codes, degsum):
            buckets.setdefault(d, []).append(code)
        for d in buckets:
            buckets[d].sort()
        self._m_tuples[k] = buckets
        return buckets

    def m_tuple_rel(self, k):
        """{degree: {code: position within the degree component}}."""
        cached = self._m_tuple_rel.get(k)
        if cached is not None:
            return cached
        rel = {
            d: {code: i for i, code in enumerate(codes)}
            for d, codes in self.m_tuples(k).items()
        }
        self._m_tuple_rel[k] = rel
        return rel

    # -- pair coordinates -----------------------------------------------------

    def pair_index(self, p, q, degree) -> _PairIndex:
        key = (p, q, degree)
        idx = self._pair_index.get(key)
        if idx is None:
            idx = self._pair_index[key] = _PairIndex(self, p, q, degree)
        return idx

    def total_parts(self, n):
        """The (p, q) parts of level n, by increasing q."""
        return [(n + 1 - q, q) for q in range(1, n + 1)]

    def total_dims(self, n, degree):
        return [self.pair_index(p, q, degree).dim for p, q in self.total_parts(n)]

    # -- graded-map conversion -------------------------------------------------

    def dmap_to_graded(self, dmap, p, q, degree) -> GradedMap:
        src = tensor_power(self.m_space, q)
        tgt = tensor_power(self.m_space, p)
        nb = self.B.dim
        nm = self.m_space.dim
        b2m = self._b_to_m

        def translate(code, k):
            out = 0
            digits = []
            c = code
            for _ in range(k):
                digits.append(c % nb)
                c //= nb
            for d in reversed(digits):
                out = out * nm + b2m[d]
            return out

        cols = {}
        for scode, vec in dmap.items():
            j = src.code_to_global[translate(scode, q)]
            cols[j] = {
                tgt.code_to_global[translate(tcode, p)]: v for tcode, v in vec.items()
            }
        return GradedMap(src, tgt, degree, self.field, cols)

    def graded_to_dmap(self, gm: GradedMap, p, q) -> dict:
        src = tensor_power(self.m_space, q)
        tgt = tensor_power(self.m_space, p)
        nb = self.B.dim
        nm = self.m_space.dim
        m2b = self._nonunit

        def translate(code, k):
            out = 0
            digits = []
            c = code
            for _ in range(k):
                digits.append(c % nm)
                c //= nm
            for d in reversed(digits):
                out = out * nb + m2b[d]
            return out

        dmap = {}
        for j, col in gm.cols.items():
            scode = translate(src.global_to_code[j], q)
            dmap[scode] = {
                translate(tgt.global_to_code[i], p): v for i, v in col.items()
            }
        return dmap

    # -- differentials on code-level maps ---------------------------------------

    def delta_h_dmap(self, dmap, p, q):
        cmap = _kernel.embed_map(dmap, p, q, self.tab)
        out = _kernel.delta_h_apply(cmap, p, q, self.tab)
        return _kernel.corestrict_map(out, p, q + 1, self.tab)

    def delta_c_dmap(self, dmap, p, q):
        cmap = _kernel.embed_map(dmap, p, q, self.tab)
        out = _kernel.delta_c_apply(cmap, p, q, self.tab)
        return _kernel.corestrict_map(out, p + 1, q, self.tab)

    # -- assembled matrices -------------------------------------------------------

    def delta_matrix(self, kind, p, q, degree) -> _Assembled:
        """Matrix of delta_h (kind 'h') or delta_c (kind 'c') off (p, q, l)."""
        key = (kind, p, q, degree)
        mat = self._delta_matrix.get(key)
        if mat is not None:
            return mat
        src = self.pair_index(p, q, degree)
        if kind == "h":
            tgt = self.pair_index(p, q + 1, degree)
            apply_delta = self.delta_h_dmap
        else:
            tgt = self.pair_index(p + 1, q, degree)
            apply_delta = self.delta_c_dmap
        mat = _Assembled(tgt.dim, src.dim)
        one = self.field.one
        for idx, (scode, tcode) in enumerate(src.pairs):
            res = apply_delta({scode: {tcode: one}}, p, q)
            if res:
                mat.cols[idx] = tgt.expand(res)
        self._delta_matrix[key] = mat
        return mat

    def total_matrix(self, n, degree) -> _Assembled:
        """Matrix of the level-n total differential in pair coordinates."""
        key = (n, degree)
        mat = self._total_matrix.get(key)
        if mat is not None:
            return mat
        parts_src = self.total_parts(n)
        parts_tgt = self.total_parts(n + 1)
        src_dims = self.total_dims(n, degree)
        tgt_dims = self.total_dims(n + 1, degree)
        src_off = _offsets(src_dims)
        tgt_off = _offsets(tgt_dims)
        tgt_pos = {pq: k for k, pq in enumerate(parts_tgt)}
        mat = _Assembled(sum(tgt_dims), sum(src_dims))
        f = self.field
        neg_one = f.neg(f.one)
        for k, (p, q) in enumerate(parts_src):
            h = self.delta_matrix("h", p, q, degree)
            c = self.delta_matrix("c", p, q, degree)
            h_off = tgt_off[tgt_pos[(p, q + 1)]]
            c_off = tgt_off[tgt_pos[(p + 1, q)]]
            sign = f.one if q % 2 == 0 else neg_one
            base = src_off[k]
            for j in range(h.ncols):
                col = mat.cols[base + j]
                for i, v in h.cols[j].items():
                    col[h_off + i] = f.add(col.get(h_off + i, f.zero), v)
                for i, v in c.cols[j].items():
                    w = f.mul(sign, v)
                    col[c_off + i] = f.add(col.get(c_off + i, f.zero), w)
                dead = [i for i, v in col.items() if not v]
                for i in dead:
                    del col[i]
        self._total_matrix[key] = mat
        return mat

    # -- total cochain <-> coordinates --------------------------------------------

    def tc_to_coords(self, tc: TotalCochain) -> dict:
        coords = {}
        off = 0
        for part in tc.parts:
            idx = self.pair_index(part.p, part.q, tc.degree)
            dmap = self.graded_to_dmap(part.map, part.p, part.q)
            for pos, v in idx.expand(dmap).items():
                coords[off + pos] = v
            off += idx.dim
        return coords

    def coords_to_tc(self, n, degree, coords) -> TotalCochain:
        parts = []
        off = 0
        for p, q in self.total_parts(n):
            idx = self.pair_index(p, q, degree)
            local = {}
            for pos, v in coords.items() if isinstance(coords, dict) else enumerate(coords):
                if off <= pos < off + idx.dim and v:
                    local[pos - off] = v
            dmap = idx.unpack(local)
            parts.append(
                Cochain(self.B, p, q, degree, self.dmap_to_graded(dmap, p, q, degree))
            )
            off += idx.dim
        return TotalCochain(self.B, n, degree, tuple(parts))

    # -- reductions ------------------------------------------------------------------

    def image_rref(self, n, degree):
        """RREF rows and pivots spanning the image of the level-(n-1) total
        differential inside the level-n coordinates."""
        key = (n, degree)
        cached = self._image_rref.get(key)
        if cached is not None:
            return cached
        dim_n = sum(self.total_dims(n, degree))
        if n == 1:
            cached = ([], [])
        else:
            prev = self.total_matrix(n - 1, degree)
            rows = []
            zero = self.field.zero
            for col in prev.cols:
                if col:
                    row = [zero] * dim_n
                    for i, v in col.items():
                        row[i] = v
                    rows.append(row)
            cached = _rref_rows(rows, self.field) if rows else ([], [])
        self._image_rref[key] = cached
        return cached

    def reduce_mod_image(self, n, degree, coords_vec):
        """Canonical coset representative of a coordinate vector modulo the
        image of the previous total differential (dense list in/out)."""
        rows, pivots = self.image_rref(n, degree)
        f = self.field
        vec = list(coords_vec)
        for row, c in zip(rows, pivots):
            coeff = vec[c]
            if coeff:
                for j in range(c, len(vec)):
                    if row[j]:
                        vec[j] = f.sub(vec[j], f.mul(coeff, row[j]))
        return vec

    def canonical_class(self, tc: TotalCochain) -> TotalCochain:
        """Canonical representative of the class of a total cocycle."""
        dim = sum(self.total_dims(tc.n, tc.degree))
        vec = [self.field.zero] * dim
        for pos, v in self.tc_to_coords(tc).items():
            vec[pos] = v
        red = self.reduce_mod_image(tc.n, tc.degree, vec)
        return self.coords_to_tc(tc.n, tc.degree, {i: v for i, v in enumerate(red) if v})


def _offsets(dims):
    out = []
    acc = 0
    for d in dims:
        out.append(acc)
        acc += d
    return out


def _rref_rows(rows, field):
    """RREF of a dense list-of-rows; returns (nonzero rows, pivots)."""
    prime = getattr(field, "prime", 0)
    if prime:
        reduced, pivots = _kernel.rref_mod(rows, prime)
    else:
        from .linalg import _rref_field

        reduced, pivots = _rref_field(rows, field)
    return [list(r) for r in reduced[: len(pivots)]], list(pivots)


_context_cache: dict[int, _Context] = {}


def context_for(B: GradedBialgebra) -> _Context:
    ctx = B._caches.get("gs_context")
    if ctx is None:
        ctx = B._caches["gs_context"] = _Context(B)
    return ctx


# --------------------------------------------------------------------------
# structural maps (independent, composition-friendly view)
# --------------------------------------------------------------------------


class StructuralMaps:
    """The contraction maps of the bicomplex as explicit graded maps on
    tensor powers of the ambient bialgebra.

    Built by direct structure-constant contraction; the test suite uses them
    to cross-check the sparse differential kernels by composition.
    """

    def __init__(self, B: GradedBialgebra, bound: int = DEFAULT_BOUND):
        self.B = B
        self.bound = bound
        self._cache = {}

    def _check(self, value, name):
        if value < 1 or value > self.bound:
            raise BoundExceededError(
                f"{name} index {value} outside the configured bound {self.bound}"
            )

    def _power(self, k):
        return tensor_power(self.B.space, k)

    def lam(self, p: int) -> GradedMap:
        """(p+1)-fold tensors to p-fold: comultiply the first factor and
        multiply its legs onto the rest, from the left."""
        self._check(p, "lambda")
        return self._edge("lam", p, on_right=False)

    def rho(self, p: int) -> GradedMap:
        """Dual of lam on the last factor: legs multiply from the right."""
        self._check(p, "rho")
        return self._edge("rho", p, on_right=True)

    def _edge(self, kind, p, on_right):
        key = (kind, p)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        tab = self.B.tables()
        n = self.B.dim
        f = self.B.field
        src = self._power(p + 1)
        tgt = self._power(p)
        cols = {}
        from ._pure import _edge_mul_apply

        for code in range(n ** (p + 1)):
            if on_right:
                rest, b = divmod(code, n)
            else:
                b, rest = divmod(code, n ** p)
            res = _edge_mul_apply(tab, p, b, {rest: f.one}, on_right)
            if res:
                cols[src.code_to_global[code]] = {
                    tgt.code_to_global[c]: v for c, v in res.items()
                }
        gm = GradedMap(src, tgt, 0, f, cols)
        self._cache[key] = gm
        return gm

    def sigma(self, q: int) -> GradedMap:
        """q-fold tensors to (q+1)-fold: the product of all first legs,
        followed by the second legs."""
        self._check(q, "sigma")
        key = ("sigma", q)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        gm = self._coedge(q, head_first=True)
        self._cache[key] = gm
        return gm

    def tau(self, q: int) -> GradedMap:
        """Dual of sigma: first legs, then the product of all second legs."""
        self._check(q, "tau")
        key = ("tau", q)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        gm = self._coedge(q, head_first=False)
        self._cache[key] = gm
        return gm

    def _coedge(self, q, head_first):
        B = self.B
        f = B.field
        n = B.dim
        src = self._power(q)
        tgt = self._power(q + 1)
        cols = {}
        for code in range(n ** q):
            digits = _digits(code, n, q)
            # expand each slot by comultiplication, fold the chosen legs
            terms = [([], None, f.one)]  # (kept legs, product vec, coeff)
            for d in digits:
                new_terms = []
                for kept, prod, coeff in terms:
                    for j, k, c in _comul_terms(B, d):
                        c2 = f.mul(coeff, c)
                        keep, absorb = ((k, j) if head_first else (j, k))
                        if prod is None:
                            nprod = {absorb: f.one}
                        else:
                            nprod = {}
                            for hk, hv in prod.items():
                                for k2, cc in B.mul.get((hk, absorb), {}).items():
                                    nprod[k2] = f.add(
                                        nprod.get(k2, f.zero), f.mul(hv, cc)
                                    )
                            nprod = {k2: v for k2, v in nprod.items() if v}
                            if not nprod:
                                continue
                        new_terms.append((kept + [keep], nprod, c2))
                terms = new_terms
            col = {}
            for kept, prod, coeff in terms:
                kept_code = 0
                for d in kept:
                    kept_code = kept_code * n + d
                for hk, hv in prod.items():
                    if head_first:
                        full = hk * (n ** q) + kept_code
                    else:
                        full = kept_code * n + hk
                    v = f.mul(coeff, hv)
                    col[full] = f.add(col.get(full, f.zero), v)
            col = {c: v for c, v in col.items() if v}
            if col:
                cols[src.code_to_global[code]] = {
                    tgt.code_to_global[c]: v for c, v in col.items()
                }
        return GradedMap(src, tgt, 0, f, cols)

    def comul_in_slot(self, i: int, p: int) -> GradedMap:
        """Apply comultiplication in slot i (1-based) of a p-fold tensor."""
        self._check(p, "comul slot width")
        if not 1 <= i <= p:
            raise BoundExceededError(f"slot {i} outside 1..{p}")
        B = self.B
        f = B.field
        n = B.dim
        src = self._power(p)
        tgt = self._power(p + 1)
        cols = {}
        sh = n ** (p - i)
        for code in range(n ** p):
            head, rem = divmod(code, n * sh)
            d, low = divmod(rem, sh)
            col = {}
            for (j, k), c in B.comul.get(d, {}).items():
                newcode = ((head * n + j) * n + k) * sh + low
                col[newcode] = f.add(col.get(newcode, f.zero), c)
            col = {cc: v for cc, v in col.items() if v}
            if col:
                cols[src.code_to_global[code]] = {
                    tgt.code_to_global[cc]: v for cc, v in col.items()
                }
        return GradedMap(src, tgt, 0, f, cols)

    def mul_in_slot(self, j: int, q: int) -> GradedMap:
        """Multiply slots j, j+1 (1-based) of a (q+1)-fold tensor."""
        self._check(q, "mul slot width")
        if not 1 <= j <= q:
            raise BoundExceededError(f"slot {j} outside 1..{q}")
        B = self.B
        f = B.field
        n = B.dim
        src = self._power(q + 1)
        tgt = self._power(q)
        cols = {}
        sh = n ** (q - j)
        for code in range(n ** (q + 1)):
            head, rem = divmod(code, n * n * sh)
            uv, low = divmod(rem, sh)
            u, v = divmod(uv, n)
            prod = B.mul.get((u, v))
            if not prod:
                continue
            col = {}
            for k, c in prod.items():
                newcode = (head * n + k) * sh + low
                col[newcode] = f.add(col.get(newcode, f.zero), c)
            col = {cc: vv for cc, vv in col.items() if vv}
            if col:
                cols[src.code_to_global[code]] = {
                    tgt.code_to_global[cc]: vv for cc, vv in col.items()
                }
        return GradedMap(src, tgt, 0, f, cols)


def _comul_terms(B, d):
    for (j, k), c in B.comul.get(d, {}).items():
        yield j, k, c


def _digits(code, n, k):
    out = []
    for _ in range(k):
        out.append(code % n)
        code //= n
    out.reverse()
    return out


def structural_maps(B: GradedBialgebra, bound: int = DEFAULT_BOUND) -> StructuralMaps:
    """The contraction-map family of the bicomplex for B."""
    return StructuralMaps(B, bound)


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------


def _check_bound(p, q, bound):
    if p + q > bound:
        raise BoundExceededError(
            f"bidegree ({p}, {q}) exceeds the configured bound p+q <= {bound}"
        )


def cochain_basis(B: GradedBialgebra, p: int, q: int, degree: int, bound: int = DEFAULT_BOUND):
    """Elementary cochains of the (p, q, degree) space, source-major order."""
    if p < 1 or q < 1:
        raise GradingError("cochain bidegrees must satisfy p, q >= 1")
    _check_bound(p, q, bound)
    ctx = context_for(B)
    idx = ctx.pair_index(p, q, degree)
    one = B.field.one
    out = []
    for scode, tcode in idx.pairs:
        gm = ctx.dmap_to_graded({scode: {tcode: one}}, p, q, degree)
        out.append(Cochain(B, p, q, degree, gm))
    return out


def delta_h(c: Cochain, bound: int = DEFAULT_BOUND) -> Cochain:
    """Horizontal differential: (p, q) -> (p, q+1)."""
    _check_bound(c.p, c.q + 1, bound + 1)
    ctx = context_for(c.bialgebra)
    dmap = ctx.graded_to_dmap(c.map, c.p, c.q)
    res = ctx.delta_h_dmap(dmap, c.p, c.q)
    return Cochain(
        c.bialgebra, c.p, c.q + 1, c.degree,
        ctx.dmap_to_graded(res, c.p, c.q + 1, c.degree),
    )


def delta_c(c: Cochain, bound: int = DEFAULT_BOUND) -> Cochain:
    """Vertical differential: (p, q) -> (p+1, q)."""
    _check_bound(c.p + 1, c.q, bound + 1)
    ctx = context_for(c.bialgebra)
    dmap = ctx.graded_to_dmap(c.map, c.p, c.q)
    res = ctx.delta_c_dmap(dmap, c.p, c.q)
    return Cochain(
        c.bialgebra, c.p + 1, c.q, c.degree,
        ctx.dmap_to_graded(res, c.p + 1, c.q, c.degree),
    )


def total_differential(tc: TotalCochain, bound: int = DEFAULT_BOUND) -> TotalCochain:
    """The level-n total differential of a total cochain."""
    B = tc.bialgebra
    f = B.field
    ctx = context_for(B)
    n = tc.n
    acc = {}  # (p, q) -> GradedMap
    for part in tc.parts:
        if part.is_zero():
            continue
        h = delta_h(part, bound)
        key = (h.p, h.q)
        acc[key] = acc[key] + h.map if key in acc else h.map
        cpart = delta_c(part, bound)
        sign = f.one if part.q % 2 == 0 else f.neg(f.one)
        key = (cpart.p, cpart.q)
        signed = cpart.map.scale(sign)
        acc[key] = acc[key] + signed if key in acc else signed
    parts = []
    for p, q in ctx.total_parts(n + 1):
        gm = acc.get((p, q))
        if gm is None:
            src = tensor_power(ctx.m_space, q)
            tgt = tensor_power(ctx.m_space, p)
            gm = GradedMap.zero(src, tgt, tc.degree, f)
        parts.append(Cochain(B, p, q, tc.degree, gm))
    return TotalCochain(B, n + 1, tc.degree, tuple(parts))


def zero_total_cochain(B: GradedBialgebra, n: int, degree: int) -> TotalCochain:
    ctx = context_for(B)
    f = B.field
    parts = []
    for p, q in ctx.total_parts(n):
        src = tensor_power(ctx.m_space, q)
        tgt = tensor_power(ctx.m_space, p)
        parts.append(Cochain(B, p, q, degree, GradedMap.zero(src, tgt, degree, f)))
    return TotalCochain(B, n, degree, tuple(parts))


def cohomology(
    B: GradedBialgebra,
    n: int,
    degree: int,
    bound: int = DEFAULT_BOUND,
    with_representatives: bool = True,
) -> CohomologyResult:
    """Cohomology of the degree-l total complex at level n.

    Kernel and image are computed from the assembled coordinate matrices;
    representatives are canonical (kernel vectors reduced against the image
    row-echelon basis, then re-echelonized).
    """
    if n < 1:
        raise GradingError("cohomology levels start at 1")
    if n + 2 > bound:
        raise BoundExceededError(
            f"level {n} needs bidegrees up to p+q = {n + 2}; raise the bound"
        )
    ctx = context_for(B)
    f = B.field
    dim_n = sum(ctx.total_dims(n, degree))
    if dim_n == 0:
        return CohomologyResult(B, n, degree, 0, 0, 0, ())
    mat = ctx.total_matrix(n, degree)
    dense = Matrix(f, mat.dense_rows(f), mat.ncols) if mat.nrows else Matrix.zeros(f, 1, mat.ncols)
    kernel = dense.kernel_basis()
    rows, pivots = ctx.image_rref(n, degree)
    dim_cob = len(pivots)
    dim_coc = len(kernel)
    dimension = dim_coc - dim_cob
    reps = ()
    if with_representatives and dimension > 0:
        reduced = [ctx.reduce_mod_image(n, degree, v) for v in kernel]
        rrows, rpivots = _rref_rows([list(r) for r in reduced], f)
        reps = tuple(
            ctx.coords_to_tc(n, degree, {i: v for i, v in enumerate(row) if v})
            for row in rrows[: len(rpivots)]
        )
        if len(reps) != dimension:
            raise InternalInvariantError(
                "representative count disagrees with the computed dimension"
            )
    return CohomologyResult(B, n, degree, dim_coc, dim_cob, dimension, reps)


def degree_window(B: GradedBialgebra, n: int) -> list:
    """All degrees l at which the level-n total cochain group is nonzero."""
    ctx = context_for(B)
    dm = ctx.m_space.top_degree
    lo = -(n * dm) - 1
    hi = n * dm + 1
    out = []
    for l in range(lo, hi + 1):
        if sum(ctx.total_dims(n, l)) > 0:
            out.append(l)
    return out


# --------------------------------------------------------------------------
# cochain text format
# --------------------------------------------------------------------------


def _format_tuple(labels):
    return ",".join(labels)


def emit_total_cochain(tc: TotalCochain) -> str:
    """Render a total cochain in the cochain text format, parts by
    increasing q, entries in source-major order."""
    ctx = context_for(tc.bialgebra)
    f = tc.bialgebra.field
    lines = []
    for part in tc.parts:
        lines.append(f"cochain {part.p} {part.q} {part.degree}")
        src = tensor_power(ctx.m_space, part.q)
        tgt = tensor_power(ctx.m_space, part.p)
        entries = []
        for i, j, v in part.map.entries():
            entries.append((j, i, v))
        entries.sort(key=lambda e: (e[0], e[1]))
        for j, i, v in entries:
            slab = _format_tuple(src.labels[j])
            tlab = _format_tuple(tgt.labels[i])
            lines.append(f"{tlab} <- {slab} : {f.format(v)}")
    return "\n".join(lines) + "\n"


def parse_total_cochain(B: GradedBialgebra, text: str) -> TotalCochain:
    """Parse the cochain text format into a total cochain over B."""
    ctx = context_for(B)
    f = B.field
    blocks = {}
    current = None
    n_val = None
    degree = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "cochain":
            if len(tokens) != 4:
                raise ParseError("cochain headers take p q l", lineno)
            try:
                p, q, l = int(tokens[1]), int(tokens[2]), int(tokens[3])
            except ValueError:
                raise ParseError("bad cochain header", lineno) from None
            if p < 1 or q < 1:
                raise ParseError("cochain bidegrees must be >= 1", lineno)
            if degree is None:
                degree = l
            elif degree != l:
                raise ParseError("mixed cochain degrees in one file", lineno)
            if n_val is None:
                n_val = p + q - 1
            elif n_val != p + q - 1:
                raise ParseError("cochain parts of mixed total level", lineno)
            current = blocks.setdefault((p, q), [])
        else:
            if current is None:
                raise ParseError("entry before any cochain header", lineno)
            try:
                left, rest = line.split("<-", 1)
                srcpart, scal = rest.split(":", 1)
            except ValueError:
                raise ParseError("entries look like 'target <- source : scalar'", lineno) from None
            current.append((lineno, left.strip(), srcpart.strip(), scal.strip()))
    if n_val is None:
        raise ParseError("no cochain blocks found")
    parts = []
    for p, q in context_for(B).total_parts(n_val):
        src = tensor_power(ctx.m_space, q)
        tgt = tensor_power(ctx.m_space, p)
        entries = []
        for lineno, tlab, slab, scal in blocks.get((p, q), []):
            try:
                value = f.parse(scal)
            except Exception as exc:
                raise ParseError(str(exc), lineno) from None
            ttuple = tuple(tlab.split(","))
            stuple = tuple(slab.split(","))
            if len(ttuple) != p or len(stuple) != q:
                raise ParseError(
                    f"tuple lengths must be {p} <- {q}", lineno
                )
            try:
                i = tgt.index_of(ttuple)
                j = src.index_of(stuple)
            except KeyError as exc:
                raise ParseError(str(exc), lineno) from None
            entries.append((i, j, value))
        try:
            gm = GradedMap.from_entries(src, tgt, degree, f, entries)
        except GradingError as exc:
            raise ParseError(str(exc)) from None
        parts.append(Cochain(B, p, q, degree, gm))
    return TotalCochain(B, n_val, degree, tuple(parts))
