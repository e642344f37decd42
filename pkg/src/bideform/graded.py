"""Graded vector spaces, degree-shifted maps between them, tensor powers.

A ``GradedSpace`` is an ordered, degree-labelled basis; the global index
enumerates basis vectors sorted by (degree, position within the degree).
``GradedMap`` stores sparse columns keyed by global indices and enforces its
degree shift entry-by-entry: a shift-d map may only connect source degree n
to target degree n + d, so maps whose shift admits no target component are
simply zero.
"""

from __future__ import annotations

from .errors import (
    DimensionMismatchError,
    FieldMismatchError,
    GradingError,
    MalformedBialgebraError,
)
from .fields import Field

__all__ = [
    "GradedSpace",
    "TensorPower",
    "GradedMap",
    "tensor_power",
    "tensor_map",
    "flip_23",
    "augmentation_split",
]


class GradedSpace:
    """Finite-dimensional graded space with an ordered, degree-labelled basis."""

    def __init__(self, components):
        comps = []
        last = None
        for degree, labels in components:
            labels = tuple(labels)
            if not labels:
                continue
            if last is not None and degree <= last:
                raise GradingError("component degrees must be strictly increasing")
            if degree < 0:
                raise GradingError("negative degrees are not supported")
            last = degree
            comps.append((degree, labels))
        self.components = tuple(comps)
        labels = []
        degrees = []
        offsets = {}
        for degree, comp_labels in self.components:
            offsets[degree] = len(labels)
            labels.extend(comp_labels)
            degrees.extend([degree] * len(comp_labels))
        self.labels = tuple(labels)
        self.degrees = tuple(degrees)
        self._offsets = offsets
        if len(set(self.labels)) != len(self.labels):
            raise GradingError("basis labels must be globally unique")
        self._index = {label: i for i, label in enumerate(self.labels)}
        self._tensor_cache = {}

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def top_degree(self) -> int:
        return self.components[-1][0] if self.components else 0

    def degree_of(self, i: int) -> int:
        return self.degrees[i]

    def index_of(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def component_labels(self, degree: int):
        for d, labels in self.components:
            if d == degree:
                return labels
        return ()

    def component_dim(self, degree: int) -> int:
        return len(self.component_labels(degree))

    def component_offset(self, degree: int) -> int:
        return self._offsets.get(degree, 0)

    def component_indices(self, degree: int):
        off = self._offsets.get(degree)
        if off is None:
            return range(0)
        return range(off, off + self.component_dim(degree))

    def degree_signature(self):
        return tuple((d, len(labels)) for d, labels in self.components)

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        sig = ", ".join(f"{d}:{len(ls)}" for d, ls in self.components)
        return f"GradedSpace({sig or 'zero'})"


class TensorPower(GradedSpace):
    """q-th tensor power of a graded space.

    Basis vectors are q-tuples of base labels; within each total degree the
    tuples are ordered lexicographically by the base global indices, and the
    packed code of a tuple (base-dim digits, most significant first) is kept
    alongside the global index for kernel interchange.
    """

    def __init__(self, base: GradedSpace, exponent: int):
        if exponent < 1:
            raise DimensionMismatchError("tensor exponent must be >= 1")
        self.base = base
        self.exponent = exponent
        n = base.dim
        degs = base.degrees
        blabels = base.labels
        buckets = {}
        # Lexicographic enumeration of digit tuples == increasing code order.
        codes_by_degree = {}
        if n > 0:
            total = n**exponent
            for code in range(total):
                c = code
                degree = 0
                for _ in range(exponent):
                    degree += degs[c % n]
                    c //= n
                codes_by_degree.setdefault(degree, []).append(code)
        for degree in sorted(codes_by_degree):
            labs = []
            for code in codes_by_degree[degree]:
                c = code
                tup = [None] * exponent
                for k in range(exponent - 1, -1, -1):
                    tup[k] = blabels[c % n]
                    c //= n
                labs.append(tuple(tup))
            buckets[degree] = labs
        super().__init__(sorted(buckets.items()))
        code_to_global = [0] * (n**exponent if n else 0)
        global_to_code = [0] * self.dim
        g = 0
        for degree in sorted(codes_by_degree):
            for code in codes_by_degree[degree]:
                code_to_global[code] = g
                global_to_code[g] = code
                g += 1
        self.code_to_global = tuple(code_to_global)
        self.global_to_code = tuple(global_to_code)

    def __repr__(self):
        return f"TensorPower({self.base!r}, {self.exponent})"


def tensor_power(space: GradedSpace, exponent: int) -> TensorPower:
    """Cached construction of the exponent-th tensor power."""
    cached = space._tensor_cache.get(exponent)
    if cached is None:
        cached = space._tensor_cache[exponent] = TensorPower(space, exponent)
    return cached


def _base_and_exponent(space: GradedSpace):
    if isinstance(space, TensorPower):
        return space.base, space.exponent
    return space, 1


def _codes_of(space: GradedSpace):
    """(global_to_code, code_to_global) for a space viewed as a power."""
    if isinstance(space, TensorPower):
        return space.global_to_code, space.code_to_global
    ident = tuple(range(space.dim))
    return ident, ident


class GradedMap:
    """Degree-homogeneous linear map between graded spaces, stored as sparse
    columns over global indices."""

    __slots__ = ("source", "target", "degree", "field", "cols")

    def __init__(self, source, target, degree, field: Field, cols=None):
        self.source = source
        self.target = target
        self.degree = degree
        self.field = field
        clean = {}
        if cols:
            for j, col in cols.items():
                want = source.degree_of(j) + degree
                newcol = {}
                for i, v in col.items():
                    v = field.check(v)
                    if not v:
                        continue
                    if target.degree_of(i) != want:
                        raise GradingError(
                            f"entry ({i},{j}) violates degree shift {degree}"
                        )
                    newcol[i] = v
                if newcol:
                    clean[j] = newcol
        self.cols = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, source, target, degree, field):
        return cls(source, target, degree, field, None)

    @classmethod
    def identity(cls, space, field):
        one = field.one
        return cls(space, space, 0, field, {j: {j: one} for j in range(space.dim)})

    @classmethod
    def from_entries(cls, source, target, degree, field, entries):
        """entries: iterable of (target_index, source_index, scalar)."""
        cols = {}
        for i, j, v in entries:
            col = cols.setdefault(j, {})
            col[i] = field.add(col.get(i, field.zero), field.check(v))
        return cls(source, target, degree, field, cols)

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.cols

    def entry(self, i: int, j: int):
        return self.cols.get(j, {}).get(i, self.field.zero)

    def column(self, j: int) -> dict:
        return dict(self.cols.get(j, {}))

    def entries(self):
        for j, col in sorted(self.cols.items()):
            for i, v in sorted(col.items()):
                yield i, j, v

    def block(self, source_degree: int):
        """Dense matrix of the block source_degree -> source_degree + shift."""
        from .linalg import Matrix

        tgt = self.target.component_indices(source_degree + self.degree)
        src = self.source.component_indices(source_degree)
        toff = self.target.component_offset(source_degree + self.degree)
        soff = self.source.component_offset(source_degree)
        zero = self.field.zero
        rows = [[zero] * len(src) for _ in tgt]
        for j in src:
            for i, v in self.cols.get(j, {}).items():
                rows[i - toff][j - soff] = v
        return Matrix(self.field, rows, len(src))

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.degree == other.degree
            and self.field == other.field
            and self.source.degree_signature() == other.source.degree_signature()
            and self.target.degree_signature() == other.target.degree_signature()
            and self.cols == other.cols
        )

    def __hash__(self):
        return hash(
            (
                self.degree,
                self.source.degree_signature(),
                self.target.degree_signature(),
                tuple(sorted((j, tuple(sorted(c.items()))) for j, c in self.cols.items())),
            )
        )

    def __repr__(self):
        return (
            f"GradedMap(shift={self.degree}, nnz={sum(len(c) for c in self.cols.values())})"
        )

    # -- algebra -------------------------------------------------------------

    def _check_parallel(self, other):
        if self.field != other.field:
            raise FieldMismatchError("maps over different fields")
        if self.degree != other.degree:
            raise GradingError("maps of different degree shifts")
        if (
            self.source.degree_signature() != other.source.degree_signature()
            or self.target.degree_signature() != other.target.degree_signature()
        ):
            raise DimensionMismatchError("maps between different spaces")

    def __add__(self, other):
        self._check_parallel(other)
        f = self.field
        cols = {j: dict(col) for j, col in self.cols.items()}
        for j, col in other.cols.items():
            dst = cols.setdefault(j, {})
            for i, v in col.items():
                dst[i] = f.add(dst.get(i, f.zero), v)
        return GradedMap(self.source, self.target, self.degree, f, cols)

    def __sub__(self, other):
        return self + other.scale(self.field.neg(self.field.one))

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one))

    def scale(self, c):
        f = self.field
        c = f.check(c)
        if not c:
            return GradedMap.zero(self.source, self.target, self.degree, f)
        cols = {
            j: {i: f.mul(c, v) for i, v in col.items()} for j, col in self.cols.items()
        }
        return GradedMap(self.source, self.target, self.degree, f, cols)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self ∘ other (apply ``other`` first)."""
        if self.field != other.field:
            raise FieldMismatchError("maps over different fields")
        if other.target.degree_signature() != self.source.degree_signature():
            raise DimensionMismatchError("composition shape mismatch")
        f = self.field
        cols = {}
        for j, col in other.cols.items():
            acc = {}
            for k, v in col.items():
                inner = self.cols.get(k)
                if not inner:
                    continue
                for i, w in inner.items():
                    acc[i] = f.add(acc.get(i, f.zero), f.mul(v, w))
            acc = {i: v for i, v in acc.items() if v}
            if acc:
                cols[j] = acc
        return GradedMap(other.source, self.target, self.degree + other.degree, f, cols)

    def __matmul__(self, other):
        return self.compose(other)

    def apply(self, vec: dict) -> dict:
        """Apply to a sparse vector {source_index: scalar}."""
        f = self.field
        out = {}
        for j, v in vec.items():
            col = self.cols.get(j)
            if not col:
                continue
            for i, w in col.items():
                out[i] = f.add(out.get(i, f.zero), f.mul(v, w))
        return {i: v for i, v in out.items() if v}


def tensor_map(fs) -> GradedMap:
    """Tensor product of graded maps over powers of one common base space.

    The Kronecker block structure follows the tuple-basis ordering of
    ``TensorPower``; the degree shift is the sum of the factors' shifts.
    """
    fs = list(fs)
    if not fs:
        raise DimensionMismatchError("tensor_map of no factors")
    field = fs[0].field
    src_base, _ = _base_and_exponent(fs[0].source)
    tgt_base, _ = _base_and_exponent(fs[0].target)
    src_exps = []
    tgt_exps = []
    for f in fs:
        if f.field != field:
            raise FieldMismatchError("tensor factors over different fields")
        sb, se = _base_and_exponent(f.source)
        tb, te = _base_and_exponent(f.target)
        if sb != src_base or tb != tgt_base:
            raise DimensionMismatchError(
                "tensor_map factors must live over a common base space"
            )
        src_exps.append(se)
        tgt_exps.append(te)
    source = tensor_power(src_base, sum(src_exps))
    target = tensor_power(tgt_base, sum(tgt_exps))
    degree = sum(f.degree for f in fs)
    ns, nt = src_base.dim, tgt_base.dim
    src_codes = [_codes_of(f.source)[0] for f in fs]
    tgt_codes = [_codes_of(f.target)[0] for f in fs]
    c2g_src = source.code_to_global
    c2g_tgt = target.code_to_global

    cols = {}

    def rec(k, scode, tcode, coeff):
        if k == len(fs):
            col = cols.setdefault(c2g_src[scode], {})
            gi = c2g_tgt[tcode]
            col[gi] = field.add(col.get(gi, field.zero), coeff)
            return
        f = fs[k]
        sshift = ns ** src_exps[k]
        tshift = nt ** tgt_exps[k]
        for j, fcol in f.cols.items():
            sc = scode * sshift + src_codes[k][j]
            for i, v in fcol.items():
                rec(k + 1, sc, tcode * tshift + tgt_codes[k][i], field.mul(coeff, v))

    rec(0, 0, 0, field.one)
    return GradedMap(source, target, degree, field, cols)


def flip_23(space: TensorPower, field: Field) -> GradedMap:
    """The degree-0 involution swapping the middle factors of a 4-fold power."""
    if not isinstance(space, TensorPower) or space.exponent != 4:
        raise DimensionMismatchError("flip_23 requires a tensor power of exponent 4")
    n = space.base.dim
    g2c = space.global_to_code
    c2g = space.code_to_global
    one = field.one
    cols = {}
    n2, n3 = n * n, n * n * n
    for j in range(space.dim):
        code = g2c[j]
        d1, r = divmod(code, n3)
        d2, r = divmod(r, n2)
        d3, d4 = divmod(r, n)
        flipped = d1 * n3 + d3 * n2 + d2 * n + d4
        cols[j] = {c2g[flipped]: one}
    return GradedMap(space, space, 0, field, cols)


def augmentation_split(bialgebra):
    """Split off the augmentation ideal of a graded bialgebra.

    Returns ``(m_space, include, project)`` where the ideal's basis is the
    image under b - eps(b)·1 of the non-unit basis vectors, ``include`` is
    the inclusion into the ambient space and ``project`` the corresponding
    projection; project∘include is the identity and include∘project equals
    id - unit∘counit.
    """
    space = bialgebra.space
    field = bialgebra.field
    unit = bialgebra.unit_index
    eps = bialgebra.counit
    if space.degree_of(unit) != 0:
        raise MalformedBialgebraError("unit basis vector must have degree 0")
    if eps[unit] != field.one:
        raise MalformedBialgebraError("counit must send the unit to 1")

    labels_by_degree = {}
    m_to_b = []
    for i, label in enumerate(space.labels):
        if i == unit:
            continue
        e = eps[i]
        if not e:
            m_label = label
        elif e == field.one:
            m_label = f"{label}-1"
        else:
            m_label = f"{label}-({field.format(e)})1"
        labels_by_degree.setdefault(space.degree_of(i), []).append(m_label)
        m_to_b.append(i)
    # Disambiguate in the unlikely case a derived label collides.
    seen = set()
    for degree in labels_by_degree:
        fixed = []
        for lab in labels_by_degree[degree]:
            while lab in seen:
                lab = lab + "'"
            seen.add(lab)
            fixed.append(lab)
        labels_by_degree[degree] = fixed

    m_space = GradedSpace(sorted(labels_by_degree.items()))
    include_cols = {}
    project_cols = {}
    one = field.one
    for m_idx, b_idx in enumerate(m_to_b):
        e = eps[b_idx]
        col = {b_idx: one}
        if e:
            col[unit] = field.neg(e)
        include_cols[m_idx] = col
        project_cols[b_idx] = {m_idx: one}
    include = GradedMap(m_space, space, 0, field, include_cols)
    project = GradedMap(space, m_space, 0, field, project_cols)
    return m_space, include, project
