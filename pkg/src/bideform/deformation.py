"""Graded bialgebra deformations: verification against the order-by-order
identities, the truncated-ring oracle, classification, obstruction and
extension, trivialization, rigidity, and the lifting decomposition.

A level-l deformation stores homogeneous corrections m_s (degree -s, on the
ambient square) and Delta_s (degree -s, into the square) for 1 <= s <= l;
the counit and unit are never deformed.  Corrections live on the ambient
space; corestriction to normalized-coefficient pairs happens only at the
cohomology boundary, where the normalization identities become the closure
assertions of the corestriction.

Two independent verifiers are provided: ``verify_deformation`` transcribes
the expanded per-order identities, while ``truncated_ring_oracle`` checks
the bialgebra axioms of the truncated polynomial ring directly.  They must
agree check-for-check, including the order of first failure.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernel
from .bialgebra import GradedBialgebra, LiftingTables
from .cohomology import (
    Cochain,
    TotalCochain,
    context_for,
    total_differential,
    zero_total_cochain,
)
from .errors import (
    GradingError,
    InternalInvariantError,
    MalformedDeformationError,
    NotALiftingError,
    ParseError,
)
from .graded import GradedMap, tensor_map, tensor_power
from .linalg import Matrix
from .report import VerificationReport

__all__ = [
    "Deformation",
    "DeformationMorphism",
    "ObstructionClass",
    "ExtensionResult",
    "TrivializationResult",
    "CohomologyClass",
    "verify_deformation",
    "truncated_ring_oracle",
    "restrict",
    "full_level",
    "first_order_class",
    "deformation_from_cocycle",
    "verify_isomorphism",
    "conjugate",
    "obstruction",
    "extend",
    "trivialize",
    "rigidity_check",
    "lifting_decompose",
    "tables_from_deformation",
    "parse_deformation",
    "emit_deformation",
]

CHECK_NAMES = (
    "homogeneity-mul",
    "homogeneity-comul",
    "unit",
    "counit",
    "counit-multiplicativity",
    "comultiplication-of-unit",
    "associativity",
    "compatibility",
    "coassociativity",
)


class Deformation:
    """Level-l graded deformation of a graded bialgebra."""

    def __init__(self, base: GradedBialgebra, level: int, m_corrections, delta_corrections):
        if level < 0:
            raise MalformedDeformationError("levels are non-negative")
        self.base = base
        self.level = level
        m_corrections = tuple(m_corrections)
        delta_corrections = tuple(delta_corrections)
        if len(m_corrections) != level or len(delta_corrections) != level:
            raise MalformedDeformationError(
                f"a level-{level} deformation carries exactly {level} corrections per map"
            )
        sq = tensor_power(base.space, 2)
        for s, gm in enumerate(m_corrections, start=1):
            if gm.source.degree_signature() != sq.degree_signature() or (
                gm.target.degree_signature() != base.space.degree_signature()
            ):
                raise MalformedDeformationError(
                    f"multiplication correction at order {s} has wrong shape"
                )
        for s, gm in enumerate(delta_corrections, start=1):
            if gm.source.degree_signature() != base.space.degree_signature() or (
                gm.target.degree_signature() != sq.degree_signature()
            ):
                raise MalformedDeformationError(
                    f"comultiplication correction at order {s} has wrong shape"
                )
        self.m_corrections = m_corrections
        self.delta_corrections = delta_corrections
        self.base_label = None  # remembered file reference, if parsed

    @classmethod
    def trivial(cls, base: GradedBialgebra, level: int) -> "Deformation":
        sq = tensor_power(base.space, 2)
        f = base.field
        ms = [GradedMap.zero(sq, base.space, -s, f) for s in range(1, level + 1)]
        ds = [GradedMap.zero(base.space, sq, -s, f) for s in range(1, level + 1)]
        return cls(base, level, ms, ds)

    def m_map(self, s: int) -> GradedMap:
        return self.base.mul_map() if s == 0 else self.m_corrections[s - 1]

    def delta_map(self, s: int) -> GradedMap:
        return self.base.comul_map() if s == 0 else self.delta_corrections[s - 1]

    def is_trivial(self) -> bool:
        return all(m.is_zero() for m in self.m_corrections) and all(
            d.is_zero() for d in self.delta_corrections
        )

    def __eq__(self, other):
        return (
            isinstance(other, Deformation)
            and self.base == other.base
            and self.level == other.level
            and self.m_corrections == other.m_corrections
            and self.delta_corrections == other.delta_corrections
        )

    def __repr__(self):
        return f"Deformation(level={self.level}, base={self.base!r})"

    # Code-level views (cached) used by the verifiers.

    def _code_maps(self):
        cached = getattr(self, "_codes", None)
        if cached is None:
            n = self.base.dim
            sq = tensor_power(self.base.space, 2)
            g2c = sq.global_to_code

            def m_codes(gm):
                out = {}
                for j, col in gm.cols.items():
                    out[g2c[j]] = dict(col)
                return out

            def d_codes(gm):
                out = {}
                for j, col in gm.cols.items():
                    out[j] = {g2c[i]: v for i, v in col.items()}
                return out

            mul0 = {i * n + j: dict(col) for (i, j), col in self.base.mul.items()}
            com0 = {
                i: {j * n + k: c for (j, k), c in terms.items()}
                for i, terms in self.base.comul.items()
            }
            cached = (
                [mul0] + [m_codes(gm) for gm in self.m_corrections],
                [com0] + [d_codes(gm) for gm in self.delta_corrections],
            )
            self._codes = cached
        return cached


class DeformationMorphism:
    """phi = Id + sum phi_s t^s with phi_s homogeneous of degree -s."""

    def __init__(self, base: GradedBialgebra, parts):
        self.base = base
        self.parts = tuple(parts)
        for s, gm in enumerate(self.parts, start=1):
            if gm.source.degree_signature() != base.space.degree_signature() or (
                gm.target.degree_signature() != base.space.degree_signature()
            ):
                raise MalformedDeformationError(f"morphism part {s} has wrong shape")

    @property
    def level(self) -> int:
        return len(self.parts)

    @classmethod
    def identity(cls, base: GradedBialgebra, level: int) -> "DeformationMorphism":
        f = base.field
        return cls(
            base,
            [GradedMap.zero(base.space, base.space, -s, f) for s in range(1, level + 1)],
        )

    def part(self, s: int) -> GradedMap:
        if s == 0:
            return GradedMap.identity(self.base.space, self.base.field)
        return self.parts[s - 1]

    def series(self):
        return [self.part(s) for s in range(0, self.level + 1)]

    def __eq__(self, other):
        return (
            isinstance(other, DeformationMorphism)
            and self.base == other.base
            and self.parts == other.parts
        )


@dataclass(frozen=True)
class CohomologyClass:
    """A total cocycle together with its canonical representative."""

    cocycle: TotalCochain
    canonical: TotalCochain

    def is_zero(self) -> bool:
        return self.canonical.is_zero()


@dataclass(frozen=True)
class ObstructionClass:
    """The degree -(l+1) obstruction triple of a level-l deformation.

    ``solution`` is a level-2 total cochain (f, g) solving the coboundary
    equation when the class vanishes; ``canonical`` is the canonical
    representative of the class (zero exactly when solvable).
    """

    triple: TotalCochain
    solution: TotalCochain | None
    canonical: TotalCochain

    def is_obstructed(self) -> bool:
        return self.solution is None


@dataclass(frozen=True)
class ExtensionResult:
    deformation: Deformation | None
    obstruction: ObstructionClass
    family: tuple | None = None  # (particular, kernel basis) when requested

    @property
    def extended(self) -> bool:
        return self.deformation is not None


@dataclass(frozen=True)
class TrivializationResult:
    morphism: DeformationMorphism | None
    order: int | None = None
    obstruction_class: TotalCochain | None = None

    @property
    def trivialized(self) -> bool:
        return self.morphism is not None


# --------------------------------------------------------------------------
# shared code-level evaluation helpers
# --------------------------------------------------------------------------


def _vadd(f, acc, vec, coeff=None):
    if coeff is None:
        for k, v in vec.items():
            acc[k] = f.add(acc.get(k, f.zero), v)
    else:
        for k, v in vec.items():
            acc[k] = f.add(acc.get(k, f.zero), f.mul(coeff, v))
    return acc


def _vneg(f, vec):
    return {k: f.neg(v) for k, v in vec.items()}


def _vclean(vec):
    return {k: v for k, v in vec.items() if v}


def _apply_m(f, n, mcode, va, vb):
    """Bilinear application of a {pair_code: {k: c}} table to two vectors."""
    out = {}
    for i, a in va.items():
        base = i * n
        for j, b in vb.items():
            col = mcode.get(base + j)
            if not col:
                continue
            ab = f.mul(a, b)
            for k, c in col.items():
                out[k] = f.add(out.get(k, f.zero), f.mul(ab, c))
    return _vclean(out)


def _apply_d(f, dcode, vec):
    """Linear application of a {i: {pair_code: c}} table to a vector."""
    out = {}
    for i, a in vec.items():
        col = dcode.get(i)
        if not col:
            continue
        for k, c in col.items():
            out[k] = f.add(out.get(k, f.zero), f.mul(a, c))
    return _vclean(out)


def _pair_mul(f, n, mx_code, my_code, vec2a, vec2b):
    """(m_x ⊗ m_y) after the middle flip, on two 2-tensor vectors: the
    first legs multiply under m_x, the second under m_y."""
    out = {}
    for ab, ca in vec2a.items():
        a1, a2 = divmod(ab, n)
        for cd, cb in vec2b.items():
            b1, b2 = divmod(cd, n)
            left = mx_code.get(a1 * n + b1)
            if not left:
                continue
            right = my_code.get(a2 * n + b2)
            if not right:
                continue
            coeff = f.mul(ca, cb)
            for k1, c1 in left.items():
                c = f.mul(coeff, c1)
                for k2, c2 in right.items():
                    key = k1 * n + k2
                    out[key] = f.add(out.get(key, f.zero), f.mul(c, c2))
    return _vclean(out)


# --------------------------------------------------------------------------
# verification against the expanded identities
# --------------------------------------------------------------------------


def _homogeneity_checks(d: Deformation, report: VerificationReport):
    """Degree bookkeeping; returns True when all corrections are usable."""
    ok_m, order_m, witness_m = True, None, None
    for s, gm in enumerate(d.m_corrections, start=1):
        if gm.degree != -s and not gm.is_zero():
            ok_m, order_m = False, s
            witness_m = f"m_{s} is homogeneous of degree {gm.degree}, not {-s}"
            break
    ok_d, order_d, witness_d = True, None, None
    for s, gm in enumerate(d.delta_corrections, start=1):
        if gm.degree != -s and not gm.is_zero():
            ok_d, order_d = False, s
            witness_d = f"Delta_{s} is homogeneous of degree {gm.degree}, not {-s}"
            break
    report.add("homogeneity-mul", ok_m, witness_m, order_m)
    report.add("homogeneity-comul", ok_d, witness_d, order_d)
    return ok_m and ok_d


def verify_deformation(d: Deformation) -> VerificationReport:
    """Check the order-by-order deformation identities on all basis tuples.

    Report entries: normalization (unit/counit behaviour of the corrections)
    and the three families of expanded identities, each with the order and a
    witness tuple for the first failure.  Axiom checks are skipped when the
    degree bookkeeping already failed.
    """
    report = VerificationReport("deformation verification")
    if not _homogeneity_checks(d, report):
        return report
    B = d.base
    f = B.field
    n = B.dim
    unit = B.unit_index
    labels = B.space.labels
    eps = B.counit
    L = d.level
    mcodes, dcodes = d._code_maps()

    # unit: corrections kill unit arguments
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        mc = mcodes[s]
        for j in range(n):
            if mc.get(unit * n + j) or mc.get(j * n + unit):
                ok, order = False, s
                witness = f"m_{s} does not vanish on a unit slot at {labels[j]}"
                break
        if not ok:
            break
    report.add("unit", ok, witness, order)

    # counit: (eps ⊗ Id) Delta_s = 0 = (Id ⊗ eps) Delta_s
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        dc = dcodes[s]
        for i, col in dc.items():
            left = {}
            right = {}
            for code, c in col.items():
                a, b = divmod(code, n)
                if eps[a]:
                    left[b] = f.add(left.get(b, f.zero), f.mul(eps[a], c))
                if eps[b]:
                    right[a] = f.add(right.get(a, f.zero), f.mul(eps[b], c))
            if _vclean(left) or _vclean(right):
                ok, order = False, s
                witness = f"counit contraction of Delta_{s}({labels[i]}) is nonzero"
                break
        if not ok:
            break
    report.add("counit", ok, witness, order)

    # counit-multiplicativity: eps ∘ m_s = 0
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        for code, col in mcodes[s].items():
            acc = f.zero
            for k, c in col.items():
                acc = f.add(acc, f.mul(eps[k], c))
            if acc:
                ok, order = False, s
                i, j = divmod(code, n)
                witness = f"eps(m_{s}({labels[i]}, {labels[j]})) != 0"
                break
        if not ok:
            break
    report.add("counit-multiplicativity", ok, witness, order)

    # comultiplication-of-unit: Delta_s(1) = 0
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        if dcodes[s].get(unit):
            ok, order, witness = False, s, f"Delta_{s}(1) != 0"
            break
    report.add("comultiplication-of-unit", ok, witness, order)

    basis = [{i: f.one} for i in range(n)]

    # associativity deficit identity, order n
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        if not ok:
            break
        for a in range(n):
            if not ok:
                break
            ea = basis[a]
            for b in range(n):
                if not ok:
                    break
                eb = basis[b]
                ab = _apply_m(f, n, mcodes[0], ea, eb)
                mn_ab = _apply_m(f, n, mcodes[s], ea, eb)
                for c in range(n):
                    ec = basis[c]
                    lhs = {}
                    _vadd(f, lhs, _apply_m(f, n, mcodes[0], ea, _apply_m(f, n, mcodes[s], eb, ec)))
                    _vadd(f, lhs, _vneg(f, _apply_m(f, n, mcodes[s], ab, ec)))
                    _vadd(f, lhs, _apply_m(f, n, mcodes[s], ea, _apply_m(f, n, mcodes[0], eb, ec)))
                    _vadd(f, lhs, _vneg(f, _apply_m(f, n, mcodes[0], mn_ab, ec)))
                    rhs = {}
                    for r in range(1, s):
                        _vadd(f, rhs, _apply_m(f, n, mcodes[r], _apply_m(f, n, mcodes[s - r], ea, eb), ec))
                        _vadd(f, rhs, _vneg(f, _apply_m(f, n, mcodes[r], ea, _apply_m(f, n, mcodes[s - r], eb, ec))))
                    if _vclean(lhs) != _vclean(rhs):
                        ok, order = False, s
                        witness = f"({labels[a]}, {labels[b]}, {labels[c]})"
                        break
    report.add("associativity", ok, witness, order)

    # compatibility identity, order n
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        if not ok:
            break
        for a in range(n):
            if not ok:
                break
            ea = basis[a]
            da = _apply_d(f, dcodes[0], ea)
            da_n = _apply_d(f, dcodes[s], ea)
            for b in range(n):
                eb = basis[b]
                db = _apply_d(f, dcodes[0], eb)
                db_n = _apply_d(f, dcodes[s], eb)
                ab = _apply_m(f, n, mcodes[0], ea, eb)
                lhs = {}
                _vadd(f, lhs, _pair_mul(f, n, mcodes[s], mcodes[0], da, db))
                _vadd(f, lhs, _vneg(f, _apply_d(f, dcodes[0], _apply_m(f, n, mcodes[s], ea, eb))))
                _vadd(f, lhs, _pair_mul(f, n, mcodes[0], mcodes[s], da, db))
                _vadd(f, lhs, _pair_mul(f, n, mcodes[0], mcodes[0], da, db_n))
                _vadd(f, lhs, _vneg(f, _apply_d(f, dcodes[s], ab)))
                _vadd(f, lhs, _pair_mul(f, n, mcodes[0], mcodes[0], da_n, db))
                rhs = {}
                for sa in range(0, s):
                    da_s = _apply_d(f, dcodes[sa], ea)
                    for sb in range(0, min(s - 1, s - sa) + 1):
                        db_s = _apply_d(f, dcodes[sb], eb)
                        for mx in range(0, s - sa - sb + 1):
                            my = s - sa - sb - mx
                            if mx > s - 1 or my > s - 1:
                                continue
                            _vadd(
                                f,
                                rhs,
                                _vneg(f, _pair_mul(f, n, mcodes[mx], mcodes[my], da_s, db_s)),
                            )
                for r in range(1, s):
                    _vadd(f, rhs, _apply_d(f, dcodes[r], _apply_m(f, n, mcodes[s - r], ea, eb)))
                if _vclean(lhs) != _vclean(rhs):
                    ok, order = False, s
                    witness = f"({labels[a]}, {labels[b]})"
                    break
    report.add("compatibility", ok, witness, order)

    # coassociativity deficit identity, order n
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        if not ok:
            break
        for c in range(n):
            ec = basis[c]
            dc0 = _apply_d(f, dcodes[0], ec)
            dcn = _apply_d(f, dcodes[s], ec)
            lhs = {}
            # c_(1) ⊗ Delta_n(c_(2))
            for code, cc in dc0.items():
                c1, c2 = divmod(code, n)
                inner = _apply_d(f, dcodes[s], {c2: f.one})
                for code2, c3 in inner.items():
                    key = c1 * n * n + code2
                    lhs[key] = f.add(lhs.get(key, f.zero), f.mul(cc, c3))
            # - (Delta ⊗ Id) Delta_n(c) ; + (Id ⊗ Delta) Delta_n(c)
            for code, cc in dcn.items():
                c1, c2 = divmod(code, n)
                for code2, c3 in _apply_d(f, dcodes[0], {c1: f.one}).items():
                    key = code2 * n + c2
                    lhs[key] = f.sub(lhs.get(key, f.zero), f.mul(cc, c3))
                for code2, c3 in _apply_d(f, dcodes[0], {c2: f.one}).items():
                    key = c1 * n * n + code2
                    lhs[key] = f.add(lhs.get(key, f.zero), f.mul(cc, c3))
            # - Delta_n(c_(1)) ⊗ c_(2)
            for code, cc in dc0.items():
                c1, c2 = divmod(code, n)
                for code2, c3 in _apply_d(f, dcodes[s], {c1: f.one}).items():
                    key = code2 * n + c2
                    lhs[key] = f.sub(lhs.get(key, f.zero), f.mul(cc, c3))
            rhs = {}
            for r in range(1, s):
                dcs = _apply_d(f, dcodes[r], ec)
                for code, cc in dcs.items():
                    c1, c2 = divmod(code, n)
                    for code2, c3 in _apply_d(f, dcodes[s - r], {c1: f.one}).items():
                        key = code2 * n + c2
                        rhs[key] = f.add(rhs.get(key, f.zero), f.mul(cc, c3))
                    for code2, c3 in _apply_d(f, dcodes[s - r], {c2: f.one}).items():
                        key = c1 * n * n + code2
                        rhs[key] = f.sub(rhs.get(key, f.zero), f.mul(cc, c3))
            if _vclean(lhs) != _vclean(rhs):
                ok, order = False, s
                witness = f"({labels[c]},)"
                break
    report.add("coassociativity", ok, witness, order)
    return report


# --------------------------------------------------------------------------
# truncated-ring oracle
# --------------------------------------------------------------------------


class _TruncatedRing:
    """Arithmetic in the truncated polynomial ring over the base, with the
    deformed structure maps; elements are lists of sparse vectors indexed by
    the power of the parameter."""

    def __init__(self, d: Deformation):
        self.d = d
        self.B = d.base
        self.f = self.B.field
        self.n = self.B.dim
        self.L = d.level
        self.mcodes, self.dcodes = d._code_maps()

    def poly_basis(self, i):
        return [{i: self.f.one}] + [{} for _ in range(self.L)]

    def zero_poly(self, width=1):
        return [{} for _ in range(self.L + 1)]

    def m_t(self, pa, pb):
        f, n, L = self.f, self.n, self.L
        out = [{} for _ in range(L + 1)]
        for i, va in enumerate(pa):
            if not va:
                continue
            for j, vb in enumerate(pb):
                if not vb or i + j > L:
                    continue
                for s in range(0, L - i - j + 1):
                    if s < len(self.mcodes):
                        res = _apply_m(f, n, self.mcodes[s], va, vb)
                        if res:
                            _vadd(f, out[i + j + s], res)
        return [_vclean(v) for v in out]

    def delta_t(self, pa):
        f, L = self.f, self.L
        out = [{} for _ in range(L + 1)]
        for i, va in enumerate(pa):
            if not va:
                continue
            for s in range(0, L - i + 1):
                if s < len(self.dcodes):
                    res = _apply_d(f, self.dcodes[s], va)
                    if res:
                        _vadd(f, out[i + s], res)
        return [_vclean(v) for v in out]

    def eps_t(self, pa):
        f = self.f
        eps = self.B.counit
        out = []
        for v in pa:
            acc = f.zero
            for k, c in v.items():
                acc = f.add(acc, f.mul(eps[k], c))
            out.append(acc)
        return out

    def square_mul(self, pa2, pb2):
        """Product in the tensor square over the truncated ring."""
        f, n, L = self.f, self.n, self.L
        out = [{} for _ in range(L + 1)]
        for i, va in enumerate(pa2):
            if not va:
                continue
            for j, vb in enumerate(pb2):
                if not vb or i + j > L:
                    continue
                for mx in range(0, L - i - j + 1):
                    for my in range(0, L - i - j - mx + 1):
                        res = _pair_mul(f, n, self.mcodes[mx], self.mcodes[my], va, vb)
                        if res:
                            _vadd(f, out[i + j + mx + my], res)
        return [_vclean(v) for v in out]

    def delta_left(self, pa2):
        """(Delta_t ⊗ Id) on a polynomial of 2-tensors."""
        f, n, L = self.f, self.n, self.L
        out = [{} for _ in range(L + 1)]
        for i, va in enumerate(pa2):
            for code, c in va.items():
                x, y = divmod(code, n)
                for s in range(0, L - i + 1):
                    res = _apply_d(f, self.dcodes[s], {x: c})
                    for code2, c2 in res.items():
                        key = code2 * n + y
                        out[i + s][key] = f.add(out[i + s].get(key, f.zero), c2)
        return [_vclean(v) for v in out]

    def delta_right(self, pa2):
        """(Id ⊗ Delta_t) on a polynomial of 2-tensors."""
        f, n, L = self.f, self.n, self.L
        out = [{} for _ in range(L + 1)]
        for i, va in enumerate(pa2):
            for code, c in va.items():
                x, y = divmod(code, n)
                for s in range(0, L - i + 1):
                    res = _apply_d(f, self.dcodes[s], {y: c})
                    for code2, c2 in res.items():
                        key = x * n * n + code2
                        out[i + s][key] = f.add(out[i + s].get(key, f.zero), c2)
        return [_vclean(v) for v in out]

    def eps_left(self, pa2):
        """(eps_t ⊗ Id), landing in polynomials over the base space."""
        f, n = self.f, self.n
        eps = self.B.counit
        out = []
        for va in pa2:
            acc = {}
            for code, c in va.items():
                x, y = divmod(code, n)
                if eps[x]:
                    acc[y] = f.add(acc.get(y, f.zero), f.mul(eps[x], c))
            out.append(_vclean(acc))
        return out

    def eps_right(self, pa2):
        f, n = self.f, self.n
        eps = self.B.counit
        out = []
        for va in pa2:
            acc = {}
            for code, c in va.items():
                x, y = divmod(code, n)
                if eps[y]:
                    acc[x] = f.add(acc.get(x, f.zero), f.mul(eps[y], c))
            out.append(_vclean(acc))
        return out


def _first_diff_order(pa, pb):
    for i, (va, vb) in enumerate(zip(pa, pb)):
        if _vclean(dict(va)) != _vclean(dict(vb)):
            return i
    return None


def truncated_ring_oracle(d: Deformation) -> VerificationReport:
    """Verify the bialgebra axioms of the truncated ring directly.

    Never uses the expanded identities; must agree with
    ``verify_deformation`` on the verdict and on the order of the first
    failure of every check.
    """
    report = VerificationReport("truncated-ring oracle")
    if not _homogeneity_checks(d, report):
        return report
    ring = _TruncatedRing(d)
    B = d.base
    f = B.field
    n = B.dim
    unit = B.unit_index
    labels = B.space.labels
    L = d.level

    basis_polys = [ring.poly_basis(i) for i in range(n)]
    one_poly = basis_polys[unit]

    def record(name, fail_order, witness):
        report.add(name, fail_order is None, witness if fail_order is not None else None, fail_order)

    # unit: m_t(1 ⊗ a) = a = m_t(a ⊗ 1)
    fail, witness = None, None
    for i in range(n):
        for pa in (ring.m_t(one_poly, basis_polys[i]), ring.m_t(basis_polys[i], one_poly)):
            o = _first_diff_order(pa, basis_polys[i])
            if o is not None and (fail is None or o < fail):
                fail, witness = o, f"unit axiom fails on {labels[i]}"
    record("unit", fail, witness)

    # counit: (eps_t ⊗ Id)Delta_t = Id = (Id ⊗ eps_t)Delta_t
    fail, witness = None, None
    for i in range(n):
        dt = ring.delta_t(basis_polys[i])
        for pa in (ring.eps_left(dt), ring.eps_right(dt)):
            o = _first_diff_order(pa, basis_polys[i])
            if o is not None and (fail is None or o < fail):
                fail, witness = o, f"counit axiom fails on {labels[i]}"
    record("counit", fail, witness)

    # counit-multiplicativity: eps_t(m_t(a ⊗ b)) = eps(a) eps(b)
    fail, witness = None, None
    for i in range(n):
        for j in range(n):
            vals = ring.eps_t(ring.m_t(basis_polys[i], basis_polys[j]))
            want = f.mul(B.counit[i], B.counit[j])
            for o, v in enumerate(vals):
                expect = want if o == 0 else f.zero
                if v != expect and (fail is None or o < fail):
                    fail = o
                    witness = f"eps of product fails on ({labels[i]}, {labels[j]})"
                    break
    record("counit-multiplicativity", fail, witness)

    # comultiplication of the unit: Delta_t(1) = 1 ⊗ 1
    fail, witness = None, None
    dt1 = ring.delta_t(one_poly)
    want0 = {unit * n + unit: f.one}
    for o, v in enumerate(dt1):
        expect = want0 if o == 0 else {}
        if _vclean(dict(v)) != expect:
            fail, witness = o, "Delta_t(1) differs from 1⊗1"
            break
    record("comultiplication-of-unit", fail, witness)

    # associativity of m_t
    fail, witness = None, None
    for i in range(n):
        for j in range(n):
            pij = ring.m_t(basis_polys[i], basis_polys[j])
            for k in range(n):
                lhs = ring.m_t(pij, basis_polys[k])
                rhs = ring.m_t(basis_polys[i], ring.m_t(basis_polys[j], basis_polys[k]))
                o = _first_diff_order(lhs, rhs)
                if o is not None and (fail is None or o < fail):
                    fail = o
                    witness = f"({labels[i]}, {labels[j]}, {labels[k]})"
    record("associativity", fail, witness)

    # compatibility: Delta_t(m_t(a ⊗ b)) = Delta_t(a) · Delta_t(b)
    fail, witness = None, None
    for i in range(n):
        di = ring.delta_t(basis_polys[i])
        for j in range(n):
            dj = ring.delta_t(basis_polys[j])
            lhs = ring.delta_t(ring.m_t(basis_polys[i], basis_polys[j]))
            rhs = ring.square_mul(di, dj)
            o = _first_diff_order(lhs, rhs)
            if o is not None and (fail is None or o < fail):
                fail = o
                witness = f"({labels[i]}, {labels[j]})"
    record("compatibility", fail, witness)

    # coassociativity of Delta_t
    fail, witness = None, None
    for i in range(n):
        dt = ring.delta_t(basis_polys[i])
        lhs = ring.delta_left(dt)
        rhs = ring.delta_right(dt)
        o = _first_diff_order(lhs, rhs)
        if o is not None and (fail is None or o < fail):
            fail = o
            witness = f"({labels[i]},)"
    record("coassociativity", fail, witness)
    return report


# --------------------------------------------------------------------------
# levels, restriction, classification
# --------------------------------------------------------------------------


def full_level(B: GradedBialgebra) -> int:
    """The level at which every deformation stabilizes.

    Corrections to the multiplication are homogeneous of degree -s on the
    tensor square, whose top degree is twice the top degree of the space, so
    they vanish for s beyond that; comultiplication corrections vanish even
    earlier.
    """
    return 2 * B.top_degree


def restrict(d: Deformation, new_level: int) -> Deformation:
    """Drop corrections above ``new_level``."""
    if new_level > d.level:
        raise MalformedDeformationError(
            f"cannot restrict a level-{d.level} deformation to level {new_level}"
        )
    if new_level < 0:
        raise MalformedDeformationError("levels are non-negative")
    out = Deformation(
        d.base,
        new_level,
        d.m_corrections[:new_level],
        d.delta_corrections[:new_level],
    )
    out.base_label = d.base_label
    return out


def _b_graded_from_codes(B: GradedBialgebra, cmap, p, q, degree) -> GradedMap:
    """Code-level map (widths q -> p over the ambient basis) as a GradedMap."""
    n = B.dim
    src = B.space if q == 1 else tensor_power(B.space, q)
    tgt = B.space if p == 1 else tensor_power(B.space, p)
    src_c2g = src.code_to_global if q > 1 else tuple(range(n))
    tgt_c2g = tgt.code_to_global if p > 1 else tuple(range(n))
    cols = {}
    for code, vec in cmap.items():
        cols[src_c2g[code]] = {tgt_c2g[r]: v for r, v in vec.items()}
    return GradedMap(src, tgt, degree, B.field, cols)


def _embedded_correction(B: GradedBialgebra, dmap, p, q, degree) -> GradedMap:
    ctx = context_for(B)
    cmap = _kernel.embed_map(dmap, p, q, ctx.tab)
    return _b_graded_from_codes(B, cmap, p, q, degree)


def _pair_from_corrections(d: Deformation, s: int) -> TotalCochain:
    """Corestrict (m_s, Delta_s) to a level-2 total cochain of degree -s."""
    B = d.base
    ctx = context_for(B)
    mcodes, dcodes = d._code_maps()
    try:
        fmap = _kernel.corestrict_map(mcodes[s], 1, 2, ctx.tab)
        gmap = _kernel.corestrict_map(dcodes[s], 2, 1, ctx.tab)
        f_part = Cochain(B, 1, 2, -s, ctx.dmap_to_graded(fmap, 1, 2, -s))
        g_part = Cochain(B, 2, 1, -s, ctx.dmap_to_graded(gmap, 2, 1, -s))
    except (InternalInvariantError, GradingError) as exc:
        raise MalformedDeformationError(
            f"order-{s} corrections do not corestrict to normalized "
            f"coefficients: {exc}"
        ) from exc
    return TotalCochain(B, 2, -s, (g_part, f_part))


_RELATION_NAMES = {(1, 3): "associativity", (2, 2): "compatibility", (3, 1): "coassociativity"}


def _cocycle_violations(tc: TotalCochain):
    image = total_differential(tc)
    return [
        _RELATION_NAMES.get((part.p, part.q), f"({part.p},{part.q})")
        for part in image.parts
        if not part.is_zero()
    ]


def first_order_class(d: Deformation) -> CohomologyClass:
    """Corestrict the first-order corrections and reduce them to their
    canonical cohomology class."""
    if d.level < 1:
        raise MalformedDeformationError("first-order class needs level >= 1")
    tc = _pair_from_corrections(d, 1)
    bad = _cocycle_violations(tc)
    if bad:
        raise MalformedDeformationError(
            f"first-order corrections violate the {', '.join(bad)} relation(s)"
        )
    ctx = context_for(d.base)
    return CohomologyClass(tc, ctx.canonical_class(tc))


def deformation_from_cocycle(B: GradedBialgebra, z: TotalCochain) -> Deformation:
    """Prolong a degree -1 level-2 total cocycle to a level-1 deformation."""
    if z.n != 2 or z.degree != -1:
        raise MalformedDeformationError(
            "classification cocycles live at level 2, degree -1"
        )
    bad = _cocycle_violations(z)
    if bad:
        raise MalformedDeformationError(
            f"not a cocycle: violates the {', '.join(bad)} relation(s)"
        )
    ctx = context_for(B)
    f_part = z.part(1, 2)
    g_part = z.part(2, 1)
    m1 = _embedded_correction(B, ctx.graded_to_dmap(f_part.map, 1, 2), 1, 2, -1)
    d1 = _embedded_correction(B, ctx.graded_to_dmap(g_part.map, 2, 1), 2, 1, -1)
    return Deformation(B, 1, [m1], [d1])


# --------------------------------------------------------------------------
# isomorphisms and conjugation
# --------------------------------------------------------------------------


def _phi_codes(phi: DeformationMorphism):
    out = [{i: {i: phi.base.field.one} for i in range(phi.base.dim)}]
    for gm in phi.parts:
        out.append({j: dict(col) for j, col in gm.cols.items()})
    return out


def _apply_phi(f, pcode, vec):
    out = {}
    for i, a in vec.items():
        col = pcode.get(i)
        if not col:
            continue
        for k, c in col.items():
            out[k] = f.add(out.get(k, f.zero), f.mul(a, c))
    return _vclean(out)


def _phi_tensor_apply(f, n, pa, pb, vec2):
    out = {}
    for code, c in vec2.items():
        x, y = divmod(code, n)
        ax = pa.get(x)
        if not ax:
            continue
        by = pb.get(y)
        if not by:
            continue
        for k1, c1 in ax.items():
            cc = f.mul(c, c1)
            for k2, c2 in by.items():
                key = k1 * n + k2
                out[key] = f.add(out.get(key, f.zero), f.mul(cc, c2))
    return _vclean(out)


def verify_isomorphism(
    d1: Deformation, d2: Deformation, phi: DeformationMorphism
) -> VerificationReport:
    """Check that phi intertwines the two deformations order-by-order and
    preserves the unit and the counit."""
    report = VerificationReport("deformation isomorphism verification")
    if d1.base != d2.base or d1.level != d2.level:
        raise MalformedDeformationError("deformations must share base and level")
    if phi.level != d1.level:
        raise MalformedDeformationError("morphism level mismatch")
    B = d1.base
    f = B.field
    n = B.dim
    unit = B.unit_index
    labels = B.space.labels
    eps = B.counit
    L = d1.level
    m1codes, d1codes = d1._code_maps()
    m2codes, d2codes = d2._code_maps()
    pcodes = _phi_codes(phi)

    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        if pcodes[s].get(unit):
            ok, order, witness = False, s, "phi does not fix the unit"
            break
    report.add("unit-preservation", ok, witness, order)

    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        for i, col in pcodes[s].items():
            acc = f.zero
            for k, c in col.items():
                acc = f.add(acc, f.mul(eps[k], c))
            if acc:
                ok, order, witness = False, s, f"eps(phi_{s}({labels[i]})) != 0"
                break
        if not ok:
            break
    report.add("counit-preservation", ok, witness, order)

    basis = [{i: f.one} for i in range(n)]

    # multiplication side
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        if not ok:
            break
        for a in range(n):
            if not ok:
                break
            ea = basis[a]
            for b in range(n):
                eb = basis[b]
                ab = _apply_m(f, n, m1codes[0], ea, eb)
                lhs = {}
                _vadd(f, lhs, _apply_m(f, n, m1codes[s], ea, eb))
                _vadd(f, lhs, _vneg(f, _apply_m(f, n, m2codes[s], ea, eb)))
                rhs = {}
                phin_b = _apply_phi(f, pcodes[s], eb)
                phin_a = _apply_phi(f, pcodes[s], ea)
                _vadd(f, rhs, _apply_m(f, n, m1codes[0], ea, phin_b))
                _vadd(f, rhs, _vneg(f, _apply_phi(f, pcodes[s], ab)))
                _vadd(f, rhs, _apply_m(f, n, m1codes[0], phin_a, eb))
                for r in range(1, s):
                    _vadd(
                        f,
                        rhs,
                        _apply_m(
                            f, n, m1codes[0],
                            _apply_phi(f, pcodes[r], ea),
                            _apply_phi(f, pcodes[s - r], eb),
                        ),
                    )
                    _vadd(
                        f,
                        rhs,
                        _vneg(
                            f,
                            _apply_phi(
                                f, pcodes[r], _apply_m(f, n, m1codes[s - r], ea, eb)
                            ),
                        ),
                    )
                    for r1 in range(0, s - r + 1):
                        r2 = s - r - r1
                        _vadd(
                            f,
                            rhs,
                            _apply_m(
                                f, n, m2codes[r],
                                _apply_phi(f, pcodes[r1], ea),
                                _apply_phi(f, pcodes[r2], eb),
                            ),
                        )
                if _vclean(lhs) != _vclean(rhs):
                    ok, order = False, s
                    witness = f"({labels[a]}, {labels[b]})"
                    break
    report.add("multiplication-intertwines", ok, witness, order)

    # comultiplication side
    ok, order, witness = True, None, None
    for s in range(1, L + 1):
        if not ok:
            break
        for c in range(n):
            ec = basis[c]
            dc0 = _apply_d(f, d1codes[0], ec)
            lhs = {}
            _vadd(f, lhs, _apply_d(f, d1codes[s], ec))
            _vadd(f, lhs, _vneg(f, _apply_d(f, d2codes[s], ec)))
            rhs = {}
            phin_c = _apply_phi(f, pcodes[s], ec)
            _vadd(f, rhs, _apply_d(f, d1codes[0], phin_c))
            _vadd(f, rhs, _vneg(f, _phi_tensor_apply(f, n, pcodes[0], pcodes[s], dc0)))
            _vadd(f, rhs, _vneg(f, _phi_tensor_apply(f, n, pcodes[s], pcodes[0], dc0)))
            for r in range(1, s):
                _vadd(
                    f,
                    rhs,
                    _apply_d(f, d2codes[r], _apply_phi(f, pcodes[s - r], ec)),
                )
                _vadd(
                    f,
                    rhs,
                    _vneg(f, _phi_tensor_apply(f, n, pcodes[r], pcodes[s - r], dc0)),
                )
                dcs = _apply_d(f, d1codes[r], ec)
                for r1 in range(0, s - r + 1):
                    r2 = s - r - r1
                    _vadd(
                        f,
                        rhs,
                        _vneg(
                            f,
                            _phi_tensor_apply(f, n, pcodes[r1], pcodes[r2], dcs),
                        ),
                    )
            if _vclean(lhs) != _vclean(rhs):
                ok, order = False, s
                witness = f"({labels[c]},)"
                break
    report.add("comultiplication-intertwines", ok, witness, order)
    return report


def _series_inverse(series):
    """Inverse of Id + higher-order parts, order by order."""
    L = len(series) - 1
    ident = series[0]
    f = ident.field
    inv = [ident]
    for c in range(1, L + 1):
        acc = None
        for s in range(1, c + 1):
            term = series[s] @ inv[c - s]
            acc = term if acc is None else acc + term
        inv.append(acc.scale(f.neg(f.one)))
    return inv


def _series_compose(sa, sb):
    """Composition of two endomorphism series, truncated to their length."""
    L = len(sa) - 1
    out = []
    for c in range(0, L + 1):
        acc = None
        for s in range(0, c + 1):
            term = sa[s] @ sb[c - s]
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def _series_tensor(sa, sb):
    L = len(sa) - 1
    out = []
    for c in range(0, L + 1):
        acc = None
        for s in range(0, c + 1):
            term = tensor_map([sa[s], sb[c - s]])
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def conjugate(d: Deformation, phi: DeformationMorphism) -> Deformation:
    """Transport the deformation along phi by truncated series composition."""
    if phi.level != d.level:
        raise MalformedDeformationError("morphism level mismatch")
    if phi.base != d.base:
        raise MalformedDeformationError("morphism base mismatch")
    L = d.level
    series = phi.series()
    inv = _series_inverse(series)
    inv_sq = _series_tensor(inv, inv)
    fwd_sq = _series_tensor(series, series)
    m_series = [d.m_map(s) for s in range(0, L + 1)]
    d_series = [d.delta_map(s) for s in range(0, L + 1)]
    new_m = []
    new_d = []
    for nn in range(1, L + 1):
        acc_m = None
        acc_d = None
        for a in range(0, nn + 1):
            for b in range(0, nn + 1 - a):
                c = nn - a - b
                term_m = series[a] @ m_series[b] @ inv_sq[c]
                acc_m = term_m if acc_m is None else acc_m + term_m
                term_d = fwd_sq[a] @ d_series[b] @ inv[c]
                acc_d = term_d if acc_d is None else acc_d + term_d
        new_m.append(acc_m)
        new_d.append(acc_d)
    return Deformation(d.base, L, new_m, new_d)


# --------------------------------------------------------------------------
# obstruction, extension, trivialization, rigidity
# --------------------------------------------------------------------------


def _obstruction_triple(d: Deformation) -> TotalCochain:
    """The degree -(l+1) cocycle triple, with the vertical component negated
    so that the triple is exactly a coboundary of the next corrections."""
    B = d.base
    f = B.field
    n = B.dim
    ctx = context_for(B)
    L = d.level
    mcodes, dcodes = d._code_maps()
    degree = -(L + 1)

    fd = {}
    for a in range(n):
        ea = {a: f.one}
        for b in range(n):
            eb = {b: f.one}
            for c in range(n):
                ec = {c: f.one}
                acc = {}
                for s in range(1, L + 1):
                    r = L + 1 - s
                    if r < 1 or r > L:
                        continue
                    _vadd(f, acc, _apply_m(f, n, mcodes[s], _apply_m(f, n, mcodes[r], ea, eb), ec))
                    _vadd(f, acc, _vneg(f, _apply_m(f, n, mcodes[s], ea, _apply_m(f, n, mcodes[r], eb, ec))))
                acc = _vclean(acc)
                if acc:
                    fd[(a * n + b) * n + c] = acc

    hd = {}
    for a in range(n):
        ea = {a: f.one}
        for b in range(n):
            eb = {b: f.one}
            acc = {}
            for s in range(1, L + 1):
                r = L + 1 - s
                _vadd(f, acc, _apply_d(f, dcodes[s], _apply_m(f, n, mcodes[r], ea, eb)))
            for sa in range(0, L + 1):
                da_s = _apply_d(f, dcodes[sa], ea)
                if not da_s:
                    continue
                for sb in range(0, min(L, L + 1 - sa) + 1):
                    db_s = _apply_d(f, dcodes[sb], eb)
                    if not db_s:
                        continue
                    for mx in range(0, L + 2 - sa - sb):
                        my = L + 1 - sa - sb - mx
                        if mx > L or my > L or my < 0:
                            continue
                        _vadd(f, acc, _vneg(f, _pair_mul(f, n, mcodes[mx], mcodes[my], da_s, db_s)))
            acc = _vclean(acc)
            if acc:
                hd[a * n + b] = acc

    gd = {}
    for c in range(n):
        ec = {c: f.one}
        acc = {}
        for s in range(1, L + 1):
            r = L + 1 - s
            dcr = _apply_d(f, dcodes[r], ec)
            for code, cc in dcr.items():
                c1, c2 = divmod(code, n)
                for code2, c3 in _apply_d(f, dcodes[s], {c1: f.one}).items():
                    key = code2 * n + c2
                    acc[key] = f.add(acc.get(key, f.zero), f.mul(cc, c3))
                for code2, c3 in _apply_d(f, dcodes[s], {c2: f.one}).items():
                    key = c1 * n * n + code2
                    acc[key] = f.sub(acc.get(key, f.zero), f.mul(cc, c3))
        # store the negative: the total-complex convention flips the
        # vertical edge of the triple
        acc = {k: f.neg(v) for k, v in _vclean(acc).items()}
        if acc:
            gd[c] = acc

    try:
        f_part = Cochain(B, 1, 3, degree, ctx.dmap_to_graded(
            _kernel.corestrict_map(fd, 1, 3, ctx.tab), 1, 3, degree))
        h_part = Cochain(B, 2, 2, degree, ctx.dmap_to_graded(
            _kernel.corestrict_map(hd, 2, 2, ctx.tab), 2, 2, degree))
        g_part = Cochain(B, 3, 1, degree, ctx.dmap_to_graded(
            _kernel.corestrict_map(gd, 3, 1, ctx.tab), 3, 1, degree))
    except (InternalInvariantError, GradingError) as exc:
        raise MalformedDeformationError(
            f"obstruction of a non-normalized deformation: {exc}"
        ) from exc
    return TotalCochain(B, 3, degree, (g_part, h_part, f_part))


def _solve_pair_equation(ctx, n_level, degree, target: TotalCochain):
    """Solve (total differential at level n_level)(x) = target; returns
    (particular TotalCochain or None, kernel basis as TotalCochains)."""
    B = ctx.B
    f = ctx.field
    mat = ctx.total_matrix(n_level, degree)
    bdense = [f.zero] * mat.nrows
    for pos, v in ctx.tc_to_coords(target).items():
        bdense[pos] = v
    if mat.ncols == 0:
        if any(bdense):
            return None, []
        return zero_total_cochain(B, n_level, degree), []
    dense = Matrix(f, mat.dense_rows(f), mat.ncols) if mat.nrows else Matrix.zeros(f, 1, mat.ncols)
    if mat.nrows == 0:
        bdense = [f.zero]
    solved = dense.solve(bdense)
    if solved is None:
        return None, []
    particular, kernel = solved
    part_tc = ctx.coords_to_tc(n_level, degree, {i: v for i, v in enumerate(particular) if v})
    kernel_tcs = [
        ctx.coords_to_tc(n_level, degree, {i: v for i, v in enumerate(vec) if v})
        for vec in kernel
    ]
    return part_tc, kernel_tcs


def obstruction(d: Deformation) -> ObstructionClass:
    """The obstruction to extending one level further."""
    if d.level < 1:
        raise MalformedDeformationError("obstructions need level >= 1")
    B = d.base
    ctx = context_for(B)
    triple = _obstruction_triple(d)
    if not total_differential(triple).is_zero():
        raise InternalInvariantError(
            "obstruction triple is not a total cocycle; sign convention broken"
        )
    particular, _kernel_tcs = _solve_pair_equation(ctx, 2, triple.degree, triple)
    canonical = ctx.canonical_class(triple)
    if (particular is None) != (not canonical.is_zero()):
        raise InternalInvariantError(
            "solvability disagrees with the canonical class"
        )
    return ObstructionClass(triple, particular, canonical)


def extend(d: Deformation, all_extensions: bool = False) -> ExtensionResult:
    """Extend one level when the obstruction vanishes.

    At level 0 every convolution sum is empty, so the obstruction triple is
    zero and the extensions are exactly the level-1 cocycle pairs.
    """
    if d.level == 0:
        ctx = context_for(d.base)
        triple = zero_total_cochain(d.base, 3, -1)
        particular, kernel_tcs = _solve_pair_equation(ctx, 2, -1, triple)
        obs = ObstructionClass(triple, particular, ctx.canonical_class(triple))
        new = Deformation.trivial(d.base, 1)
        new.base_label = d.base_label
        family = (particular, tuple(kernel_tcs)) if all_extensions else None
        return ExtensionResult(new, obs, family)
    obs = obstruction(d)
    if obs.solution is None:
        return ExtensionResult(None, obs, None)
    B = d.base
    ctx = context_for(B)
    L = d.level
    f_part = obs.solution.part(1, 2)
    g_part = obs.solution.part(2, 1)
    m_next = _embedded_correction(B, ctx.graded_to_dmap(f_part.map, 1, 2), 1, 2, -(L + 1))
    d_next = _embedded_correction(B, ctx.graded_to_dmap(g_part.map, 2, 1), 2, 1, -(L + 1))
    new = Deformation(
        B, L + 1, list(d.m_corrections) + [m_next], list(d.delta_corrections) + [d_next]
    )
    new.base_label = d.base_label
    family = None
    if all_extensions:
        _, kernel_tcs = _solve_pair_equation(ctx, 2, obs.triple.degree, obs.triple)
        family = (obs.solution, tuple(kernel_tcs))
    return ExtensionResult(new, obs, family)


def trivialize(d: Deformation):
    """Iteratively conjugate away the lowest-order corrections.

    Returns a TrivializationResult: either a morphism onto the trivial
    deformation, or the first order s at which the corrections represent a
    nonzero class, together with that canonical class.
    """
    B = d.base
    ctx = context_for(B)
    f = B.field
    L = d.level
    cur = d
    total = DeformationMorphism.identity(B, L).series()
    for s in range(1, L + 1):
        if cur.m_corrections[s - 1].is_zero() and cur.delta_corrections[s - 1].is_zero():
            continue
        tc = _pair_from_corrections(cur, s)
        bad = _cocycle_violations(tc)
        if bad:
            raise MalformedDeformationError(
                f"order-{s} corrections are not a cocycle; deformation invalid"
            )
        canonical = ctx.canonical_class(tc)
        if not canonical.is_zero():
            return TrivializationResult(None, s, canonical)
        theta_tc, _ = _solve_pair_equation(ctx, 1, -s, tc)
        if theta_tc is None:
            raise InternalInvariantError("zero class but no primitive found")
        theta = theta_tc.part(1, 1)
        theta_b = _embedded_correction(B, ctx.graded_to_dmap(theta.map, 1, 1), 1, 1, -s)
        parts = [
            theta_b if r == s else GradedMap.zero(B.space, B.space, -r, f)
            for r in range(1, L + 1)
        ]
        step = DeformationMorphism(B, parts)
        cur = conjugate(cur, step)
        total = _series_compose(step.series(), total)
    if not cur.is_trivial():
        raise InternalInvariantError("trivialization left nonzero corrections")
    return TrivializationResult(DeformationMorphism(B, total[1:]), None, None)


def rigidity_check(B: GradedBialgebra) -> VerificationReport:
    """Vanishing of the level-2 cohomology in all contributing negative
    degrees: a sufficient criterion for graded rigidity."""
    from .cohomology import cohomology

    report = VerificationReport("graded rigidity")
    top = full_level(B)
    all_zero = True
    for l in range(1, top + 1):
        res = cohomology(B, 2, -l, with_representatives=False)
        report.numbers[f"h2_dim_degree_-{l}"] = res.dimension
        report.add(f"h2-vanishes-at-degree--{l}", res.dimension == 0)
        if res.dimension:
            all_zero = False
    report.numbers["graded_rigid"] = "yes" if all_zero else "undetermined"
    report.notes.append(
        "The vanishing criterion is sufficient for graded rigidity, not "
        "claimed necessary: nonzero dimensions leave the question open."
    )
    report.notes.append(
        "When the verdict is yes, every filtered bialgebra whose associated "
        "graded bialgebra matches this one is isomorphic to it as a bialgebra."
    )
    return report


# --------------------------------------------------------------------------
# liftings
# --------------------------------------------------------------------------


def lifting_decompose(B: GradedBialgebra, tables: LiftingTables) -> Deformation:
    """Split filtered multiplication/comultiplication tables by degree defect
    into a stabilized deformation of B."""
    if tables.space != B.space:
        raise MalformedDeformationError(
            "tables are not given on the underlying graded space of the base"
        )
    if tables.field != B.field:
        raise MalformedDeformationError("tables live over a different field")
    if tables.unit_index != B.unit_index:
        raise MalformedDeformationError("tables have a different unit")
    if tuple(tables.counit) != tuple(B.counit):
        raise MalformedDeformationError("tables have a different counit")
    space = B.space
    labels = space.labels
    L = full_level(B)
    f = B.field
    by_defect_m = {}
    for (i, j), col in tables.mul.items():
        want = space.degree_of(i) + space.degree_of(j)
        for k, c in col.items():
            defect = want - space.degree_of(k)
            if defect < 0:
                raise NotALiftingError(
                    f"product {labels[i]}·{labels[j]} has a component "
                    f"{labels[k]} above its filtration step"
                )
            by_defect_m.setdefault(defect, {}).setdefault((i, j), {})[k] = c
    by_defect_d = {}
    for i, terms in tables.comul.items():
        want = space.degree_of(i)
        for (j, k), c in terms.items():
            defect = want - (space.degree_of(j) + space.degree_of(k))
            if defect < 0:
                raise NotALiftingError(
                    f"comultiplication of {labels[i]} has a component "
                    f"{labels[j]}⊗{labels[k]} above its filtration step"
                )
            by_defect_d.setdefault(defect, {}).setdefault(i, {})[(j, k)] = c

    zero_m = {key: {k: c for k, c in col.items() if c} for key, col in by_defect_m.get(0, {}).items()}
    zero_m = {key: col for key, col in zero_m.items() if col}
    if zero_m != B.mul:
        diff_keys = sorted(set(zero_m) ^ set(B.mul)) or sorted(
            key for key in zero_m if zero_m[key] != B.mul.get(key)
        )
        i, j = diff_keys[0]
        raise MalformedDeformationError(
            f"degree-0 part of the tables differs from the base multiplication "
            f"at {labels[i]}·{labels[j]}"
        )
    zero_d = {i: {jk: c for jk, c in terms.items() if c} for i, terms in by_defect_d.get(0, {}).items()}
    zero_d = {i: terms for i, terms in zero_d.items() if terms}
    if zero_d != B.comul:
        diff_keys = sorted(set(zero_d) ^ set(B.comul)) or sorted(
            key for key in zero_d if zero_d[key] != B.comul.get(key)
        )
        raise MalformedDeformationError(
            f"degree-0 part of the tables differs from the base "
            f"comultiplication at {labels[diff_keys[0]]}"
        )

    n = B.dim
    sq = tensor_power(space, 2)
    c2g = sq.code_to_global
    m_corr = []
    d_corr = []
    for s in range(1, L + 1):
        cols = {}
        for (i, j), col in by_defect_m.get(s, {}).items():
            cols[c2g[i * n + j]] = dict(col)
        m_corr.append(GradedMap(sq, space, -s, f, cols))
        dcols = {}
        for i, terms in by_defect_d.get(s, {}).items():
            dcols[i] = {c2g[j * n + k]: c for (j, k), c in terms.items()}
        d_corr.append(GradedMap(space, sq, -s, f, dcols))
    if max(by_defect_m, default=0) > L or max(by_defect_d, default=0) > L:
        raise InternalInvariantError("degree defect exceeds the stabilization level")
    return Deformation(B, L, m_corr, d_corr)


def tables_from_deformation(d: Deformation) -> LiftingTables:
    """Collapse all corrections onto the base tables (the specialization of
    the deformation parameter to 1, taken degree component by component)."""
    B = d.base
    f = B.field
    n = B.dim
    mcodes, dcodes = d._code_maps()
    mul = {}
    for s in range(0, d.level + 1):
        for code, col in mcodes[s].items():
            i, j = divmod(code, n)
            dst = mul.setdefault((i, j), {})
            for k, c in col.items():
                dst[k] = f.add(dst.get(k, f.zero), c)
    comul = {}
    for s in range(0, d.level + 1):
        for i, col in dcodes[s].items():
            dst = comul.setdefault(i, {})
            for code, c in col.items():
                jk = divmod(code, n)
                dst[jk] = f.add(dst.get(jk, f.zero), c)
    counit = {i: c for i, c in enumerate(B.counit)}
    return LiftingTables(B.space, B.unit_index, mul, comul, counit, f)


# --------------------------------------------------------------------------
# deformation files
# --------------------------------------------------------------------------


def emit_deformation(d: Deformation, over: str | None = None) -> str:
    """Render a deformation file; orders with no entries are omitted."""
    B = d.base
    f = B.field
    labels = B.space.labels
    n = B.dim
    name = over or d.base_label or "-"
    lines = [f"deformation level {d.level} over {name}"]
    mcodes, dcodes = d._code_maps()
    for s in range(1, d.level + 1):
        entries = []
        for code, col in sorted(mcodes[s].items()):
            i, j = divmod(code, n)
            for k, c in sorted(col.items()):
                entries.append(f"{labels[k]} <- {labels[i]},{labels[j]} : {f.format(c)}")
        if entries:
            lines.append(f"mul-correction order {s}")
            lines.extend(entries)
    for s in range(1, d.level + 1):
        entries = []
        for i, col in sorted(dcodes[s].items()):
            for code, c in sorted(col.items()):
                j, k = divmod(code, n)
                entries.append(f"{labels[j]},{labels[k]} <- {labels[i]} : {f.format(c)}")
        if entries:
            lines.append(f"comul-correction order {s}")
            lines.extend(entries)
    return "\n".join(lines) + "\n"


def parse_deformation(B: GradedBialgebra, text: str) -> Deformation:
    """Parse a deformation file against its base bialgebra."""
    f = B.field
    space = B.space
    n = B.dim
    level = None
    base_label = None
    mode = None  # ("m"|"d", order)
    m_entries = {}
    d_entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "deformation":
            if level is not None:
                raise ParseError("duplicate deformation header", lineno)
            if len(tokens) != 5 or tokens[1] != "level" or tokens[3] != "over":
                raise ParseError(
                    "header looks like 'deformation level L over NAME'", lineno
                )
            try:
                level = int(tokens[2])
            except ValueError:
                raise ParseError("bad level", lineno) from None
            if level < 0:
                raise ParseError("levels are non-negative", lineno)
            base_label = tokens[4]
        elif tokens[0] in ("mul-correction", "comul-correction"):
            if level is None:
                raise ParseError("corrections before the header", lineno)
            if len(tokens) != 3 or tokens[1] != "order":
                raise ParseError("blocks look like 'mul-correction order s'", lineno)
            try:
                s = int(tokens[2])
            except ValueError:
                raise ParseError("bad order", lineno) from None
            if not 1 <= s <= level:
                raise ParseError(f"order {s} outside 1..{level}", lineno)
            mode = ("m" if tokens[0] == "mul-correction" else "d", s)
        else:
            if mode is None:
                raise ParseError("entry before any correction block", lineno)
            try:
                left, rest = line.split("<-", 1)
                srcpart, scal = rest.split(":", 1)
            except ValueError:
                raise ParseError(
                    "entries look like 'target <- source : scalar'", lineno
                ) from None
            try:
                value = f.parse(scal.strip())
            except Exception as exc:
                raise ParseError(str(exc), lineno) from None
            tlabs = tuple(left.strip().split(","))
            slabs = tuple(srcpart.strip().split(","))
            kind, s = mode
            try:
                tidx = tuple(space.index_of(x) for x in tlabs)
                sidx = tuple(space.index_of(x) for x in slabs)
            except KeyError as exc:
                raise ParseError(str(exc), lineno) from None
            if kind == "m":
                if len(tlabs) != 1 or len(slabs) != 2:
                    raise ParseError("mul entries are 'k <- i,j : c'", lineno)
                i, j = sidx
                (k,) = tidx
                if space.degree_of(k) != space.degree_of(i) + space.degree_of(j) - s:
                    raise ParseError(
                        f"entry violates the order-{s} degree defect", lineno
                    )
                col = m_entries.setdefault(s, {}).setdefault(i * n + j, {})
                col[k] = f.add(col.get(k, f.zero), value)
            else:
                if len(tlabs) != 2 or len(slabs) != 1:
                    raise ParseError("comul entries are 'j,k <- i : c'", lineno)
                (i,) = sidx
                j, k = tidx
                if space.degree_of(j) + space.degree_of(k) != space.degree_of(i) - s:
                    raise ParseError(
                        f"entry violates the order-{s} degree defect", lineno
                    )
                col = d_entries.setdefault(s, {}).setdefault(i, {})
                col[j * n + k] = f.add(col.get(j * n + k, f.zero), value)
    if level is None:
        raise ParseError("missing deformation header")
    sq = tensor_power(space, 2)
    c2g = sq.code_to_global
    m_corr = []
    d_corr = []
    for s in range(1, level + 1):
        cols = {}
        for code, col in m_entries.get(s, {}).items():
            cols[c2g[code]] = col
        m_corr.append(GradedMap(sq, space, -s, f, cols))
        dcols = {}
        for i, col in d_entries.get(s, {}).items():
            dcols[i] = {c2g[code]: c for code, c in col.items()}
        d_corr.append(GradedMap(space, sq, -s, f, dcols))
    out = Deformation(B, level, m_corr, d_corr)
    out.base_label = base_label
    return out
