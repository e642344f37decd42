"""Graded bialgebras by structure constants: model, axiom checker, built-in
examples, and the on-disk definition format.

Structure constants are sparse: ``mul[(i, j)] = {k: c}`` means
e_i·e_j = sum c·e_k, and ``comul[i] = {(j, k): c}`` means
Delta(e_i) = sum c·(e_j ⊗ e_k).  Grading constraints (degree additivity of
both tables, counit vanishing in positive degree, a degree-0 unit basis
vector with counit 1) are enforced at construction time, so only genuinely
axiomatic failures (associativity, coassociativity, compatibility, ...)
reach the checker.
"""

from __future__ import annotations

from .errors import GradingError, MalformedBialgebraError, ParseError, ScalarFormatError
from .fields import QQ, GF, Field, field_from_header
from .graded import GradedSpace, GradedMap, augmentation_split, tensor_power
from ._kernel import ContractionTables
from .report import VerificationReport

__all__ = [
    "GradedBialgebra",
    "SweedlerExpansion",
    "LiftingTables",
    "verify_bialgebra",
    "builtin_example",
    "parse_bialgebra",
    "emit_bialgebra",
    "parse_lifting_tables",
]

_RESERVED_LABEL_CHARS = set(",:#<")


class SweedlerExpansion:
    """Coordinates of a comultiplication value: terms (coeff, left, right),
    duplicates merged, zero coefficients dropped."""

    __slots__ = ("terms",)

    def __init__(self, field: Field, raw_terms):
        acc = {}
        for c, j, k in raw_terms:
            c = field.check(c)
            key = (j, k)
            acc[key] = field.add(acc.get(key, field.zero), c)
        self.terms = tuple(
            (c, j, k) for (j, k), c in sorted(acc.items()) if c
        )

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, SweedlerExpansion) and self.terms == other.terms

    def __repr__(self):
        return f"SweedlerExpansion({self.terms!r})"


class GradedBialgebra:
    """A finite-dimensional graded bialgebra presented by structure constants."""

    def __init__(self, space: GradedSpace, unit_index: int, mul, comul, counit, field: Field):
        self.space = space
        self.field = field
        n = space.dim
        if not 0 <= unit_index < n:
            raise MalformedBialgebraError("unit index out of range")
        if space.degree_of(unit_index) != 0:
            raise GradingError("unit basis vector must have degree 0")
        self.unit_index = unit_index

        eps = [field.zero] * n
        for i, c in dict(counit).items():
            if not 0 <= i < n:
                raise MalformedBialgebraError("counit index out of range")
            c = field.check(c)
            if c and space.degree_of(i) > 0:
                raise GradingError(
                    f"counit must vanish on positive-degree basis vector "
                    f"{space.labels[i]!r}"
                )
            eps[i] = c
        eps[unit_index] = field.one
        self.counit = tuple(eps)

        mul_clean = {}
        for (i, j), col in mul.items():
            dst = {}
            for k, c in col.items():
                c = field.check(c)
                if not c:
                    continue
                if space.degree_of(k) != space.degree_of(i) + space.degree_of(j):
                    raise GradingError(
                        f"product {space.labels[i]}·{space.labels[j]} hits "
                        f"{space.labels[k]} of wrong degree"
                    )
                dst[k] = c
            if dst:
                mul_clean[(i, j)] = dst
        self.mul = mul_clean

        comul_clean = {}
        for i, terms in comul.items():
            dst = {}
            for (j, k), c in terms.items():
                c = field.check(c)
                if not c:
                    continue
                if space.degree_of(j) + space.degree_of(k) != space.degree_of(i):
                    raise GradingError(
                        f"comultiplication of {space.labels[i]} hits "
                        f"{space.labels[j]}⊗{space.labels[k]} of wrong degree"
                    )
                dst[(j, k)] = c
            if dst:
                comul_clean[i] = dst
        self.comul = comul_clean
        self._caches = {}

    # -- basic structure -----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def top_degree(self) -> int:
        return self.space.top_degree

    def product_of(self, i: int, j: int) -> dict:
        """e_i · e_j as a sparse vector {k: coeff}."""
        return dict(self.mul.get((i, j), {}))

    def comul_of(self, i: int) -> SweedlerExpansion:
        return SweedlerExpansion(
            self.field, ((c, j, k) for (j, k), c in self.comul.get(i, {}).items())
        )

    def mul_entries(self):
        for (i, j), col in sorted(self.mul.items()):
            for k, c in sorted(col.items()):
                yield i, j, k, c

    def comul_entries(self):
        for i, terms in sorted(self.comul.items()):
            for (j, k), c in sorted(terms.items()):
                yield i, j, k, c

    def __eq__(self, other):
        return (
            isinstance(other, GradedBialgebra)
            and self.field == other.field
            and self.space == other.space
            and self.unit_index == other.unit_index
            and self.mul == other.mul
            and self.comul == other.comul
            and self.counit == other.counit
        )

    def __repr__(self):
        return f"GradedBialgebra(dim={self.dim}, field={self.field!r})"

    # -- derived views (cached; the object itself is immutable) ---------------

    def tables(self) -> ContractionTables:
        """Structure constants in kernel form."""
        tab = self._caches.get("tables")
        if tab is None:
            n = self.dim
            mul = [()] * (n * n)
            for (i, j), col in self.mul.items():
                mul[i * n + j] = tuple(sorted(col.items()))
            comul = [()] * n
            for i, terms in self.comul.items():
                comul[i] = tuple((j, k, c) for (j, k), c in sorted(terms.items()))
            prime = getattr(self.field, "prime", 0)
            tab = ContractionTables(
                n,
                self.unit_index,
                prime,
                tuple(mul),
                tuple(comul),
                tuple(self.counit),
                tuple(self.space.degrees),
            )
            self._caches["tables"] = tab
        return tab

    def splitting(self):
        """(m_space, include, project) of the augmentation ideal."""
        split = self._caches.get("split")
        if split is None:
            split = self._caches["split"] = augmentation_split(self)
        return split

    def mul_map(self) -> GradedMap:
        m = self._caches.get("mul_map")
        if m is None:
            sq = tensor_power(self.space, 2)
            n = self.dim
            c2g = sq.code_to_global
            cols = {}
            for (i, j), col in self.mul.items():
                cols[c2g[i * n + j]] = dict(col)
            m = GradedMap(sq, self.space, 0, self.field, cols)
            self._caches["mul_map"] = m
        return m

    def comul_map(self) -> GradedMap:
        m = self._caches.get("comul_map")
        if m is None:
            sq = tensor_power(self.space, 2)
            n = self.dim
            c2g = sq.code_to_global
            cols = {}
            for i, terms in self.comul.items():
                cols[i] = {c2g[j * n + k]: c for (j, k), c in terms.items()}
            m = GradedMap(self.space, sq, 0, self.field, cols)
            self._caches["comul_map"] = m
        return m


# -- axiom verification ---------------------------------------------------


def _vec_product(B: GradedBialgebra, va: dict, vb: dict) -> dict:
    f = B.field
    out = {}
    for i, a in va.items():
        for j, b in vb.items():
            col = B.mul.get((i, j))
            if not col:
                continue
            ab = f.mul(a, b)
            for k, c in col.items():
                out[k] = f.add(out.get(k, f.zero), f.mul(ab, c))
    return {k: v for k, v in out.items() if v}


def verify_bialgebra(B: GradedBialgebra) -> VerificationReport:
    """Check every bialgebra axiom by structure-constant contraction.

    Failures are report entries, never exceptions.
    """
    f = B.field
    n = B.dim
    labels = B.space.labels
    unit = B.unit_index
    report = VerificationReport("bialgebra verification")

    # Grading constraints are enforced structurally at construction; recheck.
    grading_ok = B.space.degree_of(unit) == 0 and all(
        not c or B.space.degree_of(i) == 0 for i, c in enumerate(B.counit)
    )
    for (i, j), col in B.mul.items():
        for k in col:
            if B.space.degree_of(k) != B.space.degree_of(i) + B.space.degree_of(j):
                grading_ok = False
    for i, terms in B.comul.items():
        for (j, k) in terms:
            if B.space.degree_of(j) + B.space.degree_of(k) != B.space.degree_of(i):
                grading_ok = False
    report.add("grading", grading_ok)

    # Unit axiom.
    ok, witness = True, None
    for i in range(n):
        left = B.product_of(unit, i)
        right = B.product_of(i, unit)
        want = {i: f.one}
        if left != want or right != want:
            ok, witness = False, f"1·{labels[i]} or {labels[i]}·1 differs from {labels[i]}"
            break
    report.add("unit", ok, witness)

    # Associativity on all basis triples.
    ok, witness = True, None
    for i in range(n):
        for j in range(n):
            eij = B.product_of(i, j)
            for k in range(n):
                lhs = _vec_product(B, eij, {k: f.one})
                rhs = _vec_product(B, {i: f.one}, B.product_of(j, k))
                if lhs != rhs:
                    ok = False
                    witness = f"({labels[i]}·{labels[j]})·{labels[k]} ≠ {labels[i]}·({labels[j]}·{labels[k]})"
                    break
            if not ok:
                break
        if not ok:
            break
    report.add("associativity", ok, witness)

    # Counit axiom: (eps⊗Id)Delta = Id = (Id⊗eps)Delta.
    ok, witness = True, None
    for i in range(n):
        left = {}
        right = {}
        for c, j, k in B.comul_of(i):
            ej = B.counit[j]
            ek = B.counit[k]
            if ej:
                left[k] = f.add(left.get(k, f.zero), f.mul(ej, c))
            if ek:
                right[j] = f.add(right.get(j, f.zero), f.mul(ek, c))
        left = {k: v for k, v in left.items() if v}
        right = {k: v for k, v in right.items() if v}
        if left != {i: f.one} or right != {i: f.one}:
            ok, witness = False, f"counit identity fails on {labels[i]}"
            break
    report.add("counit", ok, witness)

    # Coassociativity on all basis vectors.
    ok, witness = True, None
    for i in range(n):
        lhs = {}
        rhs = {}
        for c, j, k in B.comul_of(i):
            for c2, a, b in B.comul_of(j):
                key = (a, b, k)
                lhs[key] = f.add(lhs.get(key, f.zero), f.mul(c, c2))
            for c2, a, b in B.comul_of(k):
                key = (j, a, b)
                rhs[key] = f.add(rhs.get(key, f.zero), f.mul(c, c2))
        lhs = {k2: v for k2, v in lhs.items() if v}
        rhs = {k2: v for k2, v in rhs.items() if v}
        if lhs != rhs:
            ok, witness = False, f"coassociativity fails on {labels[i]}"
            break
    report.add("coassociativity", ok, witness)

    # Compatibility: Delta and eps are algebra morphisms; Delta(1)=1⊗1, eps(1)=1.
    ok, witness = True, None
    if dict(B.comul.get(unit, {})) != {(unit, unit): f.one}:
        ok, witness = False, "Δ(1) ≠ 1⊗1"
    if ok and B.counit[unit] != f.one:
        ok, witness = False, "ε(1) ≠ 1"
    if ok:
        for i in range(n):
            if not ok:
                break
            for j in range(n):
                prod = B.product_of(i, j)
                # eps multiplicative
                eps_prod = f.zero
                for k, c in prod.items():
                    eps_prod = f.add(eps_prod, f.mul(c, B.counit[k]))
                if eps_prod != f.mul(B.counit[i], B.counit[j]):
                    ok, witness = False, f"ε({labels[i]}·{labels[j]}) ≠ ε⊗ε"
                    break
                # Delta multiplicative
                lhs = {}
                for k, c in prod.items():
                    for c2, a, b in B.comul_of(k):
                        key = (a, b)
                        lhs[key] = f.add(lhs.get(key, f.zero), f.mul(c, c2))
                rhs = {}
                for c1, a1, b1 in B.comul_of(i):
                    for c2, a2, b2 in B.comul_of(j):
                        coeff = f.mul(c1, c2)
                        left = B.product_of(a1, a2)
                        right = B.product_of(b1, b2)
                        for ka, ca in left.items():
                            cc = f.mul(coeff, ca)
                            for kb, cb in right.items():
                                key = (ka, kb)
                                rhs[key] = f.add(
                                    rhs.get(key, f.zero), f.mul(cc, cb)
                                )
                lhs = {k2: v for k2, v in lhs.items() if v}
                rhs = {k2: v for k2, v in rhs.items() if v}
                if lhs != rhs:
                    ok, witness = False, f"Δ({labels[i]}·{labels[j]}) ≠ Δ({labels[i]})Δ({labels[j]})"
                    break
    report.add("compatibility", ok, witness)
    return report


# -- built-in examples -----------------------------------------------------


def _multiplicative_comul(field, space, unit, mul, generators_comul, factorizations):
    """Extend a comultiplication from generators multiplicatively.

    ``factorizations[i] = (g, i2)`` expresses e_i = e_g · e_i2 with e_g a
    generator; the unit maps to 1⊗1.
    """
    comul = {unit: {(unit, unit): field.one}}
    for g, terms in generators_comul.items():
        comul[g] = dict(terms)

    def tensor_square_product(ta, tb):
        out = {}
        for (a1, b1), c1 in ta.items():
            for (a2, b2), c2 in tb.items():
                coeff = field.mul(c1, c2)
                left = mul.get((a1, a2), {})
                right = mul.get((b1, b2), {})
                for ka, ca in left.items():
                    cc = field.mul(coeff, ca)
                    for kb, cb in right.items():
                        key = (ka, kb)
                        out[key] = field.add(out.get(key, field.zero), field.mul(cc, cb))
        return {k: v for k, v in out.items() if v}

    def get(i):
        if i in comul:
            return comul[i]
        g, rest = factorizations[i]
        comul[i] = tensor_square_product(generators_comul[g], get(rest))
        return comul[i]

    for i in range(space.dim):
        if i != unit and i not in generators_comul:
            get(i)
    return comul


def _taft_like(field, n_order, q, truncation=None):
    """Shared constructor for Taft algebras; ``truncation`` overrides the
    nilpotency bound of x (used only for the restricted polynomial case when
    there is no group part, n_order == 1)."""
    t = truncation if truncation is not None else n_order
    labels = {}
    order = []
    for j in range(t):
        for i in range(n_order):
            name = ("" if i == 0 else ("g" if i == 1 else f"g{i}")) + (
                "" if j == 0 else ("x" if j == 1 else f"x{j}")
            )
            if not name:
                name = "1"
            labels[(i, j)] = name
            order.append((j, (i, j)))
    by_degree = {}
    for j, key in order:
        by_degree.setdefault(j, []).append(labels[key])
    space = GradedSpace(sorted(by_degree.items()))
    index = {}
    for (i, j), name in labels.items():
        index[(i, j)] = space.index_of(name)
    unit = index[(0, 0)]

    qpow = [field.one]
    for _ in range(max(0, n_order * t)):
        qpow.append(field.mul(qpow[-1], q))

    mul = {}
    for (i1, j1), a in index.items():
        for (i2, j2), b in index.items():
            if j1 + j2 >= t:
                continue
            coeff = qpow[j1 * i2] if j1 * i2 else field.one
            k = index[((i1 + i2) % n_order, j1 + j2)]
            mul[(a, b)] = {k: coeff}

    generators_comul = {}
    factorizations = {}
    if n_order > 1:
        g = index[(1, 0)]
        generators_comul[g] = {(g, g): field.one}
    if t > 1:
        x = index[(0, 1)]
        if n_order > 1:
            gx_leg = index[(1, 0)]
            generators_comul[x] = {(x, unit): field.one, (gx_leg, x): field.one}
        else:
            generators_comul[x] = {(x, unit): field.one, (unit, x): field.one}
    for (i, j), a in index.items():
        if (i, j) == (0, 0) or a in generators_comul:
            continue
        if i > 0:
            factorizations[a] = (index[(1, 0)], index[(i - 1, j)])
        else:
            factorizations[a] = (index[(0, 1)], index[(0, j - 1)])
    comul = _multiplicative_comul(field, space, unit, mul, generators_comul, factorizations)

    counit = {unit: field.one}
    for (i, j), a in index.items():
        counit[a] = field.one if j == 0 else field.zero
    return GradedBialgebra(space, unit, mul, {i: dict(t_) for i, t_ in comul.items()}, counit, field)


def _multiplicative_order(field, q, bound):
    q = field.check(q)
    if not q:
        return None
    acc = field.one
    for k in range(1, bound + 1):
        acc = field.mul(acc, q)
        if acc == field.one:
            return k
    return None


def builtin_example(name: str, **params) -> GradedBialgebra:
    """Construct a named example bialgebra.

    Names: ``trivial``, ``group_algebra_cyclic`` (n, optional p),
    ``taft`` (n, q, optional p), ``restricted_poly`` (p).  When ``p`` is
    given the base field is F_p, otherwise the rationals.
    """
    p = params.pop("p", None)
    field = GF(int(p)) if p is not None else QQ

    if name == "trivial":
        _reject_extra(name, params)
        space = GradedSpace([(0, ("1",))])
        return GradedBialgebra(space, 0, {(0, 0): {0: field.one}}, {0: {(0, 0): field.one}}, {0: field.one}, field)

    if name == "group_algebra_cyclic":
        n = int(params.pop("n"))
        _reject_extra(name, params)
        if n < 1:
            raise MalformedBialgebraError("cyclic group order must be >= 1")
        labels = ["1"] + ["g" if i == 1 else f"g{i}" for i in range(1, n)]
        space = GradedSpace([(0, tuple(labels))])
        mul = {(i, j): {(i + j) % n: field.one} for i in range(n) for j in range(n)}
        comul = {i: {(i, i): field.one} for i in range(n)}
        counit = {i: field.one for i in range(n)}
        return GradedBialgebra(space, 0, mul, comul, counit, field)

    if name == "taft":
        n = int(params.pop("n"))
        q = params.pop("q")
        _reject_extra(name, params)
        if n < 1:
            raise MalformedBialgebraError("taft order must be >= 1")
        q = field.check(q if not isinstance(q, str) else field.parse(q))
        if _multiplicative_order(field, q, n) != n:
            raise MalformedBialgebraError(
                f"taft parameter q={field.format(q)} is not a primitive "
                f"{n}-th root of unity over {field!r}"
            )
        return _taft_like(field, n, q)

    if name == "restricted_poly":
        _reject_extra(name, params)
        if p is None:
            raise MalformedBialgebraError("restricted_poly requires the prime p")
        char = field.prime
        if char != int(p):
            raise MalformedBialgebraError("restricted_poly must live over F_p")
        return _taft_like(field, 1, field.one, truncation=char)

    raise MalformedBialgebraError(f"unknown example {name!r}")


def _reject_extra(name, params):
    if params:
        raise MalformedBialgebraError(f"unexpected parameters for {name}: {sorted(params)}")


# -- definition file format -------------------------------------------------


def parse_bialgebra(text: str) -> GradedBialgebra:
    """Parse the line-oriented definition format (strictly graded)."""
    parsed = _parse_definition(text, graded=True)
    try:
        return GradedBialgebra(*parsed)
    except (GradingError, MalformedBialgebraError, ScalarFormatError) as exc:
        raise ParseError(str(exc)) from exc


class LiftingTables:
    """Multiplication/comultiplication tables on a graded space, without the
    grading constraints; input to the lifting decomposition."""

    def __init__(self, space, unit_index, mul, comul, counit, field):
        self.space = space
        self.unit_index = unit_index
        self.mul = {key: {k: field.check(c) for k, c in col.items() if field.check(c)} for key, col in mul.items()}
        self.mul = {key: col for key, col in self.mul.items() if col}
        self.comul = {i: {jk: field.check(c) for jk, c in terms.items() if field.check(c)} for i, terms in comul.items()}
        self.comul = {i: terms for i, terms in self.comul.items() if terms}
        eps = [field.zero] * space.dim
        for i, c in dict(counit).items():
            eps[i] = field.check(c)
        self.counit = tuple(eps)
        self.field = field


def parse_lifting_tables(text: str) -> LiftingTables:
    """Parse the definition format without enforcing degree additivity."""
    return LiftingTables(*_parse_definition(text, graded=False))


def _tokenize(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield lineno, line.split()


def _parse_definition(text, graded):
    field = None
    basis = []  # (label, degree)
    seen = {}
    unit_label = None
    counit_entries = []  # (lineno, label, scalar-text)
    mul_entries = []  # (lineno, a, b, k, scalar-text)
    comul_entries = []
    for lineno, tokens in _tokenize(text):
        kind, args = tokens[0], tokens[1:]
        if kind == "field":
            if field is not None:
                raise ParseError("duplicate field line", lineno)
            try:
                field = field_from_header(*args)
            except (ScalarFormatError, TypeError) as exc:
                raise ParseError(str(exc), lineno) from None
        elif kind == "basis":
            if len(args) != 2:
                raise ParseError("basis lines take a label and a degree", lineno)
            label, deg_text = args
            if any(ch in _RESERVED_LABEL_CHARS for ch in label):
                raise ParseError(f"label {label!r} contains a reserved character", lineno)
            if label in seen:
                raise ParseError(f"duplicate basis label {label!r}", lineno)
            try:
                degree = int(deg_text)
            except ValueError:
                raise ParseError(f"bad degree {deg_text!r}", lineno) from None
            if degree < 0:
                raise ParseError("degrees must be non-negative", lineno)
            seen[label] = degree
            basis.append((label, degree))
        elif kind == "unit":
            if len(args) != 1:
                raise ParseError("unit lines take one label", lineno)
            unit_label = (lineno, args[0])
        elif kind == "counit":
            if len(args) != 2:
                raise ParseError("counit lines take a label and a scalar", lineno)
            counit_entries.append((lineno, args[0], args[1]))
        elif kind in ("mul", "comul"):
            if len(args) != 4:
                raise ParseError(f"{kind} lines take three labels and a scalar", lineno)
            (mul_entries if kind == "mul" else comul_entries).append(
                (lineno, args[0], args[1], args[2], args[3])
            )
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)

    if field is None:
        raise ParseError("missing field line")
    if not basis:
        raise ParseError("no basis vectors declared")

    by_degree = {}
    for label, degree in basis:
        by_degree.setdefault(degree, []).append(label)
    space = GradedSpace(sorted(by_degree.items()))
    index = {label: space.index_of(label) for label, _ in basis}
    degree_of = dict(basis)

    if unit_label is None:
        unit_lab = basis[0][0]
        unit_line = None
    else:
        unit_line, unit_lab = unit_label
        if unit_lab not in index:
            raise ParseError(f"unknown unit label {unit_lab!r}", unit_line)
    if degree_of[unit_lab] != 0:
        raise ParseError(f"unit {unit_lab!r} must have degree 0", unit_line)
    unit = index[unit_lab]

    def resolve(lineno, label):
        try:
            return index[label]
        except KeyError:
            raise ParseError(f"unknown basis label {label!r}", lineno) from None

    counit = {}
    for lineno, label, sc in counit_entries:
        i = resolve(lineno, label)
        try:
            value = field.parse(sc)
        except ScalarFormatError as exc:
            raise ParseError(str(exc), lineno) from None
        if label == unit_lab:
            if value != field.one:
                raise ParseError("the unit's counit value is forced to 1", lineno)
            continue
        if graded and value and degree_of[label] > 0:
            raise ParseError(
                f"counit must vanish on positive-degree label {label!r}", lineno
            )
        counit[i] = value
    counit[unit] = field.one

    mul = {}
    for lineno, a, b, k, sc in mul_entries:
        ia, ib, ik = resolve(lineno, a), resolve(lineno, b), resolve(lineno, k)
        try:
            value = field.parse(sc)
        except ScalarFormatError as exc:
            raise ParseError(str(exc), lineno) from None
        if graded and degree_of[k] != degree_of[a] + degree_of[b]:
            raise ParseError(
                f"grading violation: {a}·{b} cannot hit {k} "
                f"(degrees {degree_of[a]}+{degree_of[b]} vs {degree_of[k]})",
                lineno,
            )
        col = mul.setdefault((ia, ib), {})
        col[ik] = field.add(col.get(ik, field.zero), value)
    comul = {}
    for lineno, a, j, k, sc in comul_entries:
        ia, ij, ik = resolve(lineno, a), resolve(lineno, j), resolve(lineno, k)
        try:
            value = field.parse(sc)
        except ScalarFormatError as exc:
            raise ParseError(str(exc), lineno) from None
        if graded and degree_of[j] + degree_of[k] != degree_of[a]:
            raise ParseError(
                f"grading violation: Δ({a}) cannot hit {j}⊗{k}", lineno
            )
        terms = comul.setdefault(ia, {})
        key = (ij, ik)
        terms[key] = field.add(terms.get(key, field.zero), value)

    return space, unit, mul, comul, counit, field


def emit_bialgebra(B: GradedBialgebra) -> str:
    """Canonical text form; parse(emit(B)) == B including basis order."""
    f = B.field
    prime = getattr(f, "prime", 0)
    lines = [f"field prime {prime}" if prime else "field rational"]
    labels = B.space.labels
    for i, label in enumerate(labels):
        lines.append(f"basis {label} {B.space.degree_of(i)}")
    lines.append(f"unit {labels[B.unit_index]}")
    for i, c in enumerate(B.counit):
        if i != B.unit_index and c:
            lines.append(f"counit {labels[i]} {f.format(c)}")
    for i, j, k, c in B.mul_entries():
        lines.append(f"mul {labels[i]} {labels[j]} {labels[k]} {f.format(c)}")
    for i, j, k, c in B.comul_entries():
        lines.append(f"comul {labels[i]} {labels[j]} {labels[k]} {f.format(c)}")
    return "\n".join(lines) + "\n"
