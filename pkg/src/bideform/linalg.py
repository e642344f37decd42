"""Exact dense linear algebra: RREF, kernel bases, solving, dual-method rank.

Matrices are immutable value objects over a single field.  The reduced row
echelon form is the primitive everything else is derived from; kernel bases
and particular solutions use the canonical free-variable parametrization
(free variables set to 1 one at a time, in increasing column order), so all
outputs are deterministic.

Over prime fields the elimination is delegated to the kernel backend
(compiled when available); over the rationals it runs here on ``Fraction``
entries.  ``ff_rank`` is the independent fraction-free rank oracle paired
with ``rref`` in the test suite.
"""

from __future__ import annotations

from math import gcd

from . import _kernel
from .errors import DimensionMismatchError, ScalarFormatError
from .fields import Field, QQ

__all__ = ["Matrix", "rref", "kernel_basis", "solve", "ff_rank"]


class Matrix:
    """Immutable dense matrix over one exact field."""

    __slots__ = ("field", "nrows", "ncols", "entries")

    def __init__(self, field: Field, rows, ncols: int | None = None):
        self.field = field
        data = []
        width = ncols
        for row in rows:
            checked = tuple(field.check(x) for x in row)
            if width is None:
                width = len(checked)
            elif len(checked) != width:
                raise DimensionMismatchError("ragged rows in matrix")
            data.append(checked)
        if width is None:
            raise DimensionMismatchError(
                "cannot infer column count of a 0-row matrix; pass ncols"
            )
        self.entries = tuple(data)
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        zero = field.zero
        return cls(field, [[zero] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        zero, one = field.zero, field.one
        return cls(
            field, [[one if i == j else zero for j in range(n)] for i in range(n)], n
        )

    @classmethod
    def from_columns(cls, field: Field, columns, nrows: int) -> "Matrix":
        cols = [tuple(field.check(x) for x in col) for col in columns]
        for col in cols:
            if len(col) != nrows:
                raise DimensionMismatchError("column of wrong height")
        rows = [[col[i] for col in cols] for i in range(nrows)]
        return cls(field, rows, len(cols))

    def at(self, i: int, j: int):
        return self.entries[i][j]

    def row(self, i: int):
        return self.entries[i]

    def column(self, j: int):
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
        )

    def is_zero(self) -> bool:
        zero = self.field.zero
        return all(x == zero for row in self.entries for x in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.entries == other.entries
            and self.ncols == other.ncols
        )

    def __hash__(self):
        return hash((self.field, self.ncols, self.entries))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"

    def __add__(self, other: "Matrix") -> "Matrix":
        f = self.field.unify(other.field)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatchError("matrix addition shape mismatch")
        return Matrix(
            f,
            [
                [f.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        f = self.field.unify(other.field)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatchError("matrix subtraction shape mismatch")
        return Matrix(
            f,
            [
                [f.sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            self.ncols,
        )

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.check(c)
        return Matrix(
            f, [[f.mul(c, x) for x in row] for row in self.entries], self.ncols
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        f = self.field.unify(other.field)
        if self.ncols != other.nrows:
            raise DimensionMismatchError("matrix product shape mismatch")
        zero = f.zero
        out = []
        bt = other.transpose().entries
        for ra in self.entries:
            row = []
            for cb in bt:
                acc = zero
                for a, b in zip(ra, cb):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(f, out, other.ncols)

    def apply(self, vec):
        """Matrix-vector product; ``vec`` is a sequence of scalars."""
        f = self.field
        vec = [f.check(x) for x in vec]
        if len(vec) != self.ncols:
            raise DimensionMismatchError("vector length mismatch")
        zero = f.zero
        out = []
        for row in self.entries:
            acc = zero
            for a, b in zip(row, vec):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return tuple(out)

    # -- elimination ------------------------------------------------------

    def rref(self):
        """Return (R, pivots, rank) with R the reduced row echelon form."""
        field = self.field
        prime = getattr(field, "prime", 0)
        if self.nrows == 0 or self.ncols == 0:
            return self, (), 0
        if prime:
            rows, pivots = _kernel.rref_mod([list(r) for r in self.entries], prime)
            return Matrix(field, rows, self.ncols), tuple(pivots), len(pivots)
        rows, pivots = _rref_field(self.entries, field)
        return Matrix(field, rows, self.ncols), tuple(pivots), len(pivots)

    def rank(self) -> int:
        return self.rref()[2]

    def kernel_basis(self):
        """Basis of the right null space, canonically parametrized."""
        field = self.field
        r, pivots, _ = self.rref()
        pivot_set = set(pivots)
        free_cols = [j for j in range(self.ncols) if j not in pivot_set]
        zero, one = field.zero, field.one
        basis = []
        for j in free_cols:
            vec = [zero] * self.ncols
            vec[j] = one
            for i, pc in enumerate(pivots):
                vec[pc] = field.neg(r.at(i, j))
            basis.append(tuple(vec))
        return basis

    def solve(self, b):
        """Solve ``self @ x = b``.

        Returns ``(particular, kernel_basis)`` with free variables set to
        zero, or ``None`` when the system is inconsistent.
        """
        field = self.field
        b = [field.check(x) for x in b]
        if len(b) != self.nrows:
            raise DimensionMismatchError("right-hand side length mismatch")
        aug = Matrix(
            field,
            [list(row) + [bv] for row, bv in zip(self.entries, b)],
            self.ncols + 1,
        )
        r, pivots, _ = aug.rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        zero = field.zero
        x = [zero] * self.ncols
        for i, pc in enumerate(pivots):
            x[pc] = r.at(i, self.ncols)
        return tuple(x), self.kernel_basis()


def _rref_field(entries, field):
    """Generic in-Python RREF used for rational matrices."""
    m = [list(row) for row in entries]
    nrows, ncols = len(m), len(m[0])
    zero = field.zero
    pivots = []
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if m[i][c] != zero:
                pr = i
                break
        if pr < 0:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        if inv != field.one:
            m[r] = [field.mul(inv, x) for x in m[r]]
        row = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f != zero:
                    mi = m[i]
                    for j in range(c, ncols):
                        if row[j] != zero:
                            mi[j] = field.sub(mi[j], field.mul(f, row[j]))
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


# -- spec-level operation names -------------------------------------------


def rref(matrix: Matrix):
    """Reduced row echelon form: returns (R, pivots, rank)."""
    return matrix.rref()


def kernel_basis(matrix: Matrix):
    """Canonical basis of {v : Mv = 0}."""
    return matrix.kernel_basis()


def solve(matrix: Matrix, b):
    """Particular solution plus kernel basis, or None when inconsistent."""
    return matrix.solve(b)


def ff_rank(matrix: Matrix) -> int:
    """Rank by fraction-free elimination; independent of ``rref``.

    Over F_p this is a division-free cross-multiplication sweep; over the
    rationals the rows are scaled to integers and eliminated by the
    two-step determinant (Bareiss) recurrence.
    """
    prime = getattr(matrix.field, "prime", 0)
    if matrix.nrows == 0 or matrix.ncols == 0:
        return 0
    if prime:
        return _kernel.ff_rank_mod([list(r) for r in matrix.entries], prime)
    if matrix.field != QQ:
        raise ScalarFormatError(f"unsupported field for ff_rank: {matrix.field}")
    rows = []
    for row in matrix.entries:
        scale = 1
        for x in row:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        rows.append([int(x * scale) for x in row])
    return _bareiss_rank(rows)


def _bareiss_rank(rows) -> int:
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    r = 0
    prev = 1
    for c in range(ncols):
        if r >= nrows:
            break
        pr = -1
        for i in range(r, nrows):
            if m[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            f = m[i][c]
            mi, mr = m[i], m[r]
            for j in range(c + 1, ncols):
                mi[j] = (piv * mi[j] - f * mr[j]) // prev
            mi[c] = 0
        prev = piv
        rank += 1
        r += 1
    return rank
