"""Pure-Python kernels for the hot inner loops.

Two families live here, mirrored one-for-one by the optional compiled
extension (``bideform._speedups``):

* sparse-map kernels: applying the horizontal/vertical differentials to a
  coordinate map between tensor powers, plus the normalized-subcomplex
  embedding and corestriction (whose closure assertions must never fire on
  well-formed input);
* dense modular elimination: reduced row echelon form and an independent
  division-free rank, both over F_p.

A "coordinate map" from B^{\\otimes q} to B^{\\otimes p} is a dict
``{column_code: {row_code: scalar}}`` where a code packs a basis-index tuple
in base ``n = dim B``, most significant digit first.  Scalars are ints
(reduced mod p) when ``tables.prime > 0`` and ``fractions.Fraction``
otherwise; all arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InternalInvariantError

_MAX_TENSOR_EXPONENT = 8


class ContractionTables:
    """Structure-constant tables for one bialgebra, in kernel-friendly form.

    All per-basis data is stored as flat tuples so the compiled twin can walk
    it without attribute chasing.  ``prime == 0`` means rational scalars.
    """

    __slots__ = (
        "n",
        "unit",
        "prime",
        "zero",
        "one",
        "neg_one",
        "mul",
        "rev_mul",
        "comul",
        "rev_comul_first",
        "rev_comul_second",
        "eps",
        "degree",
        "npow",
        "_itercomul",
    )

    def __init__(self, n, unit, prime, mul, comul, eps, degree):
        self.n = n
        self.unit = unit
        self.prime = prime
        if prime:
            self.zero, self.one, self.neg_one = 0, 1, prime - 1
        else:
            self.zero, self.one, self.neg_one = (
                Fraction(0),
                Fraction(1),
                Fraction(-1),
            )
        self.mul = mul
        self.comul = comul
        self.eps = eps
        self.degree = degree
        self.npow = tuple(n**k for k in range(_MAX_TENSOR_EXPONENT + 1))

        rev_mul = [[] for _ in range(n)]
        for uv in range(n * n):
            for k, c in mul[uv]:
                rev_mul[k].append((uv // n, uv % n, c))
        self.rev_mul = tuple(tuple(entry) for entry in rev_mul)

        rev_first = [[] for _ in range(n)]
        rev_second = [[] for _ in range(n)]
        for i in range(n):
            for j, k, c in comul[i]:
                rev_first[j].append((i, k, c))
                rev_second[k].append((i, j, c))
        self.rev_comul_first = tuple(tuple(entry) for entry in rev_first)
        self.rev_comul_second = tuple(tuple(entry) for entry in rev_second)

        self._itercomul = {}

    def itercomul(self, i, p):
        """Iterated comultiplication of basis vector i as a p-tensor,
        left-normalized; returns ((code, coeff), ...)."""
        if p == 1:
            return ((i, self.one),)
        key = (i, p)
        cached = self._itercomul.get(key)
        if cached is not None:
            return cached
        n = self.n
        prime = self.prime
        shift = self.npow[p - 2]
        comul = self.comul
        acc = {}
        for code, c0 in self.itercomul(i, p - 1):
            head, rest = divmod(code, shift)
            for j, k, c in comul[head]:
                newcode = ((j * n + k) * shift) + rest
                v = acc.get(newcode)
                if v is None:
                    acc[newcode] = c0 * c % prime if prime else c0 * c
                else:
                    v = v + c0 * c
                    acc[newcode] = v % prime if prime else v
        result = tuple((code, c) for code, c in sorted(acc.items()) if c)
        self._itercomul[key] = result
        return result


def _prune(vec):
    """Drop exact zeros from a row dict (in place); return it or None."""
    dead = [k for k, v in vec.items() if not v]
    for k in dead:
        del vec[k]
    return vec if vec else None


def _tuple_mul(tab, acode, bcode, width):
    """Slotwise product a_j * b_j of two packed tuples; returns
    {code: coeff} over the width-tensor, possibly empty."""
    n = tab.n
    npow = tab.npow
    mul = tab.mul
    prime = tab.prime
    parts = {0: tab.one}
    for j in range(width):
        sh = npow[width - 1 - j]
        a = (acode // sh) % n
        b = (bcode // sh) % n
        fan = mul[a * n + b]
        if not fan:
            return {}
        new = {}
        for code0, c0 in parts.items():
            base = code0 * n
            for k, c in fan:
                v = c0 * c
                if prime:
                    v %= prime
                key = base + k
                old = new.get(key)
                if old is None:
                    new[key] = v
                else:
                    v = old + v
                    new[key] = v % prime if prime else v
        parts = new
    _prune(parts)
    return parts


def _acc(vec, key, val, prime):
    old = vec.get(key)
    if old is None:
        vec[key] = val
    else:
        val = old + val
        vec[key] = val % prime if prime else val


def _edge_mul_apply(tab, p, b0, rowvec, on_right):
    """Multiply the iterated-comultiplication legs of b0 onto every row
    tuple of ``rowvec`` (left legs for the lambda maps, right for rho)."""
    prime = tab.prime
    out = {}
    for legcode, lc in tab.itercomul(b0, p):
        for rowcode, rv in rowvec.items():
            c0 = lc * rv
            if prime:
                c0 %= prime
            if not c0:
                continue
            if on_right:
                prod = _tuple_mul(tab, rowcode, legcode, p)
            else:
                prod = _tuple_mul(tab, legcode, rowcode, p)
            for ncode, c in prod.items():
                v = c0 * c
                if prime:
                    v %= prime
                _acc(out, ncode, v, prime)
    return _prune(out) or {}


def delta_h_apply(cmap, p, q, tab):
    """Horizontal differential on a coordinate map B^{⊗q} -> B^{⊗p};
    returns the result as a map B^{⊗(q+1)} -> B^{⊗p}."""
    n = tab.n
    prime = tab.prime
    npow = tab.npow
    neg_one = tab.neg_one
    out = {}
    qshift = npow[q]
    sign_last = 1 if (q + 1) % 2 == 0 else 0  # (-1)^{q+1} positive iff q odd
    for col, vec in cmap.items():
        # lambda^p ∘ (Id ⊗ f): prepend a factor, left-multiply its legs.
        for b0 in range(n):
            res = _edge_mul_apply(tab, p, b0, vec, on_right=False)
            if res:
                outvec = out.setdefault(b0 * qshift + col, {})
                for rk, rv in res.items():
                    _acc(outvec, rk, rv, prime)
        # sum_i (-1)^i f ∘ mu_i: split column digit i into a product pair.
        for i in range(q):
            sh = npow[q - 1 - i]
            head, rem = divmod(col, n * sh)
            d, low = divmod(rem, sh)
            negative = i % 2 == 0  # (-1)^{i+1} with 1-based i
            for u, v, c in tab.rev_mul[d]:
                if negative:
                    c = c * neg_one
                    if prime:
                        c %= prime
                newcol = ((head * n + u) * n + v) * sh + low
                outvec = out.setdefault(newcol, {})
                for rk, rv in vec.items():
                    w = c * rv
                    if prime:
                        w %= prime
                    _acc(outvec, rk, w, prime)
        # (-1)^{q+1} rho^p ∘ (f ⊗ Id): append a factor, right-multiply legs.
        for blast in range(n):
            res = _edge_mul_apply(tab, p, blast, vec, on_right=True)
            if res:
                outvec = out.setdefault(col * n + blast, {})
                if sign_last:
                    for rk, rv in res.items():
                        _acc(outvec, rk, rv, prime)
                else:
                    for rk, rv in res.items():
                        w = rv * neg_one
                        if prime:
                            w %= prime
                        _acc(outvec, rk, w, prime)
    return {col: vec for col, vec in out.items() if _prune(vec)}


def _comul_preimages(tab, col, q, by_second):
    """Enumerate tensor tuples S' with sigma (or tau) sending S' onto the
    column tuple: yields (S'_code, productvec, coeff).

    ``by_second=True`` inverts on second legs (sigma: head = product of first
    legs); ``False`` inverts on first legs (tau: tail = product of second
    legs).  ``productvec`` is None until the first factor is absorbed.
    """
    n = tab.n
    npow = tab.npow
    prime = tab.prime
    mul = tab.mul
    table = tab.rev_comul_second if by_second else tab.rev_comul_first
    states = [(0, None, tab.one)]
    for j in range(q):
        d = (col // npow[q - 1 - j]) % n
        cands = table[d]
        if not cands:
            return []
        new_states = []
        for scode, prodvec, c0 in states:
            base = scode * n
            for i, leg, c in cands:
                c1 = c0 * c
                if prime:
                    c1 %= prime
                if prodvec is None:
                    new_states.append((base + i, {leg: tab.one}, c1))
                    continue
                nh = {}
                for hk, hv in prodvec.items():
                    for k2, c2 in mul[hk * n + leg]:
                        v = hv * c2
                        if prime:
                            v %= prime
                        _acc(nh, k2, v, prime)
                if _prune(nh):
                    new_states.append((base + i, nh, c1))
        states = new_states
        if not states:
            return []
    return states


def delta_c_apply(cmap, p, q, tab):
    """Vertical differential on a coordinate map B^{⊗q} -> B^{⊗p};
    returns the result as a map B^{⊗q} -> B^{⊗(p+1)}."""
    n = tab.n
    prime = tab.prime
    npow = tab.npow
    neg_one = tab.neg_one
    out = {}
    pshift = npow[p]
    sign_tau_pos = (p + 1) % 2 == 0  # (-1)^{p+1} positive iff p odd
    for col, vec in cmap.items():
        outvec = out.setdefault(col, {})
        # (Id ⊗ f) ∘ sigma^q: head legs multiply into a new leading factor.
        for scode, head, c1 in _comul_preimages(tab, col, q, by_second=True):
            target = out.setdefault(scode, {}) if scode != col else outvec
            for hk, hv in head.items():
                c2 = c1 * hv
                if prime:
                    c2 %= prime
                if not c2:
                    continue
                base = hk * pshift
                for rk, rv in vec.items():
                    w = c2 * rv
                    if prime:
                        w %= prime
                    _acc(target, base + rk, w, prime)
        # sum_j (-1)^j Delta_j^p ∘ f: expand row digit j by comultiplication.
        for j in range(p):
            sh = npow[p - 1 - j]
            negative = j % 2 == 0  # (-1)^{j+1} with 1-based j
            for rk, rv in vec.items():
                head, rem = divmod(rk, n * sh)
                d, low = divmod(rem, sh)
                for a, b, c in tab.comul[d]:
                    w = rv * c
                    if prime:
                        w %= prime
                    if negative:
                        w = w * neg_one
                        if prime:
                            w %= prime
                    newrow = ((head * n + a) * n + b) * sh + low
                    _acc(outvec, newrow, w, prime)
        # (-1)^{p+1} (f ⊗ Id) ∘ tau^q: tail legs multiply into a trailing factor.
        for scode, tail, c1 in _comul_preimages(tab, col, q, by_second=False):
            target = out.setdefault(scode, {}) if scode != col else outvec
            if not sign_tau_pos:
                c1 = c1 * neg_one
                if prime:
                    c1 %= prime
            for tk, tv in tail.items():
                c2 = c1 * tv
                if prime:
                    c2 %= prime
                if not c2:
                    continue
                for rk, rv in vec.items():
                    w = c2 * rv
                    if prime:
                        w %= prime
                    _acc(target, rk * n + tk, w, prime)
    return {col: vec for col, vec in out.items() if _prune(vec)}


def embed_map(dmap, p, q, tab):
    """Embed a normalized-coefficient map into full tensor coordinates:
    every output basis slot k becomes e_k - eps(e_k)·1."""
    n = tab.n
    prime = tab.prime
    unit = tab.unit
    eps = tab.eps
    out = {}
    for col, vec in dmap.items():
        newvec = {}
        for row, v in vec.items():
            parts = {0: v}
            for j in range(p):
                d = (row // tab.npow[p - 1 - j]) % n
                e = eps[d]
                new = {}
                for code0, c0 in parts.items():
                    base = code0 * n
                    _acc(new, base + d, c0, prime)
                    if e:
                        w = c0 * e
                        if prime:
                            w = (-w) % prime
                        else:
                            w = -w
                        _acc(new, base + unit, w, prime)
                _prune(new)
                parts = new
                if not parts:
                    break
            for code, c in parts.items():
                _acc(newvec, code, c, prime)
        if _prune(newvec):
            out[col] = newvec
    return out


def corestrict_map(cmap, p, q, tab):
    """Corestrict a full-coordinate map back to normalized coefficients.

    Asserts the closure criteria first: columns containing the unit basis
    vector must carry no value, and contracting any output slot with the
    counit must give zero.  Failure raises InternalInvariantError.
    """
    n = tab.n
    prime = tab.prime
    unit = tab.unit
    eps = tab.eps
    npow = tab.npow
    out = {}
    for col, vec in cmap.items():
        code = col
        has_unit = False
        for _ in range(q):
            if code % n == unit:
                has_unit = True
                break
            code //= n
        if has_unit:
            if any(v for v in vec.values()):
                raise InternalInvariantError(
                    "differential left a nonzero value on a unit-bearing column"
                )
            continue
        for j in range(p):
            sh = npow[p - 1 - j]
            acc = {}
            for row, v in vec.items():
                head, rem = divmod(row, n * sh)
                d, low = divmod(rem, sh)
                e = eps[d]
                if e:
                    w = e * v
                    if prime:
                        w %= prime
                    _acc(acc, head * sh + low, w, prime)
            if _prune(acc):
                raise InternalInvariantError(
                    "differential output is not counit-normalized"
                )
        newvec = {}
        for row, v in vec.items():
            code = row
            keep = True
            for _ in range(p):
                if code % n == unit:
                    keep = False
                    break
                code //= n
            if keep:
                newvec[row] = v
        if _prune(newvec):
            out[col] = newvec
    return out


def rref_mod(rows, p):
    """Reduced row echelon form over F_p; returns (rows, pivots)."""
    m = [[x % p for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if m[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], p - 2, p)
        if inv != 1:
            m[r] = [x * inv % p for x in m[r]]
        row = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    mi = m[i]
                    for j in range(c, ncols):
                        mi[j] = (mi[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def ff_rank_mod(rows, p):
    """Rank over F_p by division-free cross-multiplication elimination,
    sweeping columns right to left (independent of rref_mod)."""
    m = [[x % p for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    r = nrows - 1
    for c in range(ncols - 1, -1, -1):
        if r < 0:
            break
        pr = -1
        for i in range(r, -1, -1):
            if m[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        mr = m[r]
        for i in range(r):
            f = m[i][c]
            if f:
                mi = m[i]
                for j in range(c):
                    mi[j] = (piv * mi[j] - f * mr[j]) % p
                mi[c] = 0
        rank += 1
        r -= 1
    return rank
