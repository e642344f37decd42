# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the hot kernels in ``bideform._pure``.

Fast paths are specialized to prime fields with p < 2**31: scalars are
unboxed to C integers inside the inner loops.  Semantics are identical to
the pure implementations; ``tests/test_kernel_backends.py`` cross-checks
the two backends entry for entry.
"""

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.object cimport PyObject

import numpy as np

from . import _pure
from .errors import InternalInvariantError


# --------------------------------------------------------------------------
# dense modular elimination
# --------------------------------------------------------------------------

def rref_mod(rows, long long p):
    """Reduced row echelon form over F_p; returns (rows, pivots)."""
    cdef long long[:, ::1] m = np.array(rows, dtype=np.int64) % p
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, pr
    cdef long long inv, f, piv
    pivots = []
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if m[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(ncols):
                m[r, j], m[pr, j] = m[pr, j], m[r, j]
        piv = m[r, c]
        inv = _inv_mod(piv, p)
        if inv != 1:
            for j in range(c, ncols):
                m[r, j] = (m[r, j] * inv) % p
        for i in range(nrows):
            if i != r:
                f = m[i, c]
                if f != 0:
                    # keep operands non-negative: C % follows the dividend sign
                    for j in range(c, ncols):
                        m[i, j] = (m[i, j] + (p - f) * m[r, j]) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return np.asarray(m).tolist(), pivots


cdef long long _inv_mod(long long a, long long p):
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def ff_rank_mod(rows, long long p):
    """Division-free rank over F_p, sweeping columns right to left."""
    cdef long long[:, ::1] m = np.array(rows, dtype=np.int64) % p
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t ncols = m.shape[1]
    cdef Py_ssize_t r = nrows - 1, c, i, j, pr
    cdef long long piv, f
    cdef long long rank = 0
    for c in range(ncols - 1, -1, -1):
        if r < 0:
            break
        pr = -1
        for i in range(r, -1, -1):
            if m[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(ncols):
                m[r, j], m[pr, j] = m[pr, j], m[r, j]
        piv = m[r, c]
        for i in range(r):
            f = m[i, c]
            if f != 0:
                for j in range(c):
                    m[i, j] = (piv * m[i, j] + (p - f) * m[r, j]) % p
                m[i, c] = 0
        rank += 1
        r -= 1
    return int(rank)


# --------------------------------------------------------------------------
# sparse-map kernels (prime scalars unboxed to C integers)
# --------------------------------------------------------------------------

cdef inline void _acc_int(dict vec, object key, long long val, long long p):
    cdef PyObject* existing = PyDict_GetItem(vec, key)
    if existing is NULL:
        PyDict_SetItem(vec, key, val)
    else:
        PyDict_SetItem(vec, key, (<long long> <object> existing + val) % p)


cdef dict _prune_int(dict vec):
    dead = [k for k, v in vec.items() if not v]
    for k in dead:
        del vec[k]
    return vec


cdef dict _tuple_mul(object tab, long long acode, long long bcode, int width):
    cdef long long n = tab.n
    cdef long long p = tab.prime
    npow = tab.npow
    mul = tab.mul
    cdef dict parts = {0: 1}
    cdef dict new
    cdef long long sh, a, b, v, code0, c0
    cdef int j
    for j in range(width):
        sh = npow[width - 1 - j]
        a = (acode // sh) % n
        b = (bcode // sh) % n
        fan = mul[a * n + b]
        if not fan:
            return {}
        new = {}
        for code0_o, c0_o in parts.items():
            code0 = code0_o
            c0 = c0_o
            for k, c in fan:
                v = (c0 * <long long> c) % p
                _acc_int(new, code0 * n + <long long> k, v, p)
        parts = new
    _prune_int(parts)
    return parts


cdef dict _edge_mul_apply(object tab, int p_out, long long b0, dict rowvec, bint on_right):
    cdef long long p = tab.prime
    cdef dict out = {}
    cdef dict prod
    cdef long long c0, rv
    for legcode, lc in tab.itercomul(b0, p_out):
        for rowcode, rv_o in rowvec.items():
            rv = rv_o
            c0 = (<long long> lc * rv) % p
            if c0 == 0:
                continue
            if on_right:
                prod = _tuple_mul(tab, <long long> rowcode, <long long> legcode, p_out)
            else:
                prod = _tuple_mul(tab, <long long> legcode, <long long> rowcode, p_out)
            for ncode, c in prod.items():
                _acc_int(out, ncode, (c0 * <long long> c) % p, p)
    _prune_int(out)
    return out


def delta_h_apply(dict cmap, int p_out, int q, object tab):
    """Horizontal differential; see the pure twin for the contract."""
    cdef long long n = tab.n
    cdef long long p = tab.prime
    npow = tab.npow
    rev_mul = tab.rev_mul
    cdef long long neg = p - 1
    cdef dict out = {}
    cdef dict outvec, vec, res
    cdef long long col, qshift, sh, head, rem, d, low, newcol, b0, w, cc
    cdef int i
    cdef bint negative
    cdef bint sign_last_pos = ((q + 1) % 2 == 0)
    qshift = npow[q]
    for col_o, vec_o in cmap.items():
        col = col_o
        vec = vec_o
        for b0 in range(n):
            res = _edge_mul_apply(tab, p_out, b0, vec, False)
            if res:
                outvec = _getvec(out, b0 * qshift + col)
                for rk, rv in res.items():
                    _acc_int(outvec, rk, <long long> rv, p)
        for i in range(q):
            sh = npow[q - 1 - i]
            head = col // (n * sh)
            rem = col - head * n * sh
            d = rem // sh
            low = rem - d * sh
            negative = (i % 2 == 0)
            for u, v, c in rev_mul[d]:
                cc = <long long> c
                if negative:
                    cc = (cc * neg) % p
                newcol = ((head * n + <long long> u) * n + <long long> v) * sh + low
                outvec = _getvec(out, newcol)
                for rk, rv in vec.items():
                    w = (cc * <long long> rv) % p
                    _acc_int(outvec, rk, w, p)
        for b0 in range(n):
            res = _edge_mul_apply(tab, p_out, b0, vec, True)
            if res:
                outvec = _getvec(out, col * n + b0)
                if sign_last_pos:
                    for rk, rv in res.items():
                        _acc_int(outvec, rk, <long long> rv, p)
                else:
                    for rk, rv in res.items():
                        _acc_int(outvec, rk, (<long long> rv * neg) % p, p)
    return _prune_map(out)


cdef inline dict _getvec(dict out, long long key):
    cdef PyObject* existing = PyDict_GetItem(out, key)
    cdef dict vec
    if existing is NULL:
        vec = {}
        PyDict_SetItem(out, key, vec)
        return vec
    return <dict> <object> existing


cdef dict _prune_map(dict out):
    cdef dict res = {}
    for col, vec in out.items():
        _prune_int(<dict> vec)
        if vec:
            res[col] = vec
    return res


cdef list _comul_preimages(object tab, long long col, int q, bint by_second):
    cdef long long n = tab.n
    cdef long long p = tab.prime
    npow = tab.npow
    mul = tab.mul
    table = tab.rev_comul_second if by_second else tab.rev_comul_first
    cdef list states = [(0, None, 1)]
    cdef list new_states
    cdef long long d, c1, v
    cdef int j
    for j in range(q):
        d = (col // <long long> npow[q - 1 - j]) % n
        cands = table[d]
        if not cands:
            return []
        new_states = []
        for scode_o, prodvec, c0_o in states:
            for i, leg, c in cands:
                c1 = (<long long> c0_o * <long long> c) % p
                if prodvec is None:
                    new_states.append(
                        ((<long long> scode_o) * n + <long long> i, {leg: 1}, c1)
                    )
                    continue
                nh = {}
                for hk, hv in (<dict> prodvec).items():
                    for k2, c2 in mul[(<long long> hk) * n + <long long> leg]:
                        v = (<long long> hv * <long long> c2) % p
                        _acc_int(nh, k2, v, p)
                _prune_int(nh)
                if nh:
                    new_states.append(
                        ((<long long> scode_o) * n + <long long> i, nh, c1)
                    )
        states = new_states
        if not states:
            return []
    return states


def delta_c_apply(dict cmap, int p_in, int q, object tab):
    """Vertical differential; see the pure twin for the contract."""
    cdef long long n = tab.n
    cdef long long p = tab.prime
    npow = tab.npow
    comul = tab.comul
    cdef long long neg = p - 1
    cdef dict out = {}
    cdef dict outvec, vec, target
    cdef long long col, pshift, sh, head, rem, d, low, newrow, w, c1, c2, rk, rv
    cdef int j
    cdef bint negative
    cdef bint sign_tau_pos = ((p_in + 1) % 2 == 0)
    pshift = npow[p_in]
    for col_o, vec_o in cmap.items():
        col = col_o
        vec = vec_o
        outvec = _getvec(out, col)
        for scode, head_v, c1_o in _comul_preimages(tab, col, q, True):
            target = outvec if <long long> scode == col else _getvec(out, <long long> scode)
            for hk, hv in (<dict> head_v).items():
                c2 = (<long long> c1_o * <long long> hv) % p
                if c2 == 0:
                    continue
                for rk_o, rv_o in vec.items():
                    w = (c2 * <long long> rv_o) % p
                    _acc_int(target, (<long long> hk) * pshift + <long long> rk_o, w, p)
        for j in range(p_in):
            sh = npow[p_in - 1 - j]
            negative = (j % 2 == 0)
            for rk_o, rv_o in vec.items():
                rk = rk_o
                rv = rv_o
                head = rk // (n * sh)
                rem = rk - head * n * sh
                d = rem // sh
                low = rem - d * sh
                for a, b, c in comul[d]:
                    w = (rv * <long long> c) % p
                    if negative:
                        w = (w * neg) % p
                    newrow = ((head * n + <long long> a) * n + <long long> b) * sh + low
                    _acc_int(outvec, newrow, w, p)
        for scode, tail_v, c1_o in _comul_preimages(tab, col, q, False):
            target = outvec if <long long> scode == col else _getvec(out, <long long> scode)
            c1 = c1_o
            if not sign_tau_pos:
                c1 = (c1 * neg) % p
            for tk, tv in (<dict> tail_v).items():
                c2 = (c1 * <long long> tv) % p
                if c2 == 0:
                    continue
                for rk_o, rv_o in vec.items():
                    w = (c2 * <long long> rv_o) % p
                    _acc_int(target, (<long long> rk_o) * n + <long long> tk, w, p)
    return _prune_map(out)


def embed_map(dict dmap, int p_out, int q, object tab):
    """Normalized-coefficient map -> full tensor coordinates."""
    cdef long long n = tab.n
    cdef long long p = tab.prime
    cdef long long unit = tab.unit
    npow = tab.npow
    eps = tab.eps
    cdef dict out = {}
    cdef dict newvec, parts, new
    cdef long long row, d, e, code0, c0, w
    cdef int j
    for col, vec in dmap.items():
        newvec = {}
        for row_o, v in (<dict> vec).items():
            row = row_o
            parts = {0: <long long> v}
            for j in range(p_out):
                d = (row // <long long> npow[p_out - 1 - j]) % n
                e = <long long> eps[d]
                new = {}
                for code0_o, c0_o in parts.items():
                    code0 = code0_o
                    c0 = c0_o
                    _acc_int(new, code0 * n + d, c0, p)
                    if e != 0:
                        w = (p - (c0 * e) % p) % p
                        _acc_int(new, code0 * n + unit, w, p)
                _prune_int(new)
                parts = new
                if not parts:
                    break
            for code, c in parts.items():
                _acc_int(newvec, code, <long long> c, p)
        _prune_int(newvec)
        if newvec:
            out[col] = newvec
    return out


def corestrict_map(dict cmap, int p_out, int q, object tab):
    """Full coordinates -> normalized coefficients, asserting closure."""
    cdef long long n = tab.n
    cdef long long p = tab.prime
    cdef long long unit = tab.unit
    npow = tab.npow
    eps = tab.eps
    cdef dict out = {}
    cdef dict acc, newvec, vec
    cdef long long col, code, row, d, e, sh, head, rem, low, w
    cdef int j
    cdef bint has_unit, keep
    for col_o, vec_o in cmap.items():
        col = col_o
        vec = vec_o
        code = col
        has_unit = False
        for j in range(q):
            if code % n == unit:
                has_unit = True
                break
            code //= n
        if has_unit:
            for v in vec.values():
                if v:
                    raise InternalInvariantError(
                        "differential left a nonzero value on a unit-bearing column"
                    )
            continue
        for j in range(p_out):
            sh = npow[p_out - 1 - j]
            acc = {}
            for row_o, v in vec.items():
                row = row_o
                head = row // (n * sh)
                rem = row - head * n * sh
                d = rem // sh
                low = rem - d * sh
                e = <long long> eps[d]
                if e != 0:
                    w = (e * <long long> v) % p
                    _acc_int(acc, head * sh + low, w, p)
            _prune_int(acc)
            if acc:
                raise InternalInvariantError(
                    "differential output is not counit-normalized"
                )
        newvec = {}
        for row_o, v in vec.items():
            row = row_o
            code = row
            keep = True
            for j in range(p_out):
                if code % n == unit:
                    keep = False
                    break
                code //= n
            if keep:
                newvec[row_o] = v
        _prune_int(newvec)
        if newvec:
            out[col_o] = newvec
    return out
